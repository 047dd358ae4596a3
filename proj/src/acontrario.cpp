#include "acdetect/acontrario.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "acdetect/fusion.hpp"

namespace acd {

namespace {

void check_binomial_args(std::int64_t n, std::int64_t r, double p) {
    if (n < 0 || r < 0 || r > n) throw DomainError("binomial tail requires 0 <= r <= n");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("binomial tail requires p in (0,1)");
}

double log_first_term(std::int64_t n, std::int64_t k, double logp, double log1mp) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0) +
           static_cast<double>(k) * logp + static_cast<double>(n - k) * log1mp;
}

} // namespace

std::string_view to_string(TailMode mode) {
    switch (mode) {
        case TailMode::Exact: return "exact";
        case TailMode::Hoeffding: return "hoeffding";
        case TailMode::Auto: return "auto";
    }
    return "unknown";
}

TailMode tail_mode_from_string(std::string_view name) {
    if (name == "exact") return TailMode::Exact;
    if (name == "hoeffding") return TailMode::Hoeffding;
    if (name == "auto") return TailMode::Auto;
    throw ConfigError("unknown tail mode: " + std::string(name));
}

void AcontrarioConfig::validate() const {
    if (!(threshold_c > 0.0 && threshold_c < 1.0))
        throw ConfigError("threshold must be in (0,1)");
    if (!(score_decades > 0.0)) throw ConfigError("score_decades must be positive");
    if (auto_cutoff_n < 0) throw ConfigError("auto_cutoff_n must be nonnegative");
}

BinaryMask threshold_heatmap(const Heatmap& heatmap, double c) {
    if (!(c > 0.0 && c < 1.0)) throw ConfigError("threshold must be in (0,1)");
    BinaryMask mask;
    mask.geometry = heatmap.geometry;
    mask.bits.resize(heatmap.values.size());
    for (size_t i = 0; i < heatmap.values.size(); ++i)
        mask.bits[i] = heatmap.values[i] > c ? 1 : 0;
    return mask;
}

double estimate_p(const BinaryMask& mask) {
    const std::int64_t total = static_cast<std::int64_t>(mask.bits.size());
    if (total < 1) throw DomainError("mask must contain at least one cell");
    return (static_cast<double>(mask.ones()) + 1.0) / (static_cast<double>(total) + 2.0);
}

double binom_tail_exact(std::int64_t n, std::int64_t r, double p) {
    check_binomial_args(n, r, p);
    if (r == 0) return 1.0;

    const double logp = std::log(p);
    const double log1mp = std::log1p(-p);
    double term = std::exp(log_first_term(n, r, logp, log1mp));

    // Kahan summation; the term recurrence is resynced from lgamma
    // periodically (drift control) and whenever a term has underflowed to
    // zero, so a vanishing left tail cannot wipe out the mass at the mode.
    double sum = term;
    double comp = 0.0;
    const double odds = p / (1.0 - p);
    const double past_mode = p * static_cast<double>(n + 1);
    for (std::int64_t k = r + 1; k <= n; ++k) {
        if (term == 0.0 || (k - r) % 2048 == 0) {
            term = std::exp(log_first_term(n, k, logp, log1mp));
        } else {
            term *= odds * static_cast<double>(n - k + 1) / static_cast<double>(k);
        }
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        // once past the mode terms decay geometrically; the dropped rest is
        // below (n - k) * term <= 1e-16
        if (term < 1e-20 && static_cast<double>(k) > past_mode) break;
    }
    return std::min(sum, 1.0);
}

double binom_tail_hoeffding(std::int64_t n, std::int64_t r, double p) {
    check_binomial_args(n, r, p);
    if (r == 0) return 1.0;
    // a = 1 limit of the divergence; written as the identical expression the
    // exact tail reduces to at r = n so the bound can never dip below it
    if (r == n) return std::exp(static_cast<double>(n) * std::log(p));

    const double a = static_cast<double>(r) / static_cast<double>(n);
    if (a <= p) return 1.0;
    const double b = static_cast<double>(n - r) / static_cast<double>(n);
    const double kl = a * std::log(a / p) + b * std::log(b / (1.0 - p));
    return std::min(1.0, std::exp(-static_cast<double>(n) * kl));
}

NfaRecord evaluate_nfa(const Region& region, const BinaryMask& mask, double p,
                       std::int64_t candidate_count, const AcontrarioConfig& cfg) {
    if (candidate_count < 1) throw DomainError("candidate count must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("background probability must be in (0,1)");
    std::int64_t r = 0;
    for (const Cell& c : region.cells) {
        if (!mask.geometry.cell_in_bounds(c.u, c.v))
            throw DomainError("region cell outside the mask");
        r += mask.at(c.u, c.v);
    }
    const std::int64_t n = static_cast<std::int64_t>(region.cells.size());

    double tail;
    switch (cfg.tail_mode) {
        case TailMode::Exact: tail = binom_tail_exact(n, r, p); break;
        case TailMode::Hoeffding: tail = binom_tail_hoeffding(n, r, p); break;
        case TailMode::Auto:
        default:
            tail = n <= cfg.auto_cutoff_n ? binom_tail_exact(n, r, p)
                                          : binom_tail_hoeffding(n, r, p);
            break;
    }

    NfaRecord rec;
    rec.region_id = region.id;
    rec.n = static_cast<int>(n);
    rec.r = static_cast<int>(r);
    rec.p = p;
    rec.tail = tail;
    rec.nfa = static_cast<double>(candidate_count) * tail;
    rec.meaningful = rec.nfa < 1.0;
    return rec;
}

ChannelResult detect_channel(const Heatmap& heatmap, const RegionProposalSet& proposals,
                             const AcontrarioConfig& cfg) {
    cfg.validate();
    ChannelResult result;
    result.channel = heatmap.channel;
    result.geometry = heatmap.geometry;
    result.candidate_count = proposals.candidate_count;
    if (proposals.candidate_count == 0) return result;

    const BinaryMask mask = threshold_heatmap(heatmap, cfg.threshold_c);
    const double p = estimate_p(mask);

    result.all_records.reserve(proposals.regions.size());
    for (const Region& region : proposals.regions)
        result.all_records.push_back(
            evaluate_nfa(region, mask, p, proposals.candidate_count, cfg));
    std::sort(result.all_records.begin(), result.all_records.end(),
              [](const NfaRecord& a, const NfaRecord& b) { return a.region_id < b.region_id; });

    // meaningful regions, most significant first; ties favor larger regions
    std::unordered_map<int, const Region*> by_id;
    by_id.reserve(proposals.regions.size());
    for (const Region& region : proposals.regions) {
        if (!by_id.emplace(region.id, &region).second)
            throw DomainError("duplicate region id in proposal set");
    }
    std::vector<NfaRecord> meaningful;
    for (const NfaRecord& rec : result.all_records)
        if (rec.meaningful) meaningful.push_back(rec);
    std::sort(meaningful.begin(), meaningful.end(), [](const NfaRecord& a, const NfaRecord& b) {
        if (a.nfa != b.nfa) return a.nfa < b.nfa;
        if (a.n != b.n) return a.n > b.n;
        return a.region_id < b.region_id;
    });

    std::vector<std::uint8_t> taken(static_cast<size_t>(heatmap.geometry.cell_count()), 0);
    for (const NfaRecord& rec : meaningful) {
        const Region* region = by_id.at(rec.region_id);
        bool overlap = false;
        for (const Cell& c : region->cells) {
            if (taken[static_cast<size_t>(c.v) * heatmap.geometry.hm_width + c.u]) {
                overlap = true;
                break;
            }
        }
        if (overlap) continue;
        for (const Cell& c : region->cells)
            taken[static_cast<size_t>(c.v) * heatmap.geometry.hm_width + c.u] = 1;
        result.detections.emplace_back(*region, rec);
    }

    if (!result.detections.empty())
        result.score = channel_score(result.detections.front().second.nfa, cfg.score_decades);
    return result;
}

} // namespace acd
