#pragma once

// A-contrario decision stage. The background model H0 treats thresholded
// heatmap cells as i.i.d. Bernoulli(p); a candidate region S with n cells of
// which r are on is scored by
//
//     NFA(S) = #S * Pr(R >= r),   R ~ Binomial(n, p),
//
// where #S is the number of candidates tested. NFA(S) bounds the expected
// number of equally extreme regions under H0, so keeping only NFA < 1
// ("meaningful") regions bounds the expected false alarms per image by one.
// The binomial tail is computed exactly in log space for moderate n and by
// the Hoeffding/Chernoff bound beyond; the bound only over-estimates tails,
// which preserves the false-alarm guarantee.

#include <cstdint>
#include <string_view>

#include "acdetect/proposals.hpp"
#include "acdetect/types.hpp"

namespace acd {

enum class TailMode : std::uint8_t { Exact, Hoeffding, Auto };

std::string_view to_string(TailMode mode);
TailMode tail_mode_from_string(std::string_view name);

struct AcontrarioConfig {
    double threshold_c = 0.75;       // heatmap binarization, strict >
    TailMode tail_mode = TailMode::Auto;
    int auto_cutoff_n = 10000;       // exact tail up to this n, Hoeffding beyond
    double score_decades = 10.0;     // NFA decades mapped onto the [0,1] score

    void validate() const; // ConfigError on out-of-range parameters
};

// bit = 1 iff value > c (strict). Throws ConfigError unless c is in (0,1).
BinaryMask threshold_heatmap(const Heatmap& heatmap, double c);

// Laplace-smoothed fraction of one cells, (ones + 1) / (N + 2). The raw
// ratio would reach 0 or 1 on degenerate masks and make tails collapse;
// smoothing keeps p strictly inside (0,1) and is negligible otherwise.
double estimate_p(const BinaryMask& mask);

// Pr(R >= r) for R ~ Binomial(n, p), summed with a stable log-space
// recurrence; absolute error <= 1e-12 for n <= 1e4. Throws DomainError on
// r > n, negative counts, or p outside (0,1).
double binom_tail_exact(std::int64_t n, std::int64_t r, double p);

// Chernoff-Hoeffding upper bound exp(-n KL(r/n || p)) for r/n > p, 1
// otherwise; never below binom_tail_exact for the same arguments.
double binom_tail_hoeffding(std::int64_t n, std::int64_t r, double p);

// NFA statistics of one region against a thresholded mask.
NfaRecord evaluate_nfa(const Region& region, const BinaryMask& mask, double p,
                       std::int64_t candidate_count, const AcontrarioConfig& cfg);

// Full single-channel decision: threshold, estimate p, compute every NFA,
// keep meaningful regions, cull them to a disjoint list in ascending NFA
// order (ties: larger region, then smaller id), and derive the channel
// score from the smallest kept NFA. Deterministic under any permutation of
// the proposal list.
ChannelResult detect_channel(const Heatmap& heatmap, const RegionProposalSet& proposals,
                             const AcontrarioConfig& cfg);

} // namespace acd
