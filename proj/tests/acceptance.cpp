// Acceptance suite. Each test case checks one release criterion end to end
// and prints a PASS/FAIL line with the measured quantity, so a failed run
// shows exactly which guarantee broke and by how much.

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "acdetect/acontrario.hpp"
#include "acdetect/analyze.hpp"
#include "acdetect/eval.hpp"
#include "acdetect/features.hpp"
#include "acdetect/fusion.hpp"
#include "acdetect/heatmap_io.hpp"
#include "acdetect/image_io.hpp"
#include "acdetect/proposals.hpp"
#include "acdetect/synth.hpp"

using namespace acd;

namespace {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report_line(int index, const char* name, bool pass, const std::string& detail,
                 double seconds) {
    std::printf("[%2d] %-34s %s (%s, %.1fs)\n", index, name, pass ? "PASS" : "FAIL",
                detail.c_str(), seconds);
    std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// exact big-integer arithmetic for the binomial-tail oracle
// ---------------------------------------------------------------------------

struct BigUint {
    std::vector<std::uint64_t> limbs; // little-endian, base 2^64

    explicit BigUint(std::uint64_t v = 0) : limbs{v} {}

    void mul_small(std::uint64_t m) {
        unsigned __int128 carry = 0;
        for (auto& limb : limbs) {
            const unsigned __int128 cur = static_cast<unsigned __int128>(limb) * m + carry;
            limb = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        while (carry != 0) {
            limbs.push_back(static_cast<std::uint64_t>(carry));
            carry >>= 64;
        }
    }

    void add(const BigUint& other) {
        limbs.resize(std::max(limbs.size(), other.limbs.size()), 0);
        unsigned __int128 carry = 0;
        for (size_t i = 0; i < limbs.size(); ++i) {
            unsigned __int128 cur = carry + limbs[i];
            if (i < other.limbs.size()) cur += other.limbs[i];
            limbs[i] = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        if (carry != 0) limbs.push_back(static_cast<std::uint64_t>(carry));
    }

    long double to_long_double() const {
        long double v = 0.0L;
        for (size_t i = limbs.size(); i-- > 0;) v = v * 18446744073709551616.0L + limbs[i];
        return v;
    }
};

// Pr(R >= r) for every r at once, for p = percent/100, summed in exact
// integer arithmetic: tail(r) * 100^n = sum_{k>=r} C(n,k) percent^k
// (100-percent)^(n-k). Only the final division rounds.
std::vector<long double> oracle_tails(int n, int percent) {
    // C(n,k) fits in uint64 for n <= 60
    std::vector<std::vector<std::uint64_t>> choose(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        choose[static_cast<size_t>(i)].assign(static_cast<size_t>(i) + 1, 1);
        for (int k = 1; k < i; ++k)
            choose[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                choose[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] +
                choose[static_cast<size_t>(i - 1)][static_cast<size_t>(k)];
    }
    const std::uint64_t a = static_cast<std::uint64_t>(percent);
    const std::uint64_t b = static_cast<std::uint64_t>(100 - percent);
    long double denom = 1.0L;
    for (int i = 0; i < n; ++i) denom *= 100.0L;

    std::vector<long double> tails(static_cast<size_t>(n) + 1);
    BigUint acc(0);
    for (int r = n; r >= 0; --r) {
        BigUint term(choose[static_cast<size_t>(n)][static_cast<size_t>(r)]);
        for (int i = 0; i < r; ++i) term.mul_small(a);
        for (int i = 0; i < n - r; ++i) term.mul_small(b);
        acc.add(term);
        tails[static_cast<size_t>(r)] = acc.to_long_double() / denom;
    }
    return tails;
}

double cell_iou(const std::vector<Cell>& a, const std::vector<Cell>& b) {
    std::vector<Cell> inter, uni;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    return uni.empty() ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

HeatmapGeometry grid64_geometry() {
    HeatmapGeometry geom;
    geom.hm_width = 64;
    geom.hm_height = 64;
    geom.image_width = geom.patch_size + geom.stride * 63;
    geom.image_height = geom.image_width;
    return geom;
}

} // namespace

TEST_CASE("criterion 1: exact binomial tail matches the big-integer oracle") {
    Stopwatch timer;
    long double worst = 0.0L;
    for (int n = 1; n <= 60; ++n) {
        for (int percent : {1, 5, 10, 30, 50, 90}) {
            const auto tails = oracle_tails(n, percent);
            const double p = percent / 100.0;
            for (int r = 0; r <= n; ++r) {
                const long double got = binom_tail_exact(n, r, p);
                const long double err = got - tails[static_cast<size_t>(r)];
                worst = std::max(worst, err < 0.0L ? -err : err);
            }
        }
    }
    const bool pass = worst <= 1e-12L;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "max |err| = %.2Le over n<=60, all r, 6 p values",
                  worst);
    report_line(1, "binomial-tail-oracle", pass, detail, timer.seconds());
    CHECK(pass);
    CHECK(timer.seconds() < 10.0);
}

TEST_CASE("criterion 2: Hoeffding bound dominates the exact tail") {
    Stopwatch timer;
    std::int64_t violations = 0;
    std::int64_t checked = 0;
    for (int n = 1; n <= 200; ++n) {
        for (int percent = 1; percent <= 99; ++percent) {
            const double p = percent / 100.0;
            for (int r = 0; r <= n; ++r) {
                ++checked;
                if (binom_tail_hoeffding(n, r, p) < binom_tail_exact(n, r, p)) ++violations;
            }
        }
    }
    const bool pass = violations == 0;
    report_line(2, "hoeffding-dominance", pass,
                std::to_string(violations) + " violations in " + std::to_string(checked) +
                    " cases",
                timer.seconds());
    CHECK(pass);
    CHECK(timer.seconds() < 30.0);
}

TEST_CASE("criterion 3: false-alarm control under the background model") {
    Stopwatch timer;
    const int trials = 1000;
    const RegionProposalSet proposals = grid_proposals(grid64_geometry());
    REQUIRE(proposals.candidate_count >= 500);

    double total = 0.0, total_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Heatmap hm = synth_heatmap(64, 64, 0.05, std::nullopt, 100'000 + t);
        const ChannelResult result = detect_channel(hm, proposals, AcontrarioConfig{});
        int meaningful = 0;
        for (const NfaRecord& rec : result.all_records) meaningful += rec.meaningful;
        total += meaningful;
        total_sq += static_cast<double>(meaningful) * meaningful;
    }
    const double mean = total / trials;
    const double var = std::max(0.0, total_sq / trials - mean * mean);
    const double se = std::sqrt(var / trials);
    const bool pass = mean <= 1.0 + 3.0 * se;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "mean %.4f vs gate %.4f (SE %.4f, %d trials)", mean,
                  1.0 + 3.0 * se, se, trials);
    report_line(3, "false-alarm-control", pass, detail, timer.seconds());
    CHECK(pass);
    CHECK(timer.seconds() < 120.0);
}

TEST_CASE("criterion 4: planted cluster is detected and localized") {
    Stopwatch timer;
    const int trials = 200;
    const PlantSpec plant{26, 26, 12, 12, 1.0};

    RegionProposalSet proposals = grid_proposals(grid64_geometry());
    Region exact;
    exact.id = static_cast<int>(proposals.regions.size());
    exact.source = RegionSource::Synthetic;
    for (int v = plant.v; v < plant.v + plant.height; ++v)
        for (int u = plant.u; u < plant.u + plant.width; ++u) exact.cells.push_back(Cell{u, v});
    exact.pixel_area = static_cast<std::int64_t>(11 * 9 + 64) * (11 * 9 + 64);
    proposals.regions.push_back(exact);
    proposals.candidate_count = static_cast<std::int64_t>(proposals.regions.size());
    REQUIRE(proposals.candidate_count >= 500);

    int detected = 0, localized = 0;
    for (int t = 0; t < trials; ++t) {
        const Heatmap hm = synth_heatmap(64, 64, 0.05, plant, 200'000 + t);
        const ChannelResult result = detect_channel(hm, proposals, AcontrarioConfig{});
        for (const NfaRecord& rec : result.all_records) {
            if (rec.region_id == exact.id && rec.meaningful) {
                ++detected;
                break;
            }
        }
        if (!result.detections.empty() &&
            cell_iou(result.detections.front().first.cells, exact.cells) >= 0.5)
            ++localized;
    }
    const double detect_rate = static_cast<double>(detected) / trials;
    const double localize_rate = static_cast<double>(localized) / trials;
    const bool pass = detect_rate >= 0.99 && localize_rate >= 0.95;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "detected %.1f%% (need 99), IoU>=0.5 %.1f%% (need 95)",
                  100.0 * detect_rate, 100.0 * localize_rate);
    report_line(4, "planted-cluster-detection", pass, detail, timer.seconds());
    CHECK(pass);
    CHECK(timer.seconds() < 60.0);
}

TEST_CASE("criterion 5: Radon projections conserve mass") {
    Stopwatch timer;
    std::mt19937_64 rng(5150);
    double worst_rel = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> grid(64 * 64);
        double total = 0.0;
        for (double& v : grid) {
            v = uniform01(rng);
            total += v;
        }
        const Sinogram sg = radon_transform(grid, 64, 64, kDefaultAngles);
        for (size_t a = 0; a < sg.angles_deg.size(); ++a) {
            double sum = 0.0;
            for (double v : sg.projection(static_cast<int>(a))) sum += v;
            worst_rel = std::max(worst_rel, std::abs(sum - total) / total);
        }
    }
    const bool pass = worst_rel <= 1e-6;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "max relative mass error %.2e over 1000 grids",
                  worst_rel);
    report_line(5, "radon-mass-conservation", pass, detail, timer.seconds());
    CHECK(pass);
    CHECK(timer.seconds() < 30.0);
}

TEST_CASE("criterion 6: Laplacian annihilates affine ramps") {
    Stopwatch timer;
    std::mt19937_64 rng(6251);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double a = 0.2 + 0.3 * uniform01(rng);
        const double b = 0.008 * (uniform01(rng) - 0.5);
        const double c = 0.008 * (uniform01(rng) - 0.5);
        Patch patch;
        patch.values.resize(64 * 64);
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) patch.at(x, y) = a + b * x + c * y;
        for (double v : laplacian_residual(patch)) worst = std::max(worst, v);
    }
    const bool pass = worst <= 1e-9;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "max residual %.2e over 100 ramps", worst);
    report_line(6, "laplacian-annihilation", pass, detail, timer.seconds());
    CHECK(pass);
    CHECK(timer.seconds() < 1.0);
}

TEST_CASE("criterion 7: periodicity baseline separates upsampled patches") {
    Stopwatch timer;
    const double sigma = 3.0; // smooth-noise scale frozen after calibration
    auto score_patch = [](const Patch& p) {
        const auto res = laplacian_residual(p);
        const Sinogram sg = radon_transform(res, p.size, p.size, kDefaultAngles);
        return baseline_periodicity_score(spectral_features(sg));
    };
    std::vector<EvalPair> pairs;
    for (int i = 0; i < 500; ++i) {
        pairs.push_back({"pristine", score_patch(smooth_noise_patch(700'000 + i, sigma)), false, {}});
        pairs.push_back(
            {"upsampled", score_patch(upsampled_noise_patch(800'000 + i, sigma, 1.5)), true, {}});
    }
    const double auc = roc_auc(pairs);
    const bool pass = auc >= 0.75;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "AUC %.4f (need >= 0.75), 500 vs 500 patches", auc);
    report_line(7, "baseline-separation", pass, detail, timer.seconds());
    CHECK(pass);
    CHECK(timer.seconds() < 120.0);
}

TEST_CASE("criterion 8: fusion contract") {
    Stopwatch timer;
    bool pass = true;

    const std::array<double, 6> zeros{};
    pass = pass && fuse_scores(zeros) == 0.0;
    for (int i = 0; i < 6; ++i) {
        std::array<double, 6> single{};
        single[static_cast<size_t>(i)] = 0.8;
        pass = pass && fuse_scores(single) == 0.8;
    }
    const std::array<double, 6> mixed = {0.5, 0.9, 0.0, 0.0, 0.0, 0.1};
    pass = pass && fuse_scores(mixed) == 0.5;

    // union mask empty iff the fused score is zero
    HeatmapGeometry geom;
    geom.hm_width = 4;
    geom.hm_height = 4;
    geom.image_width = geom.patch_size + geom.stride * 3;
    geom.image_height = geom.image_width;
    std::array<ChannelResult, kNumChannels> results;
    for (int i = 0; i < kNumChannels; ++i) {
        results[static_cast<size_t>(i)].channel = kChannelOrder[static_cast<size_t>(i)];
        results[static_cast<size_t>(i)].geometry = geom;
    }
    FusionResult fr = fuse_channels(results, geom);
    auto mask_ones = [](const FusionResult& f) {
        return std::count(f.union_mask.begin(), f.union_mask.end(), 1);
    };
    pass = pass && fr.final_score == 0.0 && mask_ones(fr) == 0;

    Region region;
    region.id = 0;
    region.source = RegionSource::Synthetic;
    region.cells = {Cell{1, 1}};
    region.pixel_area = 1;
    NfaRecord rec;
    rec.region_id = 0;
    rec.n = 1;
    rec.r = 1;
    rec.p = 0.01;
    rec.tail = 1e-4;
    rec.nfa = 1e-2;
    rec.meaningful = true;
    results[2].detections.emplace_back(region, rec);
    results[2].score = channel_score(rec.nfa, 10.0);
    fr = fuse_channels(results, geom);
    pass = pass && fr.final_score > 0.0 && mask_ones(fr) > 0;
    pass = pass && fr.final_score == results[2].score;

    report_line(8, "fusion-contract", pass, "exact zero/single/mean plus mask-iff-score",
                timer.seconds());
    CHECK(pass);
    CHECK(timer.seconds() < 1.0);
}

TEST_CASE("criterion 9: analyze is deterministic across runs and threads") {
    Stopwatch timer;
    const ImageGray base = textured_image(256, 256, 909);
    const TamperResult tampered =
        synth_tamper(base, {TamperKind::Upsample, 1.5}, PatchRect{96, 96, 128, 128});
    write_image_pgm("acc9_input.pgm", tampered.image);

    AnalyzeOptions opt;
    opt.seed = 909;
    opt.report_path = "acc9_report.json";
    opt.mask_path = "acc9_mask.pgm";

    std::vector<std::string> reports, masks;
    for (int threads : {1, 1, 0}) { // repeat run, then any-thread-count run
        opt.threads = threads;
        analyze_image("acc9_input.pgm", opt);
        reports.push_back(slurp(opt.report_path));
        masks.push_back(slurp(opt.mask_path));
    }
    const bool pass = reports[0] == reports[1] && reports[0] == reports[2] &&
                      masks[0] == masks[1] && masks[0] == masks[2];
    report_line(9, "analyze-determinism", pass, "byte-identical report and mask x3",
                timer.seconds());
    CHECK(pass);
}

TEST_CASE("criterion 10: end-to-end smoke on a tampered 512x512 texture") {
    Stopwatch timer;
    const ImageGray base = textured_image(512, 512, 1010);
    const PatchRect rect{192, 192, 128, 128};
    const TamperResult tampered = synth_tamper(base, {TamperKind::Upsample, 1.5}, rect);
    write_image_pgm("acc10_input.pgm", tampered.image);

    AnalyzeOptions opt;
    opt.seed = 1010;
    opt.grid_proposals = true;
    opt.report_path = "acc10_report.json";
    opt.mask_path = "acc10_mask.pgm";
    opt.threads = 0;
    const AnalysisReport report = analyze_image("acc10_input.pgm", opt);
    const double elapsed = timer.seconds();

    // structural validity: parses back identically, six channels in order,
    // scores consistent with detections
    bool valid = read_report("acc10_report.json") == report;
    for (int i = 0; i < kNumChannels; ++i) {
        const ChannelReport& ch = report.channels[static_cast<size_t>(i)];
        valid = valid && ch.channel == kChannelOrder[static_cast<size_t>(i)];
        valid = valid && (ch.score > 0.0) == !ch.detections.empty();
        valid = valid && (ch.min_nfa.has_value() == !ch.detections.empty());
    }
    const ImageGray mask = read_image("acc10_mask.pgm");
    valid = valid && mask.width == 512 && mask.height == 512;

    // detection quality: reported, not gated (the analytic baselines stand
    // in for trained models)
    std::vector<std::uint8_t> detected(mask.values.size());
    for (size_t i = 0; i < mask.values.size(); ++i) detected[i] = mask.values[i] > 0.5;
    const double iou = mask_iou(detected, tampered.ground_truth);
    const bool pass = valid && elapsed < 60.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "valid report, %.1fs (<60s); info: final_score %.3f, mask IoU %.2f", elapsed,
                  report.final_score, iou);
    report_line(10, "end-to-end-smoke", pass, detail, timer.seconds());
    CHECK(pass);
}
