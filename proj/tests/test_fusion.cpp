#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "acdetect/fusion.hpp"

using namespace acd;

namespace {

HeatmapGeometry small_geom() {
    HeatmapGeometry geom;
    geom.hm_width = 8;
    geom.hm_height = 8;
    geom.image_width = geom.patch_size + geom.stride * 7;
    geom.image_height = geom.image_width;
    return geom;
}

std::array<ChannelResult, kNumChannels> empty_results(const HeatmapGeometry& geom) {
    std::array<ChannelResult, kNumChannels> results;
    for (int i = 0; i < kNumChannels; ++i) {
        results[static_cast<size_t>(i)].channel = kChannelOrder[static_cast<size_t>(i)];
        results[static_cast<size_t>(i)].geometry = geom;
    }
    return results;
}

void add_detection(ChannelResult& result, int id, std::vector<Cell> cells, double nfa) {
    Region region;
    region.id = id;
    region.source = RegionSource::Synthetic;
    region.cells = std::move(cells);
    region.pixel_area = 1;
    NfaRecord rec;
    rec.region_id = id;
    rec.n = static_cast<int>(region.cells.size());
    rec.r = rec.n;
    rec.p = 0.1;
    rec.tail = nfa;
    rec.nfa = nfa;
    rec.meaningful = nfa < 1.0;
    result.detections.emplace_back(std::move(region), rec);
    result.score = channel_score(result.detections.front().second.nfa, 10.0);
}

} // namespace

TEST_CASE("channel_score: no meaningful region means zero") {
    CHECK(channel_score(std::nullopt) == 0.0);
}

TEST_CASE("channel_score: ten decades saturate the score") {
    CHECK(channel_score(1e-10) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(channel_score(1e-300) == 1.0);
    CHECK(channel_score(0.0) == 1.0);
}

TEST_CASE("channel_score: one decade maps to 0.1") {
    CHECK(channel_score(0.1) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(channel_score(0.5, 10.0) == doctest::Approx(std::log10(2.0) / 10.0).epsilon(1e-12));
}

TEST_CASE("channel_score: rejects non-meaningful minima") {
    CHECK_THROWS_AS(channel_score(1.0), DomainError);
    CHECK_THROWS_AS(channel_score(7.5), DomainError);
    CHECK_THROWS_AS(channel_score(-0.1), DomainError);
}

TEST_CASE("channel_score: monotone nonincreasing in the NFA") {
    double prev = 2.0;
    for (double nfa : {1e-12, 1e-9, 1e-4, 0.01, 0.5, 0.99}) {
        const double score = channel_score(nfa);
        CHECK(score <= prev);
        prev = score;
    }
}

TEST_CASE("fuse_scores: all-zero vector fuses to zero") {
    const std::array<double, 6> scores{};
    CHECK(fuse_scores(scores) == 0.0);
}

TEST_CASE("fuse_scores: single nonzero passes through") {
    const std::array<double, 6> scores = {0.8, 0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(fuse_scores(scores) == 0.8);
}

TEST_CASE("fuse_scores: mean of the nonzero entries") {
    const std::array<double, 6> scores = {0.5, 0.9, 0.0, 0.0, 0.0, 0.1};
    CHECK(fuse_scores(scores) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("fuse_scores: exactly six values required") {
    const std::array<double, 5> short_vec = {0.1, 0.2, 0.3, 0.4, 0.5};
    CHECK_THROWS_AS(fuse_scores(short_vec), ShapeError);
}

TEST_CASE("fuse_scores: permutation invariant and bounded by its inputs") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 50; ++trial) {
        std::array<double, 6> scores;
        for (double& s : scores)
            s = (rng() % 3 == 0) ? 0.0 : static_cast<double>(rng() % 1000) / 1000.0;
        std::array<double, 6> shuffled = scores;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const double fused = fuse_scores(scores);
        CHECK(fused == fuse_scores(shuffled));
        double min_pos = 1.0, max_val = 0.0;
        bool any = false;
        for (double s : scores) {
            if (s > 0.0) {
                any = true;
                min_pos = std::min(min_pos, s);
            }
            max_val = std::max(max_val, s);
        }
        if (any) {
            CHECK(fused >= min_pos - 1e-15);
            CHECK(fused <= max_val + 1e-15);
        } else {
            CHECK(fused == 0.0);
        }
    }
}

TEST_CASE("union_mask: all channels zero gives an empty mask") {
    const HeatmapGeometry geom = small_geom();
    const auto results = empty_results(geom);
    const auto mask = union_mask(results, geom);
    CHECK(std::count(mask.begin(), mask.end(), 1) == 0);
}

TEST_CASE("union_mask: a single origin-cell detection marks one patch rect") {
    const HeatmapGeometry geom = small_geom();
    auto results = empty_results(geom);
    add_detection(results[0], 0, {Cell{0, 0}}, 1e-6);
    const auto mask = union_mask(results, geom);
    for (int y = 0; y < geom.image_height; ++y) {
        for (int x = 0; x < geom.image_width; ++x) {
            const bool inside = x < 64 && y < 64;
            CHECK(mask[static_cast<size_t>(y) * geom.image_width + x] == (inside ? 1 : 0));
        }
    }
}

TEST_CASE("union_mask: overlapping detections union idempotently") {
    const HeatmapGeometry geom = small_geom();
    auto results = empty_results(geom);
    add_detection(results[0], 0, {Cell{0, 0}, Cell{1, 0}}, 1e-6);
    add_detection(results[3], 1, {Cell{1, 0}, Cell{2, 0}}, 1e-4);
    const auto mask = union_mask(results, geom);

    auto single = empty_results(geom);
    add_detection(single[0], 0, {Cell{0, 0}, Cell{1, 0}, Cell{2, 0}}, 1e-6);
    CHECK(mask == union_mask(single, geom));
}

TEST_CASE("union_mask: monotone when a detection is added") {
    const HeatmapGeometry geom = small_geom();
    auto base = empty_results(geom);
    add_detection(base[2], 0, {Cell{3, 3}}, 1e-3);
    const auto before = union_mask(base, geom);
    add_detection(base[5], 1, {Cell{5, 5}}, 1e-2);
    const auto after = union_mask(base, geom);
    for (size_t i = 0; i < before.size(); ++i) CHECK(after[i] >= before[i]);
}

TEST_CASE("union_mask: geometry mismatch is rejected") {
    const HeatmapGeometry geom = small_geom();
    auto results = empty_results(geom);
    results[4].geometry.hm_width = 9;
    CHECK_THROWS_AS(union_mask(results, geom), ShapeError);
}

TEST_CASE("fuse_channels: final score is zero iff the mask is empty") {
    const HeatmapGeometry geom = small_geom();
    auto results = empty_results(geom);
    const FusionResult empty = fuse_channels(results, geom);
    CHECK(empty.final_score == 0.0);
    CHECK(std::count(empty.union_mask.begin(), empty.union_mask.end(), 1) == 0);

    add_detection(results[1], 0, {Cell{2, 2}}, 1e-8);
    const FusionResult fused = fuse_channels(results, geom);
    CHECK(fused.final_score > 0.0);
    CHECK(std::count(fused.union_mask.begin(), fused.union_mask.end(), 1) > 0);
    CHECK(fused.channel_scores[1] == results[1].score);
    CHECK(fused.final_score == results[1].score); // single nonzero channel
}
