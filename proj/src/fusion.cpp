#include "acdetect/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace acd {

double channel_score(std::optional<double> min_nfa, double score_decades) {
    if (!(score_decades > 0.0)) throw ConfigError("score_decades must be positive");
    if (!min_nfa.has_value()) return 0.0;
    const double nfa = *min_nfa;
    if (nfa < 0.0 || nfa >= 1.0)
        throw DomainError("channel score expects a meaningful minimum NFA in [0,1)");
    if (nfa == 0.0) return 1.0; // tail underflow: beyond every decade
    return std::min(1.0, std::log10(1.0 / nfa) / score_decades);
}

double fuse_scores(std::span<const double> channel_scores) {
    if (channel_scores.size() != static_cast<size_t>(kNumChannels))
        throw ShapeError("fusion expects exactly six channel scores");
    std::array<double, kNumChannels> positive;
    int count = 0;
    for (double s : channel_scores) {
        if (!(s >= 0.0 && s <= 1.0)) throw DomainError("channel scores must be in [0,1]");
        if (s > 0.0) positive[static_cast<size_t>(count++)] = s;
    }
    if (count == 0) return 0.0;
    // summing in a canonical order makes the mean permutation-invariant
    // down to the last bit
    std::sort(positive.begin(), positive.begin() + count);
    double sum = 0.0;
    for (int i = 0; i < count; ++i) sum += positive[static_cast<size_t>(i)];
    return sum / count;
}

std::vector<std::uint8_t> union_mask(std::span<const ChannelResult> results,
                                     const HeatmapGeometry& geom) {
    std::vector<std::uint8_t> mask(
        static_cast<size_t>(geom.image_width) * geom.image_height, 0);
    for (const ChannelResult& result : results) {
        if (result.geometry != geom)
            throw ShapeError("channel results disagree on heatmap geometry");
        if (result.score <= 0.0) continue;
        for (const auto& [region, record] : result.detections) {
            for (const Cell& cell : region.cells) {
                const PatchRect rect = cell_to_patch(cell.u, cell.v, geom);
                for (int y = rect.y; y < rect.y + rect.height; ++y) {
                    auto* row = &mask[static_cast<size_t>(y) * geom.image_width];
                    std::fill(row + rect.x, row + rect.x + rect.width,
                              static_cast<std::uint8_t>(1));
                }
            }
        }
    }
    return mask;
}

FusionResult fuse_channels(std::span<const ChannelResult> results, const HeatmapGeometry& geom) {
    if (results.size() != static_cast<size_t>(kNumChannels))
        throw ShapeError("fusion expects exactly six channel results");
    FusionResult fr;
    for (int i = 0; i < kNumChannels; ++i) {
        if (results[i].channel != kChannelOrder[i])
            throw ShapeError("channel results must be in canonical order");
        fr.channel_scores[i] = results[i].score;
    }
    fr.final_score = fuse_scores(fr.channel_scores);
    fr.mask_width = geom.image_width;
    fr.mask_height = geom.image_height;
    fr.union_mask = union_mask(results, geom);
    return fr;
}

} // namespace acd
