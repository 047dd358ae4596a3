#pragma once

// Channel-score derivation and six-channel fusion. NFA values span hundreds
// of orders of magnitude, so the per-channel score compresses them onto
// [0,1] with a capped -log10 map; the image score averages the nonzero
// channel scores and the localization mask is the union of every kept
// detection's patch rectangles.

#include <optional>
#include <span>

#include "acdetect/types.hpp"

namespace acd {

// nullopt -> 0; otherwise min(1, log10(1/min_nfa) / score_decades).
// Only meaningful minima are accepted: min_nfa >= 1 or < 0 throws
// DomainError (an underflowed 0 maps to a full score).
double channel_score(std::optional<double> min_nfa, double score_decades = 10.0);

// Mean of the strictly positive entries; 0 when all six are zero.
// Throws ShapeError unless exactly six scores are passed.
double fuse_scores(std::span<const double> channel_scores);

// Image-resolution {0,1} mask: the union over channels with nonzero score
// of every kept detection's patch rectangles. Throws ShapeError if any
// result was produced under a different geometry.
std::vector<std::uint8_t> union_mask(std::span<const ChannelResult> results,
                                     const HeatmapGeometry& geom);

// Assembles scores and mask for the six channel results (canonical order).
FusionResult fuse_channels(std::span<const ChannelResult> results, const HeatmapGeometry& geom);

} // namespace acd
