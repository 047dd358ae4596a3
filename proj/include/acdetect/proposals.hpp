#pragma once

// Candidate-region generation. Proposals come from three sources: connected
// components of quantized upper/lower level sets of the image, externally
// supplied segmentation label maps, and synthetic cell-grid blocks for
// heatmap-only analysis. All of them end up as sets of heatmap cells; the
// final set is deduplicated so the candidate count reflects the number of
// distinct hypotheses actually tested.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "acdetect/types.hpp"

namespace acd {

enum class Polarity : std::uint8_t { Upper, Lower };
enum class Connectivity : std::uint8_t { Four = 4, Eight = 8 };
enum class PolarityMode : std::uint8_t { Upper, Lower, Both };

std::string_view to_string(PolarityMode mode);
PolarityMode polarity_mode_from_string(std::string_view name);

struct ProposalConfig {
    int n_levels = 32;                       // quantile thresholds over image values
    Connectivity connectivity = Connectivity::Eight;
    int min_cells = 4;                       // drop regions spanning fewer heatmap cells
    double max_area_frac = 0.9;              // drop segments covering more of the image
    PolarityMode polarity = PolarityMode::Both;

    void validate() const; // ConfigError on out-of-range parameters
};

struct RegionProposalSet {
    std::vector<Region> regions;
    std::int64_t candidate_count = 0; // == regions.size() after dedup
};

// Connected components (under the given connectivity) of the bilevel set
// {pixels >= level} (upper) or {pixels <= level} (lower). Each component is
// a sorted list of row-major pixel indices; components are ordered by their
// first (scanline-order) pixel, and their union is exactly the bilevel set.
std::vector<std::vector<std::int64_t>> level_set_components(const ImageGray& image, double level,
                                                            Polarity polarity,
                                                            Connectivity connectivity);

// Heatmap cells whose patch center lies in the pixel set. The input must be
// sorted row-major; output cells come out sorted and duplicate-free. May be
// empty. Throws DomainError if a pixel index is outside the image.
std::vector<Cell> rasterize_region(std::span<const std::int64_t> pixel_set,
                                   const HeatmapGeometry& geom);

// Level-set proposals over n_levels quantile thresholds (both polarities by
// default), followed by the external pixel sets, all rasterized, filtered by
// min_cells / max_area_frac and deduplicated by cell set (first occurrence
// wins). Region ids number the surviving regions in order.
RegionProposalSet collect_proposals(const ImageGray& image, const HeatmapGeometry& geom,
                                    const ProposalConfig& cfg,
                                    std::span<const std::vector<std::int64_t>> external = {});

// Reads a label map (PGM, 8- or 16-bit; 0 = background) and returns one
// sorted pixel set per distinct nonzero label, ordered by label value.
// Throws FormatError on parse failure, ShapeError on dimension mismatch.
std::vector<std::vector<std::int64_t>> load_external_proposals(const std::string& path,
                                                               int expect_width,
                                                               int expect_height);

struct GridSpec {
    int block = 0; // block side length, in cells
    int step = 0;  // block placement stride, in cells
};

inline constexpr std::array<GridSpec, 4> kDefaultGridSpecs = {
    GridSpec{4, 8}, GridSpec{8, 4}, GridSpec{12, 4}, GridSpec{16, 8}};

// Synthetic proposals tiling the heatmap with square cell blocks; used when
// no image is available to segment (e.g. externally supplied heatmaps). The
// default ladder yields 534 candidates on a 64x64 heatmap.
RegionProposalSet grid_proposals(const HeatmapGeometry& geom,
                                 std::span<const GridSpec> specs = kDefaultGridSpecs);

// Concatenates two proposal sets (a first), deduplicates by cell set and
// renumbers region ids.
RegionProposalSet merge_proposal_sets(const RegionProposalSet& a, const RegionProposalSet& b);

} // namespace acd
