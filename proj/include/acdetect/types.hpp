#pragma once

// Shared domain types for the tamper detector: the grayscale image, the
// patch-grid geometry, per-channel heatmaps, thresholded masks, candidate
// regions and their NFA statistics. All grids are row-major and addressed
// as (column u, row v) / (x, y). Everything here is immutable once built
// and safe to share across worker threads.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "acdetect/errors.hpp"

namespace acd {

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

// The six detector channels, in canonical order. The order fixes the layout
// of the fused score vector and of serialized channel ids.
enum class Channel : std::uint8_t {
    RescaleUp = 0,
    RescaleDown = 1,
    RotateCw = 2,
    RotateCcw = 3,
    Shear = 4,
    JpegQ85 = 5,
};

inline constexpr int kNumChannels = 6;

inline constexpr std::array<Channel, kNumChannels> kChannelOrder = {
    Channel::RescaleUp,  Channel::RescaleDown, Channel::RotateCw,
    Channel::RotateCcw, Channel::Shear,        Channel::JpegQ85,
};

std::string_view to_string(Channel channel);
Channel channel_from_string(std::string_view name); // ConfigError on unknown name

// ---------------------------------------------------------------------------
// Image
// ---------------------------------------------------------------------------

struct ImageGray {
    int width = 0;
    int height = 0;
    std::vector<double> values; // luminance in [0,1], row-major

    static ImageGray filled(int width, int height, double value);

    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::int64_t pixel_count() const { return static_cast<std::int64_t>(width) * height; }

    // Throws DomainError if dimensions and value range are inconsistent.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Heatmap geometry
// ---------------------------------------------------------------------------

inline constexpr int kDefaultPatchSize = 64;
inline constexpr int kDefaultStride = 9;

// Maps heatmap cells to image patches: cell (u,v) covers the patch whose
// top-left corner is (stride*u, stride*v). Only fully contained patches get
// cells, so hm_width = floor((image_width - patch_size)/stride) + 1.
struct HeatmapGeometry {
    int patch_size = kDefaultPatchSize;
    int stride = kDefaultStride;
    int image_width = 0;
    int image_height = 0;
    int hm_width = 0;
    int hm_height = 0;

    std::int64_t cell_count() const { return static_cast<std::int64_t>(hm_width) * hm_height; }
    bool cell_in_bounds(int u, int v) const {
        return u >= 0 && u < hm_width && v >= 0 && v < hm_height;
    }

    bool operator==(const HeatmapGeometry&) const = default;
};

// Throws ImageTooSmall when no full patch fits.
HeatmapGeometry geometry_for(int image_width, int image_height,
                             int patch_size = kDefaultPatchSize, int stride = kDefaultStride);

struct PatchRect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool operator==(const PatchRect&) const = default;
};

// Image rectangle covered by heatmap cell (u,v). Throws DomainError when the
// cell lies outside the heatmap.
PatchRect cell_to_patch(int u, int v, const HeatmapGeometry& geom);

// ---------------------------------------------------------------------------
// Heatmap and thresholded mask
// ---------------------------------------------------------------------------

// Per-patch manipulation confidences in [0,1]; 1 means high confidence that
// the patch was manipulated. Values are kept as 32-bit floats so a heatmap
// round-trips bit-identically through its file format.
struct Heatmap {
    Channel channel = Channel::RescaleUp;
    HeatmapGeometry geometry;
    std::vector<float> values; // hm_width * hm_height, row-major

    float at(int u, int v) const {
        return values[static_cast<size_t>(v) * geometry.hm_width + u];
    }
    float& at(int u, int v) {
        return values[static_cast<size_t>(v) * geometry.hm_width + u];
    }

    void validate() const; // DomainError on bad dims or out-of-range values
};

struct BinaryMask {
    HeatmapGeometry geometry;
    std::vector<std::uint8_t> bits; // {0,1}, row-major

    std::uint8_t at(int u, int v) const {
        return bits[static_cast<size_t>(v) * geometry.hm_width + u];
    }
    std::int64_t ones() const;
};

// ---------------------------------------------------------------------------
// Regions and NFA records
// ---------------------------------------------------------------------------

struct Cell {
    int u = 0;
    int v = 0;

    // Row-major ordering so scanline enumeration yields sorted cell lists.
    friend constexpr auto operator<=>(const Cell& a, const Cell& b) {
        if (auto c = a.v <=> b.v; c != 0) return c;
        return a.u <=> b.u;
    }
    friend constexpr bool operator==(const Cell&, const Cell&) = default;
};

enum class RegionSource : std::uint8_t {
    LevelSetUpper,
    LevelSetLower,
    External,
    Synthetic,
};

std::string_view to_string(RegionSource source);
RegionSource region_source_from_string(std::string_view name);

// One candidate detection event: a set of heatmap cells derived from an
// image segment. Cells are strictly sorted and duplicate-free.
struct Region {
    int id = 0;
    RegionSource source = RegionSource::Synthetic;
    std::vector<Cell> cells;
    std::int64_t pixel_area = 0; // pixels of the originating image segment

    bool operator==(const Region&) const = default;
};

// Statistics of one region under the Bernoulli background model.
struct NfaRecord {
    int region_id = 0;
    int n = 0;          // cells in the region
    int r = 0;          // tampered (one) cells among them
    double p = 0.0;     // background probability of a one
    double tail = 1.0;  // Pr(R >= r) under Binomial(n, p), or its upper bound
    double nfa = 0.0;   // candidate_count * tail
    bool meaningful = false; // nfa < 1

    bool operator==(const NfaRecord&) const = default;
};

// Outcome of a-contrario analysis of one heatmap channel.
struct ChannelResult {
    Channel channel = Channel::RescaleUp;
    HeatmapGeometry geometry;
    double score = 0.0; // in [0,1]; 0 iff no meaningful region survived
    std::vector<std::pair<Region, NfaRecord>> detections; // disjoint, nfa ascending
    std::vector<NfaRecord> all_records; // every candidate, by region id
    std::int64_t candidate_count = 0;

    std::optional<double> min_nfa() const {
        if (detections.empty()) return std::nullopt;
        return detections.front().second.nfa;
    }
};

// Fused six-channel outcome plus the image-resolution localization mask.
struct FusionResult {
    std::array<double, kNumChannels> channel_scores{};
    double final_score = 0.0;
    int mask_width = 0;
    int mask_height = 0;
    std::vector<std::uint8_t> union_mask; // {0,1}, row-major, image resolution
};

// Rec.601 luma; used when collapsing color inputs to a single plane.
inline double luma601(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

} // namespace acd
