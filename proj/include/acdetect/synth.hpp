#pragma once

// Seeded synthetic inputs: Bernoulli heatmaps with an optional planted
// block, resampling tampers pasted into real images, and smooth-noise
// images/patches for detector calibration. Every generator is a pure
// function of its seed, so outputs are reproducible bit for bit.

#include <cstdint>
#include <optional>
#include <random>

#include "acdetect/features.hpp"
#include "acdetect/types.hpp"

namespace acd {

// Uniform double in [0,1) from the top 53 bits; identical on every platform
// for a given mt19937_64 state.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct PlantSpec {
    int u = 0;
    int v = 0;
    int width = 0;
    int height = 0;
    double p_fg = 1.0;
};

// Heatmap of i.i.d. Bernoulli(p_bg) cells emitted as 0.0/1.0 confidences,
// with cells inside the planted rectangle drawn at p_fg instead. The
// backing geometry is the smallest image the heatmap dims describe.
// Throws DomainError on bad probabilities or an out-of-bounds plant.
Heatmap synth_heatmap(int hm_width, int hm_height, double p_bg,
                      const std::optional<PlantSpec>& plant, std::uint64_t seed,
                      Channel channel = Channel::RescaleUp,
                      int patch_size = kDefaultPatchSize, int stride = kDefaultStride);

enum class TamperKind : std::uint8_t { Upsample, Rotate, Shear };

std::string_view to_string(TamperKind kind);
TamperKind tamper_kind_from_string(std::string_view name);

struct TamperSpec {
    TamperKind kind = TamperKind::Upsample;
    double amount = 1.5; // scale factor / degrees / shear coefficient
};

struct TamperResult {
    ImageGray image;
    std::vector<std::uint8_t> ground_truth; // {0,1}, image resolution
};

// Resamples the content under rect about its center (bilinear), pastes the
// cropped result back, and leaves everything else untouched. Valid amounts:
// upsample factor in (1,2], rotation in [1,10] degrees, shear in (0,0.5].
// The rect must be at least one patch in each dimension.
TamperResult synth_tamper(const ImageGray& image, const TamperSpec& spec, const PatchRect& rect);

// White noise smoothed with a Gaussian (sigma in pixels) and stretched to
// span most of [0,1].
ImageGray smooth_noise_image(int width, int height, std::uint64_t seed, double sigma);

// Multi-scale blurred-noise texture for end-to-end tests; not resampled, so
// it carries no interpolation correlations of its own.
ImageGray textured_image(int width, int height, std::uint64_t seed);

Patch smooth_noise_patch(std::uint64_t seed, double sigma);

// Smooth-noise patch upsampled by `factor` (bilinear) and center-cropped
// back to patch size.
Patch upsampled_noise_patch(std::uint64_t seed, double sigma, double factor);

} // namespace acd
