#pragma once

// Per-patch resampling feature chain and the pluggable patch classifiers
// that turn features into heatmap confidences.
//
// The chain mirrors the classic interpolation-detector pipeline: a 3x3
// Laplacian prediction residue exposes the periodic correlations left by
// resampling, the Radon transform collects them along a small set of
// directions, and per-angle spectra make the periodicity show up as peaks.
// Classifiers are an interface so externally trained models can replace the
// analytic baselines without touching the rest of the pipeline.

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "acdetect/types.hpp"

namespace acd {

// ---------------------------------------------------------------------------
// Patch and feature containers
// ---------------------------------------------------------------------------

struct Patch {
    int size = kDefaultPatchSize;
    std::vector<double> values; // size*size, row-major, [0,1]

    double at(int x, int y) const { return values[static_cast<size_t>(y) * size + x]; }
    double& at(int x, int y) { return values[static_cast<size_t>(y) * size + x]; }
};

// Throws DomainError unless rect is square and inside the image.
Patch extract_patch(const ImageGray& image, const PatchRect& rect);

// Line-integral projections of a square grid, one projection per angle.
struct Sinogram {
    std::vector<double> angles_deg;
    int num_bins = 0;           // identical for every angle
    std::vector<double> values; // angle-major: values[a * num_bins + b]

    std::span<const double> projection(int angle_index) const {
        return {values.data() + static_cast<size_t>(angle_index) * num_bins,
                static_cast<size_t>(num_bins)};
    }
};

// Concatenated per-angle spectra of the sinogram projections.
struct FeatureVector {
    int num_angles = 0;
    int bins_per_angle = 0; // floor(source_bins/2) + 1 non-redundant magnitudes
    int source_bins = 0;    // projection length the spectra came from
    std::vector<double> values;

    std::span<const double> angle_spectrum(int angle_index) const {
        return {values.data() + static_cast<size_t>(angle_index) * bins_per_angle,
                static_cast<size_t>(bins_per_angle)};
    }
};

inline constexpr std::array<double, 4> kDefaultAngles = {0.0, 45.0, 90.0, 135.0};

// ---------------------------------------------------------------------------
// Feature chain
// ---------------------------------------------------------------------------

// |L * patch| for the 4-neighbor Laplacian (center -4, N/S/E/W +1). Samples
// outside the patch are linearly extrapolated from the two nearest samples,
// which keeps the residue of any affine ramp at zero all the way to the
// border. Output has the same dimensions as the patch, all entries >= 0.
std::vector<double> laplacian_residual(const Patch& patch);

// Number of projection bins used for an N x N grid; 95 for N = 64, enough to
// cover the grid diagonal at every angle.
int radon_bin_count(int grid_size);

// Radon transform of a square grid. Each pixel's mass is split linearly
// between the two bins its center projects onto, so per-angle bin sums equal
// the grid sum up to roundoff. Angles are in degrees, each in [0, 180).
// Throws ShapeError for non-square grids, ConfigError for bad angle lists.
Sinogram radon_transform(std::span<const double> grid, int width, int height,
                         std::span<const double> angles_deg);

// Per-angle magnitude spectrum of the mean-subtracted projections, each
// angle's spectrum normalized to unit sum (left at zero when the projection
// carries no energy).
FeatureVector spectral_features(const Sinogram& sinogram);

// ---------------------------------------------------------------------------
// Baseline detectors
// ---------------------------------------------------------------------------

// Peak-to-median statistic over the in-band spectrum indices
// [band_lo, source_bins/4], max over angles, squashed through a logistic.
double baseline_periodicity_score(const FeatureVector& features, int band_lo = 4,
                                  double t0 = 4.0, double scale = 1.0);

// JPEG blockiness statistic: mean absolute second difference at row/column
// indices that are multiples of 8, relative to everywhere else.
double baseline_jpeg_score(const Patch& patch, double t0 = 1.5, double scale = 0.25);

// ---------------------------------------------------------------------------
// Classifier interface
// ---------------------------------------------------------------------------

// Scores one patch; must be deterministic, reentrant and map into [0,1].
class PatchClassifier {
public:
    virtual ~PatchClassifier() = default;
    virtual std::string_view name() const = 0;
    virtual double score(const Patch& patch, const FeatureVector& features) const = 0;
};

class PeriodicityClassifier final : public PatchClassifier {
public:
    PeriodicityClassifier(int band_lo = 4, double t0 = 4.0, double scale = 1.0)
        : band_lo_(band_lo), t0_(t0), scale_(scale) {}
    std::string_view name() const override { return "periodicity"; }
    double score(const Patch&, const FeatureVector& features) const override {
        return baseline_periodicity_score(features, band_lo_, t0_, scale_);
    }

private:
    int band_lo_;
    double t0_;
    double scale_;
};

class BlockinessClassifier final : public PatchClassifier {
public:
    BlockinessClassifier(double t0 = 1.5, double scale = 0.25) : t0_(t0), scale_(scale) {}
    std::string_view name() const override { return "blockiness"; }
    double score(const Patch& patch, const FeatureVector&) const override {
        return baseline_jpeg_score(patch, t0_, scale_);
    }

private:
    double t0_;
    double scale_;
};

// "periodicity" or "blockiness"; ConfigError otherwise.
std::unique_ptr<PatchClassifier> make_classifier(std::string_view name);

// Baseline classifier normally paired with a channel: periodicity for the
// five resampling channels, blockiness for jpeg_q85.
std::unique_ptr<PatchClassifier> default_classifier_for(Channel channel);

// ---------------------------------------------------------------------------
// Heatmap generation
// ---------------------------------------------------------------------------

// Runs the feature chain and the classifier on every patch of the image.
// Cells are independent, so evaluation may be spread over num_threads
// workers (0 = hardware concurrency) without changing the result.
Heatmap build_heatmap(const ImageGray& image, Channel channel, const PatchClassifier& classifier,
                      std::span<const double> angles_deg = kDefaultAngles, int num_threads = 1);

} // namespace acd
