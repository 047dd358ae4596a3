#include "acdetect/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"

namespace acd {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Sample with linear extrapolation one step past each edge. Extrapolation
// keeps an affine ramp affine, so the Laplacian of a ramp vanishes at the
// border as well as in the interior.
double sample_extrapolated(const Patch& patch, int x, int y) {
    const int n = patch.size;
    if (x == -1) return 2.0 * sample_extrapolated(patch, 0, y) - sample_extrapolated(patch, 1, y);
    if (x == n) return 2.0 * sample_extrapolated(patch, n - 1, y) - sample_extrapolated(patch, n - 2, y);
    if (y == -1) return 2.0 * patch.at(x, 0) - patch.at(x, 1);
    if (y == n) return 2.0 * patch.at(x, n - 1) - patch.at(x, n - 2);
    return patch.at(x, y);
}

double median_of(std::vector<double>& scratch) {
    const size_t n = scratch.size();
    const size_t mid = n / 2;
    std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
    double hi = scratch[mid];
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(scratch.begin(), scratch.begin() + mid);
    return 0.5 * (lo + hi);
}

} // namespace

Patch extract_patch(const ImageGray& image, const PatchRect& rect) {
    if (rect.width != rect.height) throw DomainError("patch rect must be square");
    if (rect.width < 3) throw DomainError("patch too small");
    if (rect.x < 0 || rect.y < 0 || rect.x + rect.width > image.width ||
        rect.y + rect.height > image.height)
        throw DomainError("patch rect outside image");
    Patch patch;
    patch.size = rect.width;
    patch.values.resize(static_cast<size_t>(rect.width) * rect.height);
    for (int y = 0; y < rect.height; ++y) {
        const double* src = &image.values[static_cast<size_t>(rect.y + y) * image.width + rect.x];
        std::copy(src, src + rect.width, patch.values.begin() + static_cast<size_t>(y) * rect.width);
    }
    return patch;
}

std::vector<double> laplacian_residual(const Patch& patch) {
    const int n = patch.size;
    std::vector<double> out(static_cast<size_t>(n) * n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double lap = sample_extrapolated(patch, x - 1, y) +
                               sample_extrapolated(patch, x + 1, y) +
                               sample_extrapolated(patch, x, y - 1) +
                               sample_extrapolated(patch, x, y + 1) - 4.0 * patch.at(x, y);
            out[static_cast<size_t>(y) * n + x] = std::abs(lap);
        }
    }
    return out;
}

int radon_bin_count(int grid_size) {
    const int center = (grid_size - 1) / 2;
    const double reach = std::sqrt(2.0) * (grid_size - center - 1);
    return 2 * static_cast<int>(std::ceil(reach)) + 3;
}

Sinogram radon_transform(std::span<const double> grid, int width, int height,
                         std::span<const double> angles_deg) {
    if (width != height) throw ShapeError("radon transform requires a square grid");
    if (width < 1 || grid.size() != static_cast<size_t>(width) * height)
        throw ShapeError("grid buffer does not match dimensions");
    if (angles_deg.empty()) throw ConfigError("angle list must be non-empty");
    for (double a : angles_deg) {
        if (!(a >= 0.0 && a < 180.0)) throw ConfigError("angles must lie in [0, 180)");
    }

    const int n = width;
    const int bins = radon_bin_count(n);
    const int center = (n - 1) / 2;      // integer pixel the projection is about
    const int bin_center = (bins - 1) / 2; // bins is odd, so this is exact

    Sinogram sg;
    sg.angles_deg.assign(angles_deg.begin(), angles_deg.end());
    sg.num_bins = bins;
    sg.values.assign(angles_deg.size() * static_cast<size_t>(bins), 0.0);

    for (size_t a = 0; a < angles_deg.size(); ++a) {
        const double theta = angles_deg[a] * std::numbers::pi / 180.0;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        double* proj = &sg.values[a * static_cast<size_t>(bins)];
        for (int y = 0; y < n; ++y) {
            const double ys = (y - center) * s + bin_center;
            for (int x = 0; x < n; ++x) {
                const double v = grid[static_cast<size_t>(y) * n + x];
                if (v == 0.0) continue;
                const double t = (x - center) * c + ys;
                const int b0 = static_cast<int>(std::floor(t));
                const double w1 = t - b0;
                // bin_count covers the full diagonal, so both targets exist
                proj[b0] += v * (1.0 - w1);
                proj[b0 + 1] += v * w1;
            }
        }
    }
    return sg;
}

FeatureVector spectral_features(const Sinogram& sinogram) {
    const int bins = sinogram.num_bins;
    const int kept = bins / 2 + 1;
    const int num_angles = static_cast<int>(sinogram.angles_deg.size());

    FeatureVector fv;
    fv.num_angles = num_angles;
    fv.bins_per_angle = kept;
    fv.source_bins = bins;
    fv.values.assign(static_cast<size_t>(num_angles) * kept, 0.0);

    std::vector<double> centered(bins);
    for (int a = 0; a < num_angles; ++a) {
        auto proj = sinogram.projection(a);
        double mean = 0.0;
        for (double v : proj) mean += v;
        mean /= bins;
        for (int b = 0; b < bins; ++b) centered[b] = proj[b] - mean;

        double* mags = &fv.values[static_cast<size_t>(a) * kept];
        double total = 0.0;
        for (int k = 0; k < kept; ++k) {
            double re = 0.0, im = 0.0;
            const double w = -2.0 * std::numbers::pi * k / bins;
            for (int b = 0; b < bins; ++b) {
                re += centered[b] * std::cos(w * b);
                im += centered[b] * std::sin(w * b);
            }
            mags[k] = std::hypot(re, im);
            total += mags[k];
        }
        if (total < 1e-12) {
            std::fill(mags, mags + kept, 0.0);
        } else {
            for (int k = 0; k < kept; ++k) mags[k] /= total;
        }
    }
    return fv;
}

double baseline_periodicity_score(const FeatureVector& features, int band_lo, double t0,
                                  double scale) {
    constexpr double kEps = 1e-9;
    const int band_hi = std::min(features.source_bins / 4, features.bins_per_angle - 1);
    double stat = 0.0;
    std::vector<double> scratch;
    for (int a = 0; a < features.num_angles; ++a) {
        auto spectrum = features.angle_spectrum(a);
        if (band_lo > band_hi) break;
        scratch.assign(spectrum.begin() + band_lo, spectrum.begin() + band_hi + 1);
        const double peak = *std::max_element(scratch.begin(), scratch.end());
        const double med = median_of(scratch);
        stat = std::max(stat, peak / (med + kEps));
    }
    return logistic((stat - t0) / scale);
}

double baseline_jpeg_score(const Patch& patch, double t0, double scale) {
    constexpr double kEps = 1e-9;
    const int n = patch.size;
    double sum_in = 0.0, sum_off = 0.0;
    std::int64_t count_in = 0, count_off = 0;
    auto tally = [&](double dd, int index) {
        if (index % 8 == 0) {
            sum_in += dd;
            ++count_in;
        } else {
            sum_off += dd;
            ++count_off;
        }
    };
    for (int y = 0; y < n; ++y) {
        for (int x = 1; x + 1 < n; ++x)
            tally(std::abs(patch.at(x - 1, y) - 2.0 * patch.at(x, y) + patch.at(x + 1, y)), x);
    }
    for (int x = 0; x < n; ++x) {
        for (int y = 1; y + 1 < n; ++y)
            tally(std::abs(patch.at(x, y - 1) - 2.0 * patch.at(x, y) + patch.at(x, y + 1)), y);
    }
    const double mean_in = count_in > 0 ? sum_in / count_in : 0.0;
    const double mean_off = count_off > 0 ? sum_off / count_off : 0.0;
    const double ratio = (mean_in + kEps) / (mean_off + kEps);
    return logistic((ratio - t0) / scale);
}

std::unique_ptr<PatchClassifier> make_classifier(std::string_view name) {
    if (name == "periodicity") return std::make_unique<PeriodicityClassifier>();
    if (name == "blockiness") return std::make_unique<BlockinessClassifier>();
    throw ConfigError("unknown classifier: " + std::string(name));
}

std::unique_ptr<PatchClassifier> default_classifier_for(Channel channel) {
    if (channel == Channel::JpegQ85) return std::make_unique<BlockinessClassifier>();
    return std::make_unique<PeriodicityClassifier>();
}

Heatmap build_heatmap(const ImageGray& image, Channel channel, const PatchClassifier& classifier,
                      std::span<const double> angles_deg, int num_threads) {
    const HeatmapGeometry geom = geometry_for(image.width, image.height);
    Heatmap hm;
    hm.channel = channel;
    hm.geometry = geom;
    hm.values.assign(static_cast<size_t>(geom.cell_count()), 0.0f);

    detail::parallel_for(0, geom.cell_count(), num_threads, [&](std::int64_t idx) {
        const int u = static_cast<int>(idx % geom.hm_width);
        const int v = static_cast<int>(idx / geom.hm_width);
        const Patch patch = extract_patch(image, cell_to_patch(u, v, geom));
        const auto residual = laplacian_residual(patch);
        const Sinogram sg = radon_transform(residual, patch.size, patch.size, angles_deg);
        const FeatureVector fv = spectral_features(sg);
        const double score = classifier.score(patch, fv);
        hm.values[static_cast<size_t>(idx)] =
            static_cast<float>(std::clamp(score, 0.0, 1.0));
    });
    return hm;
}

} // namespace acd
