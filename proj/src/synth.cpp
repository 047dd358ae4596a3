#include "acdetect/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace acd {

namespace {

double bilinear_clamped(const ImageGray& image, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(image.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(image.height - 1));
    const int x0 = std::min(static_cast<int>(x), image.width - 2 >= 0 ? image.width - 2 : 0);
    const int y0 = std::min(static_cast<int>(y), image.height - 2 >= 0 ? image.height - 2 : 0);
    const double fx = x - x0;
    const double fy = y - y0;
    const int x1 = std::min(x0 + 1, image.width - 1);
    const int y1 = std::min(y0 + 1, image.height - 1);
    return (1 - fx) * (1 - fy) * image.at(x0, y0) + fx * (1 - fy) * image.at(x1, y0) +
           (1 - fx) * fy * image.at(x0, y1) + fx * fy * image.at(x1, y1);
}

void gaussian_blur_inplace(std::vector<double>& values, int width, int height, double sigma) {
    if (sigma <= 0.0) return;
    const int radius = std::max(1, static_cast<int>(std::lround(3.0 * sigma)));
    std::vector<double> kernel(static_cast<size_t>(2 * radius + 1));
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[static_cast<size_t>(i + radius)] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        total += kernel[static_cast<size_t>(i + radius)];
    }
    for (double& k : kernel) k /= total;

    std::vector<double> tmp(values.size());
    auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi); };
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[static_cast<size_t>(i + radius)] *
                       values[static_cast<size_t>(y) * width + clampi(x + i, width - 1)];
            tmp[static_cast<size_t>(y) * width + x] = acc;
        }
    }
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[static_cast<size_t>(i + radius)] *
                       tmp[static_cast<size_t>(clampi(y + i, height - 1)) * width + x];
            values[static_cast<size_t>(y) * width + x] = acc;
        }
    }
}

void stretch_to_range(std::vector<double>& values, double lo, double hi) {
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double mn = *mn_it;
    const double span = *mx_it - mn;
    if (span < 1e-12) {
        std::fill(values.begin(), values.end(), 0.5 * (lo + hi));
        return;
    }
    for (double& v : values) v = lo + (hi - lo) * (v - mn) / span;
}

} // namespace

std::string_view to_string(TamperKind kind) {
    switch (kind) {
        case TamperKind::Upsample: return "upsample";
        case TamperKind::Rotate: return "rotate";
        case TamperKind::Shear: return "shear";
    }
    return "unknown";
}

TamperKind tamper_kind_from_string(std::string_view name) {
    if (name == "upsample") return TamperKind::Upsample;
    if (name == "rotate") return TamperKind::Rotate;
    if (name == "shear") return TamperKind::Shear;
    throw ConfigError("unknown tamper op: " + std::string(name));
}

Heatmap synth_heatmap(int hm_width, int hm_height, double p_bg,
                      const std::optional<PlantSpec>& plant, std::uint64_t seed, Channel channel,
                      int patch_size, int stride) {
    if (hm_width < 1 || hm_height < 1) throw DomainError("heatmap dims must be positive");
    if (!(p_bg >= 0.0 && p_bg <= 1.0)) throw DomainError("p_bg must be in [0,1]");
    if (plant) {
        if (!(plant->p_fg >= 0.0 && plant->p_fg <= 1.0))
            throw DomainError("p_fg must be in [0,1]");
        if (plant->u < 0 || plant->v < 0 || plant->width < 1 || plant->height < 1 ||
            plant->u + plant->width > hm_width || plant->v + plant->height > hm_height)
            throw DomainError("planted rectangle outside the heatmap");
    }

    Heatmap hm;
    hm.channel = channel;
    hm.geometry.patch_size = patch_size;
    hm.geometry.stride = stride;
    hm.geometry.hm_width = hm_width;
    hm.geometry.hm_height = hm_height;
    hm.geometry.image_width = patch_size + stride * (hm_width - 1);
    hm.geometry.image_height = patch_size + stride * (hm_height - 1);
    hm.values.resize(static_cast<size_t>(hm.geometry.cell_count()));

    std::mt19937_64 rng(seed);
    for (int v = 0; v < hm_height; ++v) {
        for (int u = 0; u < hm_width; ++u) {
            double p = p_bg;
            if (plant && u >= plant->u && u < plant->u + plant->width && v >= plant->v &&
                v < plant->v + plant->height)
                p = plant->p_fg;
            hm.values[static_cast<size_t>(v) * hm_width + u] = uniform01(rng) < p ? 1.0f : 0.0f;
        }
    }
    return hm;
}

TamperResult synth_tamper(const ImageGray& image, const TamperSpec& spec, const PatchRect& rect) {
    if (rect.x < 0 || rect.y < 0 || rect.x + rect.width > image.width ||
        rect.y + rect.height > image.height)
        throw DomainError("tamper rect outside image");
    if (rect.width < kDefaultPatchSize || rect.height < kDefaultPatchSize)
        throw DomainError("tamper rect must be at least one patch in each dimension");
    switch (spec.kind) {
        case TamperKind::Upsample:
            if (!(spec.amount > 1.0 && spec.amount <= 2.0))
                throw DomainError("upsample factor must be in (1,2]");
            break;
        case TamperKind::Rotate:
            if (!(spec.amount >= 1.0 && spec.amount <= 10.0))
                throw DomainError("rotation must be in [1,10] degrees");
            break;
        case TamperKind::Shear:
            if (!(spec.amount > 0.0 && spec.amount <= 0.5))
                throw DomainError("shear coefficient must be in (0,0.5]");
            break;
    }

    TamperResult out;
    out.image = image;
    out.ground_truth.assign(image.values.size(), 0);

    const double cx = rect.x + (rect.width - 1) / 2.0;
    const double cy = rect.y + (rect.height - 1) / 2.0;
    const double theta = spec.amount * std::numbers::pi / 180.0;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);

    for (int y = rect.y; y < rect.y + rect.height; ++y) {
        for (int x = rect.x; x < rect.x + rect.width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            double sx, sy;
            switch (spec.kind) {
                case TamperKind::Upsample:
                    sx = dx / spec.amount;
                    sy = dy / spec.amount;
                    break;
                case TamperKind::Rotate: // inverse rotation about the rect center
                    sx = dx * cos_t + dy * sin_t;
                    sy = -dx * sin_t + dy * cos_t;
                    break;
                case TamperKind::Shear:
                default:
                    sx = dx - spec.amount * dy;
                    sy = dy;
                    break;
            }
            out.image.at(x, y) =
                std::clamp(bilinear_clamped(image, cx + sx, cy + sy), 0.0, 1.0);
            out.ground_truth[static_cast<size_t>(y) * image.width + x] = 1;
        }
    }
    return out;
}

ImageGray smooth_noise_image(int width, int height, std::uint64_t seed, double sigma) {
    if (width < 1 || height < 1) throw DomainError("image dims must be positive");
    ImageGray img;
    img.width = width;
    img.height = height;
    img.values.resize(static_cast<size_t>(width) * height);
    std::mt19937_64 rng(seed);
    for (double& v : img.values) v = uniform01(rng);
    gaussian_blur_inplace(img.values, width, height, sigma);
    stretch_to_range(img.values, 0.05, 0.95);
    return img;
}

ImageGray textured_image(int width, int height, std::uint64_t seed) {
    ImageGray coarse = smooth_noise_image(width, height, seed, 8.0);
    ImageGray fine = smooth_noise_image(width, height, seed ^ 0x9e3779b97f4a7c15ull, 2.0);
    std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ull);
    ImageGray img;
    img.width = width;
    img.height = height;
    img.values.resize(static_cast<size_t>(width) * height);
    for (size_t i = 0; i < img.values.size(); ++i)
        img.values[i] = 0.55 * coarse.values[i] + 0.35 * fine.values[i] + 0.10 * uniform01(rng);
    stretch_to_range(img.values, 0.05, 0.95);
    return img;
}

Patch smooth_noise_patch(std::uint64_t seed, double sigma) {
    const ImageGray img = smooth_noise_image(kDefaultPatchSize, kDefaultPatchSize, seed, sigma);
    Patch patch;
    patch.size = kDefaultPatchSize;
    patch.values = img.values;
    return patch;
}

Patch upsampled_noise_patch(std::uint64_t seed, double sigma, double factor) {
    if (!(factor > 1.0 && factor <= 2.0)) throw DomainError("upsample factor must be in (1,2]");
    const ImageGray src = smooth_noise_image(kDefaultPatchSize, kDefaultPatchSize, seed, sigma);
    const int scaled = static_cast<int>(std::floor(kDefaultPatchSize * factor));
    const int off = (scaled - kDefaultPatchSize) / 2;
    Patch patch;
    patch.size = kDefaultPatchSize;
    patch.values.resize(static_cast<size_t>(kDefaultPatchSize) * kDefaultPatchSize);
    for (int y = 0; y < kDefaultPatchSize; ++y) {
        for (int x = 0; x < kDefaultPatchSize; ++x) {
            // centered inverse mapping onto the source grid
            const double sx = (x + off + 0.5) / factor - 0.5;
            const double sy = (y + off + 0.5) / factor - 0.5;
            patch.at(x, y) = std::clamp(bilinear_clamped(src, sx, sy), 0.0, 1.0);
        }
    }
    return patch;
}

} // namespace acd
