#include "acdetect/types.hpp"

#include <cmath>

namespace acd {

std::string_view to_string(Channel channel) {
    switch (channel) {
        case Channel::RescaleUp: return "rescale_up";
        case Channel::RescaleDown: return "rescale_down";
        case Channel::RotateCw: return "rotate_cw";
        case Channel::RotateCcw: return "rotate_ccw";
        case Channel::Shear: return "shear";
        case Channel::JpegQ85: return "jpeg_q85";
    }
    return "unknown";
}

Channel channel_from_string(std::string_view name) {
    for (Channel c : kChannelOrder) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("unknown channel name: " + std::string(name));
}

std::string_view to_string(RegionSource source) {
    switch (source) {
        case RegionSource::LevelSetUpper: return "level_set_upper";
        case RegionSource::LevelSetLower: return "level_set_lower";
        case RegionSource::External: return "external";
        case RegionSource::Synthetic: return "synthetic";
    }
    return "unknown";
}

RegionSource region_source_from_string(std::string_view name) {
    if (name == "level_set_upper") return RegionSource::LevelSetUpper;
    if (name == "level_set_lower") return RegionSource::LevelSetLower;
    if (name == "external") return RegionSource::External;
    if (name == "synthetic") return RegionSource::Synthetic;
    throw ConfigError("unknown region source: " + std::string(name));
}

ImageGray ImageGray::filled(int width, int height, double value) {
    ImageGray img;
    img.width = width;
    img.height = height;
    img.values.assign(static_cast<size_t>(width) * height, value);
    return img;
}

void ImageGray::validate() const {
    if (width <= 0 || height <= 0) throw DomainError("image dimensions must be positive");
    if (values.size() != static_cast<size_t>(width) * height)
        throw DomainError("image value buffer does not match dimensions");
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw DomainError("image values must be finite and in [0,1]");
    }
}

HeatmapGeometry geometry_for(int image_width, int image_height, int patch_size, int stride) {
    if (patch_size <= 0 || stride <= 0)
        throw ConfigError("patch size and stride must be positive");
    if (image_width < patch_size || image_height < patch_size)
        throw ImageTooSmall("image smaller than one analysis patch");
    HeatmapGeometry geom;
    geom.patch_size = patch_size;
    geom.stride = stride;
    geom.image_width = image_width;
    geom.image_height = image_height;
    geom.hm_width = (image_width - patch_size) / stride + 1;
    geom.hm_height = (image_height - patch_size) / stride + 1;
    return geom;
}

PatchRect cell_to_patch(int u, int v, const HeatmapGeometry& geom) {
    if (!geom.cell_in_bounds(u, v)) throw DomainError("heatmap cell out of bounds");
    return PatchRect{geom.stride * u, geom.stride * v, geom.patch_size, geom.patch_size};
}

void Heatmap::validate() const {
    if (geometry.hm_width <= 0 || geometry.hm_height <= 0)
        throw DomainError("heatmap dimensions must be positive");
    if (values.size() != static_cast<size_t>(geometry.cell_count()))
        throw DomainError("heatmap value buffer does not match geometry");
    for (float v : values) {
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
            throw DomainError("heatmap values must be finite and in [0,1]");
    }
}

std::int64_t BinaryMask::ones() const {
    std::int64_t count = 0;
    for (std::uint8_t b : bits) count += b;
    return count;
}

} // namespace acd
