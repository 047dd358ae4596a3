#include "acdetect/heatmap_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "acdetect/image_io.hpp"

namespace acd {

namespace {

constexpr char kMagic[4] = {'A', 'C', 'H', 'M'};
constexpr size_t kHeaderSize = 27;

void put_u16(std::vector<char>& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::vector<char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const unsigned char* d) {
    return static_cast<std::uint16_t>(d[0] | (d[1] << 8));
}

std::uint32_t get_u32(const unsigned char* d) {
    return static_cast<std::uint32_t>(d[0]) | (static_cast<std::uint32_t>(d[1]) << 8) |
           (static_cast<std::uint32_t>(d[2]) << 16) | (static_cast<std::uint32_t>(d[3]) << 24);
}

} // namespace

std::vector<char> achm_serialize(const Heatmap& heatmap) {
    heatmap.validate();
    std::vector<char> out;
    out.reserve(kHeaderSize + 4 * heatmap.values.size());
    for (char c : kMagic) out.push_back(c);
    put_u16(out, kAchmVersion);
    out.push_back(static_cast<char>(static_cast<std::uint8_t>(heatmap.channel)));
    put_u32(out, static_cast<std::uint32_t>(heatmap.geometry.image_width));
    put_u32(out, static_cast<std::uint32_t>(heatmap.geometry.image_height));
    put_u16(out, static_cast<std::uint16_t>(heatmap.geometry.patch_size));
    put_u16(out, static_cast<std::uint16_t>(heatmap.geometry.stride));
    put_u32(out, static_cast<std::uint32_t>(heatmap.geometry.hm_width));
    put_u32(out, static_cast<std::uint32_t>(heatmap.geometry.hm_height));
    for (float v : heatmap.values) {
        std::uint32_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        put_u32(out, bits); // IEEE binary32, little-endian
    }
    return out;
}

Heatmap achm_parse(const std::vector<char>& bytes) {
    if (bytes.size() < kHeaderSize) throw FormatError("ACHM data truncated");
    const unsigned char* d = reinterpret_cast<const unsigned char*>(bytes.data());
    if (std::memcmp(d, kMagic, 4) != 0) throw FormatError("not an ACHM file");
    const std::uint16_t version = get_u16(d + 4);
    if (version != kAchmVersion)
        throw FormatError("unsupported ACHM version " + std::to_string(version));
    const std::uint8_t channel_id = d[6];
    if (channel_id >= kNumChannels) throw FormatError("invalid ACHM channel id");

    constexpr std::uint32_t kDimCap = 1u << 26; // keeps all header math in int range
    for (size_t off : {7u, 11u, 19u, 23u}) {
        if (get_u32(d + off) > kDimCap) throw FormatError("ACHM dimension implausibly large");
    }

    Heatmap hm;
    hm.channel = static_cast<Channel>(channel_id);
    hm.geometry.image_width = static_cast<int>(get_u32(d + 7));
    hm.geometry.image_height = static_cast<int>(get_u32(d + 11));
    hm.geometry.patch_size = get_u16(d + 15);
    hm.geometry.stride = get_u16(d + 17);
    hm.geometry.hm_width = static_cast<int>(get_u32(d + 19));
    hm.geometry.hm_height = static_cast<int>(get_u32(d + 23));

    HeatmapGeometry expected;
    try {
        expected = geometry_for(hm.geometry.image_width, hm.geometry.image_height,
                                hm.geometry.patch_size, hm.geometry.stride);
    } catch (const Error&) {
        throw FormatError("ACHM header describes an impossible geometry");
    }
    if (expected != hm.geometry) throw FormatError("ACHM heatmap dims disagree with geometry");

    const size_t count = static_cast<size_t>(hm.geometry.cell_count());
    if (bytes.size() != kHeaderSize + 4 * count) throw FormatError("ACHM payload size mismatch");
    hm.values.resize(count);
    for (size_t i = 0; i < count; ++i) {
        const std::uint32_t bits = get_u32(d + kHeaderSize + 4 * i);
        float v;
        std::memcpy(&v, &bits, sizeof(v));
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
            throw FormatError("ACHM value outside [0,1]");
        hm.values[i] = v;
    }
    return hm;
}

void write_achm(const std::string& path, const Heatmap& heatmap) {
    const std::vector<char> bytes = achm_serialize(heatmap);
    write_file_atomic(path, bytes);
}

Heatmap read_achm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string s = std::move(buf).str();
    return achm_parse(std::vector<char>(s.begin(), s.end()));
}

} // namespace acd
