#include "acdetect/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace acd {

namespace {

struct PnmHeader {
    std::string magic;
    int width = 0;
    int height = 0;
    int maxval = 0;
    size_t data_offset = 0; // first byte after the single whitespace ending the header
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw IoError("read failure: " + path);
    return std::move(buf).str();
}

// Parses "P?" magic, width, height, maxval, skipping '#' comments.
PnmHeader parse_pnm_header(const std::string& bytes, const std::string& path) {
    PnmHeader h;
    size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    };
    auto next_token = [&]() -> std::string {
        skip_space();
        const size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (start == pos) throw FormatError("truncated header: " + path);
        return bytes.substr(start, pos - start);
    };

    h.magic = next_token();
    if (h.magic != "P2" && h.magic != "P5" && h.magic != "P3" && h.magic != "P6")
        throw FormatError("unsupported image format (want PGM/PPM): " + path);
    try {
        h.width = std::stoi(next_token());
        h.height = std::stoi(next_token());
        h.maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        throw FormatError("malformed header: " + path);
    }
    if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535)
        throw FormatError("invalid dimensions or maxval: " + path);
    // exactly one whitespace byte separates the header from raw data
    if ((h.magic == "P5" || h.magic == "P6") && pos < bytes.size()) ++pos;
    h.data_offset = pos;
    return h;
}

// Raw samples in file order, one int per sample (1 or 3 per pixel).
std::vector<std::uint16_t> read_samples(const std::string& bytes, const PnmHeader& h,
                                        int samples_per_pixel, const std::string& path) {
    const std::int64_t count =
        static_cast<std::int64_t>(h.width) * h.height * samples_per_pixel;
    std::vector<std::uint16_t> samples(static_cast<size_t>(count));
    if (h.magic == "P2" || h.magic == "P3") {
        size_t pos = h.data_offset;
        for (std::int64_t i = 0; i < count; ++i) {
            while (pos < bytes.size() &&
                   (std::isspace(static_cast<unsigned char>(bytes[pos])) || bytes[pos] == '#')) {
                if (bytes[pos] == '#')
                    while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                else
                    ++pos;
            }
            const size_t start = pos;
            long value = 0;
            while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
                value = value * 10 + (bytes[pos] - '0');
                ++pos;
            }
            if (pos == start) throw FormatError("truncated pixel data: " + path);
            if (value > h.maxval) throw FormatError("sample exceeds maxval: " + path);
            samples[static_cast<size_t>(i)] = static_cast<std::uint16_t>(value);
        }
    } else {
        const int bytes_per_sample = h.maxval > 255 ? 2 : 1;
        const size_t need = static_cast<size_t>(count) * bytes_per_sample;
        if (bytes.size() - h.data_offset < need)
            throw FormatError("truncated pixel data: " + path);
        const unsigned char* d =
            reinterpret_cast<const unsigned char*>(bytes.data()) + h.data_offset;
        for (std::int64_t i = 0; i < count; ++i) {
            std::uint16_t v;
            if (bytes_per_sample == 2) {
                v = static_cast<std::uint16_t>((d[2 * i] << 8) | d[2 * i + 1]); // big-endian
            } else {
                v = d[i];
            }
            if (v > h.maxval) throw FormatError("sample exceeds maxval: " + path);
            samples[static_cast<size_t>(i)] = v;
        }
    }
    return samples;
}

} // namespace

ImageGray read_image(const std::string& path) {
    const std::string bytes = read_file(path);
    const PnmHeader h = parse_pnm_header(bytes, path);
    const bool color = h.magic == "P3" || h.magic == "P6";
    const auto samples = read_samples(bytes, h, color ? 3 : 1, path);

    ImageGray img;
    img.width = h.width;
    img.height = h.height;
    img.values.resize(static_cast<size_t>(h.width) * h.height);
    const double scale = 1.0 / h.maxval;
    if (color) {
        for (size_t i = 0; i < img.values.size(); ++i) {
            img.values[i] = luma601(samples[3 * i] * scale, samples[3 * i + 1] * scale,
                                    samples[3 * i + 2] * scale);
        }
    } else {
        for (size_t i = 0; i < img.values.size(); ++i) img.values[i] = samples[i] * scale;
    }
    return img;
}

void write_image_pgm(const std::string& path, const ImageGray& image) {
    std::string out = "P5\n" + std::to_string(image.width) + " " +
                      std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.values.size());
    for (double v : image.values) {
        const long q = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
        out.push_back(static_cast<char>(static_cast<unsigned char>(q)));
    }
    write_file_atomic(path, out);
}

void write_mask_pgm(const std::string& path, std::span<const std::uint8_t> mask, int width,
                    int height) {
    if (static_cast<std::int64_t>(mask.size()) != static_cast<std::int64_t>(width) * height)
        throw ShapeError("mask buffer does not match dimensions");
    std::string out =
        "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.reserve(out.size() + mask.size());
    for (std::uint8_t b : mask) out.push_back(static_cast<char>(b ? 255 : 0));
    write_file_atomic(path, out);
}

LabelMap read_label_pgm(const std::string& path) {
    const std::string bytes = read_file(path);
    const PnmHeader h = parse_pnm_header(bytes, path);
    if (h.magic == "P3" || h.magic == "P6")
        throw FormatError("label maps must be single-channel PGM: " + path);
    LabelMap map;
    map.width = h.width;
    map.height = h.height;
    map.labels = read_samples(bytes, h, 1, path);
    return map;
}

void write_label_pgm(const std::string& path, const LabelMap& map) {
    if (map.labels.size() != static_cast<size_t>(map.width) * map.height)
        throw ShapeError("label buffer does not match dimensions");
    std::string out =
        "P5\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n65535\n";
    out.reserve(out.size() + 2 * map.labels.size());
    for (std::uint16_t v : map.labels) {
        out.push_back(static_cast<char>(v >> 8));
        out.push_back(static_cast<char>(v & 0xff));
    }
    write_file_atomic(path, out);
}

void write_file_atomic(const std::string& path, std::span<const char> bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out.good()) throw IoError("write failure: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot finalize write: " + path + " (" + ec.message() + ")");
    }
}

} // namespace acd
