#pragma once

// Netpbm readers/writers: PGM (P2/P5, 8- and 16-bit) and PPM (P3/P6, reduced
// to luma on read). Masks are written as 8-bit PGM with values 0/255. Label
// maps are PGM files whose raw sample values are segment labels, 0 meaning
// background. All writes are atomic (temp file + rename).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "acdetect/types.hpp"

namespace acd {

// PGM/PPM by magic number; values normalized to [0,1], color reduced to
// luma. Throws IoError if unreadable, FormatError if not a valid file.
ImageGray read_image(const std::string& path);

// 8-bit binary PGM, values quantized to 0..255.
void write_image_pgm(const std::string& path, const ImageGray& image);

// {0,1} grid -> 8-bit binary PGM with 0/255.
void write_mask_pgm(const std::string& path, std::span<const std::uint8_t> mask, int width,
                    int height);

struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> labels; // raw sample values, row-major
};

LabelMap read_label_pgm(const std::string& path);

// 16-bit binary PGM (big-endian samples, per the format).
void write_label_pgm(const std::string& path, const LabelMap& map);

// Whole-file atomic write used by every writer in the project.
void write_file_atomic(const std::string& path, std::span<const char> bytes);

} // namespace acd
