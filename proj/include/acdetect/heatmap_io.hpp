#pragma once

// ACHM heatmap container: a fixed little-endian layout so heatmaps produced
// by any classifier (including externally trained models) can feed the
// a-contrario stage.
//
//   offset  size  field
//   0       4     magic "ACHM"
//   4       2     format version (u16, currently 1)
//   6       1     channel id (u8, canonical order)
//   7       8     image width, height (2 x u32)
//   15      2     patch size (u16)
//   17      2     stride (u16)
//   19      8     heatmap width, height (2 x u32)
//   27      ...   hm_width * hm_height IEEE-754 binary32 values, row-major
//
// Values survive a write/read cycle bit for bit.

#include <cstdint>
#include <string>
#include <vector>

#include "acdetect/types.hpp"

namespace acd {

inline constexpr std::uint16_t kAchmVersion = 1;

std::vector<char> achm_serialize(const Heatmap& heatmap);

// Throws FormatError on malformed content (bad magic/version/geometry or
// out-of-range values).
Heatmap achm_parse(const std::vector<char>& bytes);

void write_achm(const std::string& path, const Heatmap& heatmap);
Heatmap read_achm(const std::string& path);

} // namespace acd
