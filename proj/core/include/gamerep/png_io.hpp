#pragma once

#include <string>

#include "gamerep/image.hpp"

namespace gamerep {

/// Reads an 8-bit RGB PNG; values map to [0,1] by value/255.
Image read_png(const std::string& path);

/// Writes 8-bit RGB; values are clamped to [0,1] and quantized by
/// round(v * 255), so a write/read round trip is deterministic.
void write_png(const std::string& path, const Image& img);

}  // namespace gamerep
