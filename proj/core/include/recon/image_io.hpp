#pragma once

#include <string>

#include "recon/grid.hpp"

namespace recon {

/// Reads a binary PGM (P5, maxval < 256) or a PNG file as grayscale with
/// values scaled to [0, 1]. Both dimensions must be even.
Image load_image(const std::string& path);

/// Writes an 8-bit grayscale PGM or PNG, chosen by extension. Values are
/// clamped to [0, 1] and rounded to the nearest level.
void save_image(const Image& a, const std::string& path);

}  // namespace recon
