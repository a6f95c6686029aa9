#pragma once

#include <string>

#include "rseg/image.hpp"

namespace rseg {

/// Loads a PGM (P2/P5) or 8-bit grayscale PNG, chosen by file magic.
/// Intensities are mapped to [0, 255]. Throws std::runtime_error on I/O or
/// format problems; parse errors report the byte offset.
GrayImage load_image(const std::string& path);

/// Loads a mask from PGM/PNG; any value > 0 becomes object.
BinaryMask load_mask(const std::string& path);

/// Format is chosen by extension: .png writes PNG, anything else binary PGM (P5).
void save_image(const GrayImage& img, const std::string& path);

/// Masks are written as 0 / 255.
void save_mask(const BinaryMask& mask, const std::string& path);

}  // namespace rseg
