#pragma once

#include <filesystem>

#include "texfract/image.hpp"

namespace texfract {

/// Decode an 8-bit grayscale PNG or binary PGM (P5). Color PNGs are reduced by
/// integer luminance round(0.299R + 0.587G + 0.114B). Result always has levels=256.
GrayImage load_image(const std::filesystem::path& path);

/// Write a binary PGM (P5, maxval 255). Requires levels <= 256.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

} // namespace texfract
