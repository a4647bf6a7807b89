#pragma once

#include <cstdint>
#include <vector>

#include "texfract/error.hpp"

namespace texfract {

/// Quantized 2-D intensity grid, row-major, intensities in [0, levels-1].
struct GrayImage {
    int width = 0;
    int height = 0;
    int levels = 256;
    std::vector<uint16_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, int g = 256)
        : width(w), height(h), levels(g),
          pixels(static_cast<size_t>(w) * static_cast<size_t>(h), 0) {
        if (w < 1 || h < 1 || g < 2)
            fail(ErrorCode::InvalidArgument, "GrayImage: bad dimensions");
    }

    uint16_t at(int x, int y) const {
        return pixels[static_cast<size_t>(y) * width + x];
    }
    uint16_t& at(int x, int y) {
        return pixels[static_cast<size_t>(y) * width + x];
    }
    size_t pixel_count() const { return pixels.size(); }

    void validate() const;
};

/// Real-valued 2-D grid, row-major. Holds convolution magnitudes before quantization.
struct RealImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    RealImage() = default;
    RealImage(int w, int h)
        : width(w), height(h),
          values(static_cast<size_t>(w) * static_cast<size_t>(h), 0.0) {
        if (w < 1 || h < 1)
            fail(ErrorCode::InvalidArgument, "RealImage: bad dimensions");
    }

    double at(int x, int y) const {
        return values[static_cast<size_t>(y) * width + x];
    }
    double& at(int x, int y) {
        return values[static_cast<size_t>(y) * width + x];
    }
};

/// Linear min-max rescale to `levels` gray values:
/// q = floor((v - min) * (levels-1) / (max - min) + 0.5); constant input maps to all zeros.
GrayImage quantize(const RealImage& img, int levels);

} // namespace texfract
