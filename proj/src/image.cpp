#include "texfract/image.hpp"

#include <algorithm>
#include <cmath>

namespace texfract {

void GrayImage::validate() const {
    if (width < 1 || height < 1)
        fail(ErrorCode::InvalidArgument, "GrayImage: width and height must be >= 1");
    if (pixels.size() != static_cast<size_t>(width) * static_cast<size_t>(height))
        fail(ErrorCode::InvalidArgument, "GrayImage: pixel buffer size mismatch");
    for (uint16_t p : pixels)
        if (p >= levels)
            fail(ErrorCode::InvalidArgument, "GrayImage: intensity out of range");
}

GrayImage quantize(const RealImage& img, int levels) {
    if (levels < 2)
        fail(ErrorCode::InvalidArgument, "quantize: levels must be >= 2");

    double lo = img.values[0];
    double hi = img.values[0];
    for (double v : img.values) {
        if (!std::isfinite(v))
            fail(ErrorCode::NumericFailure, "quantize: non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    GrayImage out(img.width, img.height, levels);
    if (hi == lo)
        return out;

    const double scale = (levels - 1) / (hi - lo);
    for (size_t i = 0; i < img.values.size(); ++i)
        out.pixels[i] = static_cast<uint16_t>(std::floor((img.values[i] - lo) * scale + 0.5));
    return out;
}

} // namespace texfract
