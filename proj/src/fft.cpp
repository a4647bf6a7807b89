#include "texfract/fft.hpp"

#include <cmath>
#include <numbers>

#include "texfract/error.hpp"

namespace texfract {

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_1d(std::complex<double>* data, size_t n, bool inverse) {
    if (n == 0 || (n & (n - 1)) != 0)
        fail(ErrorCode::InvalidArgument, "fft_1d: size must be a power of two");

    // Bit-reversal permutation.
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (size_t i = 0; i < n; ++i) data[i] *= inv;
    }
}

void fft_2d(std::vector<std::complex<double>>& data, size_t rows, size_t cols, bool inverse) {
    if (data.size() != rows * cols)
        fail(ErrorCode::DimensionMismatch, "fft_2d: buffer size mismatch");

    for (size_t r = 0; r < rows; ++r)
        fft_1d(data.data() + r * cols, cols, inverse);

    std::vector<std::complex<double>> column(rows);
    for (size_t c = 0; c < cols; ++c) {
        for (size_t r = 0; r < rows; ++r) column[r] = data[r * cols + c];
        fft_1d(column.data(), rows, inverse);
        for (size_t r = 0; r < rows; ++r) data[r * cols + c] = column[r];
    }
}

} // namespace texfract
