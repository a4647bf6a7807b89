#pragma once

#include <complex>
#include <vector>

namespace texfract {

/// In-place radix-2 FFT; size must be a power of two. Inverse includes 1/n scaling.
void fft_1d(std::complex<double>* data, size_t n, bool inverse);

/// Row-major 2-D FFT over a rows x cols grid (both powers of two).
void fft_2d(std::vector<std::complex<double>>& data, size_t rows, size_t cols, bool inverse);

size_t next_pow2(size_t n);

} // namespace texfract
