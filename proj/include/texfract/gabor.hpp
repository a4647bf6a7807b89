#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "texfract/image.hpp"

namespace texfract {

enum class SigmaVForm {
    Printed, // angular width exactly as the bank formula is printed
    Classic, // commonly cited closed form (2 ln2 * sigma_u^2 / U_h inside the bracket)
};

struct BankConfig {
    int scales = 4;       // M
    int orientations = 6; // N
    double u_low = 0.05;  // U_l, cycles/pixel
    double u_high = 0.4;  // U_h, cycles/pixel
    double truncation = 3.0;
    SigmaVForm sigma_v_form = SigmaVForm::Printed;

    void validate() const;
};

/// Derived dictionary parameters for maximum spectrum coverage at lowest redundancy.
struct BankParams {
    double a = 0.0;       // scale ratio, > 1
    double sigma_u = 0.0; // frequency-domain widths
    double sigma_v = 0.0;
    double sigma_x = 0.0; // space-domain widths, 1/(2 pi sigma_{u,v})
    double sigma_y = 0.0;
    double w = 0.0;       // modulation frequency, = U_h
};

struct GaborKernel {
    int scale = 0;       // m in [0, M)
    int orientation = 0; // n in [0, N)
    double theta = 0.0;  // pi * n / N
    int side = 0;        // odd square support
    std::vector<std::complex<double>> taps; // row-major, center at (side/2, side/2)

    std::complex<double> tap(int dx, int dy) const {
        const int half = side / 2;
        return taps[static_cast<size_t>(dy + half) * side + (dx + half)];
    }
};

struct GaborStack {
    int scales = 0;
    int orientations = 0;
    std::vector<RealImage> channels; // index m * orientations + n

    const RealImage& channel(int m, int n) const {
        return channels[static_cast<size_t>(m) * orientations + n];
    }
    int channel_count() const { return scales * orientations; }
};

BankParams derive_params(const BankConfig& config);

/// Sample the M*N self-similar dictionary on integer lattices; kernel (m,n)
/// is the mother kernel dilated by a^-m and rotated by theta = pi*n/N, with
/// support side 2*ceil(t * a^m * max(sigma_x, sigma_y)) + 1.
std::vector<GaborKernel> build_bank(const BankConfig& config);

/// |image * kernel| with zero padding, same-size output, computed via FFT
/// on a padded power-of-two grid.
RealImage convolve_magnitude(const GrayImage& img, const GaborKernel& kernel);

GaborStack gabor_stack(const GrayImage& img, const BankConfig& config);

/// Prebuilt dictionary that caches kernel spectra per padded grid size, so
/// convolving many same-sized images pays the kernel FFTs once. Safe to share
/// across threads.
class GaborBank {
public:
    explicit GaborBank(const BankConfig& config);

    const BankConfig& config() const { return config_; }
    const BankParams& params() const { return params_; }
    const std::vector<GaborKernel>& kernels() const { return kernels_; }

    GaborStack stack(const GrayImage& img) const;

private:
    using Spectra = std::vector<std::vector<std::complex<double>>>;

    std::shared_ptr<const Spectra> spectra_for(size_t rows, size_t cols) const;

    BankConfig config_;
    BankParams params_;
    std::vector<GaborKernel> kernels_;
    int max_side_ = 0;

    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<size_t, size_t>, std::shared_ptr<const Spectra>> spectra_cache_;
};

} // namespace texfract
