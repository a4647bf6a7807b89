#include "texfract/gabor.hpp"

#include <cmath>
#include <numbers>

#include "texfract/fft.hpp"

namespace texfract {

namespace {

constexpr int kMaxKernelSide = 4097;
constexpr double kPi = std::numbers::pi;

// Wrap centered kernel taps onto a rows x cols grid and return the forward FFT.
std::vector<std::complex<double>> kernel_spectrum(const GaborKernel& kernel,
                                                  size_t rows, size_t cols) {
    std::vector<std::complex<double>> buf(rows * cols);
    const int half = kernel.side / 2;
    for (int dy = -half; dy <= half; ++dy) {
        const size_t r = static_cast<size_t>((dy + static_cast<int>(rows)) % static_cast<int>(rows));
        for (int dx = -half; dx <= half; ++dx) {
            const size_t c = static_cast<size_t>((dx + static_cast<int>(cols)) % static_cast<int>(cols));
            buf[r * cols + c] = kernel.tap(dx, dy);
        }
    }
    fft_2d(buf, rows, cols, false);
    return buf;
}

std::vector<std::complex<double>> image_spectrum(const GrayImage& img,
                                                 size_t rows, size_t cols) {
    std::vector<std::complex<double>> buf(rows * cols);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            buf[static_cast<size_t>(y) * cols + x] = static_cast<double>(img.at(x, y));
    fft_2d(buf, rows, cols, false);
    return buf;
}

RealImage magnitude_from_product(const std::vector<std::complex<double>>& img_spec,
                                 const std::vector<std::complex<double>>& ker_spec,
                                 size_t rows, size_t cols, int width, int height) {
    std::vector<std::complex<double>> prod(rows * cols);
    for (size_t i = 0; i < prod.size(); ++i)
        prod[i] = img_spec[i] * ker_spec[i];
    fft_2d(prod, rows, cols, true);

    RealImage out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) = std::abs(prod[static_cast<size_t>(y) * cols + x]);
    return out;
}

void padded_size(const GrayImage& img, int side, size_t& rows, size_t& cols) {
    rows = next_pow2(static_cast<size_t>(img.height) + side - 1);
    cols = next_pow2(static_cast<size_t>(img.width) + side - 1);
}

} // namespace

void BankConfig::validate() const {
    if (scales < 2)
        fail(ErrorCode::InvalidArgument, "bank config: scales must be >= 2");
    if (orientations < 1)
        fail(ErrorCode::InvalidArgument, "bank config: orientations must be >= 1");
    if (!(u_low > 0.0 && u_low < u_high && u_high < 0.5))
        fail(ErrorCode::InvalidArgument, "bank config: require 0 < U_l < U_h < 0.5");
    if (!(truncation > 0.0))
        fail(ErrorCode::InvalidArgument, "bank config: truncation must be positive");
}

BankParams derive_params(const BankConfig& config) {
    config.validate();

    BankParams p;
    p.a = std::pow(config.u_high / config.u_low, 1.0 / (config.scales - 1));
    p.w = config.u_high;

    const double two_ln2 = 2.0 * std::numbers::ln2;
    p.sigma_u = (p.a - 1.0) * config.u_high / ((p.a + 1.0) * std::sqrt(two_ln2));

    const double su2 = p.sigma_u * p.sigma_u;
    const double uh = config.u_high;
    const double bracket = config.sigma_v_form == SigmaVForm::Printed
                               ? uh - 2.0 * std::log(su2 / uh)
                               : uh - two_ln2 * su2 / uh;
    const double under_root = two_ln2 - two_ln2 * two_ln2 * su2 / (uh * uh);
    if (!(under_root > 0.0) || !(bracket > 0.0))
        fail(ErrorCode::NumericFailure, "bank params: sigma_v expression degenerate");
    p.sigma_v = std::tan(kPi / (2.0 * config.orientations)) * bracket / std::sqrt(under_root);

    p.sigma_x = 1.0 / (2.0 * kPi * p.sigma_u);
    p.sigma_y = 1.0 / (2.0 * kPi * p.sigma_v);
    return p;
}

std::vector<GaborKernel> build_bank(const BankConfig& config) {
    const BankParams p = derive_params(config);
    const double norm = 1.0 / (2.0 * kPi * p.sigma_x * p.sigma_y);
    const double base_extent = std::max(p.sigma_x, p.sigma_y);

    std::vector<GaborKernel> bank;
    bank.reserve(static_cast<size_t>(config.scales) * config.orientations);
    for (int m = 0; m < config.scales; ++m) {
        const double dilation = std::pow(p.a, -m);
        const int half = static_cast<int>(std::ceil(config.truncation * base_extent / dilation));
        const int side = 2 * half + 1;
        if (side > kMaxKernelSide)
            fail(ErrorCode::InvalidArgument, "kernel support exceeds limit; check bank config");

        for (int n = 0; n < config.orientations; ++n) {
            GaborKernel k;
            k.scale = m;
            k.orientation = n;
            k.theta = kPi * n / config.orientations;
            k.side = side;
            k.taps.resize(static_cast<size_t>(side) * side);

            const double c = std::cos(k.theta);
            const double s = std::sin(k.theta);
            for (int dy = -half; dy <= half; ++dy) {
                for (int dx = -half; dx <= half; ++dx) {
                    const double xr = dilation * (dx * c + dy * s);
                    const double yr = dilation * (-dx * s + dy * c);
                    const double envelope =
                        norm * std::exp(-0.5 * (xr * xr / (p.sigma_x * p.sigma_x) +
                                                yr * yr / (p.sigma_y * p.sigma_y)));
                    const double phase = 2.0 * kPi * p.w * xr;
                    k.taps[static_cast<size_t>(dy + half) * side + (dx + half)] =
                        dilation * envelope * std::complex<double>(std::cos(phase), std::sin(phase));
                }
            }
            bank.push_back(std::move(k));
        }
    }
    return bank;
}

RealImage convolve_magnitude(const GrayImage& img, const GaborKernel& kernel) {
    size_t rows, cols;
    padded_size(img, kernel.side, rows, cols);
    const auto img_spec = image_spectrum(img, rows, cols);
    const auto ker_spec = kernel_spectrum(kernel, rows, cols);
    return magnitude_from_product(img_spec, ker_spec, rows, cols, img.width, img.height);
}

GaborStack gabor_stack(const GrayImage& img, const BankConfig& config) {
    return GaborBank(config).stack(img);
}

GaborBank::GaborBank(const BankConfig& config)
    : config_(config), params_(derive_params(config)), kernels_(build_bank(config)) {
    for (const auto& k : kernels_)
        max_side_ = std::max(max_side_, k.side);
}

std::shared_ptr<const GaborBank::Spectra> GaborBank::spectra_for(size_t rows, size_t cols) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto& slot = spectra_cache_[{rows, cols}];
    if (!slot) {
        auto spectra = std::make_shared<Spectra>();
        spectra->reserve(kernels_.size());
        for (const auto& k : kernels_)
            spectra->push_back(kernel_spectrum(k, rows, cols));
        slot = std::move(spectra);
    }
    return slot;
}

GaborStack GaborBank::stack(const GrayImage& img) const {
    size_t rows, cols;
    padded_size(img, max_side_, rows, cols);
    const auto img_spec = image_spectrum(img, rows, cols);
    const auto spectra = spectra_for(rows, cols);

    GaborStack out;
    out.scales = config_.scales;
    out.orientations = config_.orientations;
    out.channels.reserve(kernels_.size());
    for (size_t i = 0; i < kernels_.size(); ++i)
        out.channels.push_back(magnitude_from_product(img_spec, (*spectra)[i], rows, cols,
                                                      img.width, img.height));
    return out;
}

} // namespace texfract
