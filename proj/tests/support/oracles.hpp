#pragma once

// Brute-force reference implementations for the oracle tests. These stay
// deliberately naive and independent of the library's algorithmic paths.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "texfract/gabor.hpp"
#include "texfract/image.hpp"
#include "texfract/linalg.hpp"
#include "texfract/vfd.hpp"

namespace oracle {

// Direct O(n^2 k^2) spatial convolution magnitude with zero padding.
inline texfract::RealImage spatial_convolve_magnitude(const texfract::GrayImage& img,
                                                      const texfract::GaborKernel& kernel) {
    texfract::RealImage out(img.width, img.height);
    const int half = kernel.side / 2;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            std::complex<double> acc(0.0, 0.0);
            for (int t = -half; t <= half; ++t) {
                const int sy = y - t;
                if (sy < 0 || sy >= img.height) continue;
                for (int s = -half; s <= half; ++s) {
                    const int sx = x - s;
                    if (sx < 0 || sx >= img.width) continue;
                    acc += static_cast<double>(img.at(sx, sy)) * kernel.tap(s, t);
                }
            }
            out.at(x, y) = std::abs(acc);
        }
    }
    return out;
}

// Exhaustive nearest-seed squared distances over the same embedding grid that
// edt3_squared uses (seeds at z = pixel + r_max).
inline std::vector<int32_t> brute_edt3_squared(const texfract::GrayImage& img, int r_max) {
    const int w = img.width;
    const int h = img.height;
    const int depth = img.levels + 2 * r_max;

    struct Seed {
        int x, y, z;
    };
    std::vector<Seed> seeds;
    seeds.reserve(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            seeds.push_back({x, y, img.at(x, y) + r_max});

    std::vector<int32_t> grid(static_cast<size_t>(w) * h * depth);
    for (int z = 0; z < depth; ++z)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int32_t best = INT32_MAX;
                for (const Seed& s : seeds) {
                    const int dx = x - s.x, dy = y - s.y, dz = z - s.z;
                    best = std::min(best, dx * dx + dy * dy + dz * dz);
                }
                grid[(static_cast<size_t>(z) * h + y) * w + x] = best;
            }
    return grid;
}

// Union-of-spheres dilation volume: voxels within squared radius of any seed.
inline std::vector<int64_t> brute_volumes(const texfract::GrayImage& img, int r_max,
                                          const texfract::RadiusSet& rs) {
    const auto grid = brute_edt3_squared(img, r_max);
    std::vector<int64_t> counts(rs.size(), 0);
    for (int32_t sq : grid)
        for (size_t t = 0; t < rs.size(); ++t)
            if (sq <= rs.squared[t])
                ++counts[t];
    return counts;
}

// Two-pass covariance over the per-pixel channel vectors.
inline texfract::Matrix direct_covariance(const texfract::GaborStack& stack) {
    const int k = static_cast<int>(stack.channels.size());
    const int w = stack.channels[0].width;
    const int h = stack.channels[0].height;
    const long n = static_cast<long>(w) * h;

    std::vector<double> mean(k, 0.0);
    for (int c = 0; c < k; ++c) {
        for (double v : stack.channels[c].values)
            mean[c] += v;
        mean[c] /= static_cast<double>(n);
    }

    texfract::Matrix cov(k, k);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    cov.at(i, j) += (stack.channels[i].at(x, y) - mean[i]) *
                                    (stack.channels[j].at(x, y) - mean[j]);
    for (double& v : cov.data)
        v /= static_cast<double>(n - 1);
    return cov;
}

inline texfract::GrayImage random_image(std::mt19937_64& rng, int w, int h, int levels) {
    texfract::GrayImage img(w, h, levels);
    for (auto& p : img.pixels)
        p = static_cast<uint16_t>(rng() % levels);
    return img;
}

inline texfract::RealImage random_real_image(std::mt19937_64& rng, int w, int h) {
    texfract::RealImage img(w, h);
    for (auto& v : img.values)
        v = static_cast<double>(rng()) / static_cast<double>(UINT64_MAX);
    return img;
}

inline texfract::GaborStack random_stack(std::mt19937_64& rng, int scales, int orientations,
                                         int w, int h) {
    texfract::GaborStack stack;
    stack.scales = scales;
    stack.orientations = orientations;
    for (int c = 0; c < scales * orientations; ++c)
        stack.channels.push_back(random_real_image(rng, w, h));
    return stack;
}

inline double max_abs(const texfract::RealImage& img) {
    double m = 0.0;
    for (double v : img.values)
        m = std::max(m, std::abs(v));
    return m;
}

} // namespace oracle
