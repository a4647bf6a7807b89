#pragma once

#include <cstdint>
#include <vector>

#include "texfract/image.hpp"

namespace texfract {

/// All achievable Euclidean dilation radii up to r_max: the integers in
/// [1, r_max^2] expressible as i^2+j^2+k^2, carried in squared form so every
/// threshold comparison stays exact.
struct RadiusSet {
    int r_max = 0;
    std::vector<int> squared;   // ascending
    std::vector<double> radii;  // sqrt(squared)

    size_t size() const { return squared.size(); }
};

/// Exact squared Euclidean distances to the gray-level surface, on the
/// W x H x (levels + 2*r_max) embedding grid.
struct DistanceGrid {
    int width = 0;
    int height = 0;
    int depth = 0;
    int r_max = 0;
    std::vector<int32_t> sq; // (z * height + y) * width + x

    int32_t at(int x, int y, int z) const {
        return sq[(static_cast<size_t>(z) * height + y) * width + x];
    }
};

/// Log dilation volumes over the radius set; the texture descriptor itself.
struct FractalSignature {
    int r_max = 0;
    std::vector<double> log_volumes; // ln V(r), one per radius, non-decreasing
    int source_scale = -1;           // (m,n) channel tag when derived from a stack
    int source_orientation = -1;
};

RadiusSet radius_set(int r_max);

/// Three-pass separable exact squared EDT. Seeds are the surface voxels
/// (x, y, pixel + r_max); the z shift keeps the dilation inside the grid.
DistanceGrid edt3_squared(const GrayImage& surface, int r_max);

/// V[t] = number of grid voxels within radius radii[t] of the surface.
std::vector<int64_t> volumes(const DistanceGrid& grid, const RadiusSet& rs);

FractalSignature fractal_signature(const GrayImage& img, int r_max);

/// D = 3 - slope of the least-squares fit of ln V(r) against ln r.
double fractal_dimension(const FractalSignature& sig);

} // namespace texfract
