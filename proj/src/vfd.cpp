#include "texfract/vfd.hpp"

#include <algorithm>
#include <cmath>

namespace texfract {

namespace {

// Felzenszwalb-Huttenlocher lower-envelope pass:
// d[q] = min_p (f[p] + (q-p)^2), all f finite.
void envelope_1d(const int32_t* f, int32_t* d, int n, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -1e300;
    z[1] = 1e300;
    for (int q = 1; q < n; ++q) {
        const double fq = f[q] + static_cast<double>(q) * q;
        double s;
        while (true) {
            const int p = v[k];
            s = (fq - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = 1e300;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const int p = v[k];
        d[q] = f[p] + (q - p) * (q - p);
    }
}

} // namespace

RadiusSet radius_set(int r_max) {
    if (r_max < 1 || r_max > 64)
        fail(ErrorCode::InvalidArgument, "radius_set: r_max must be in [1, 64]");

    const int cap = r_max * r_max;
    std::vector<char> hit(static_cast<size_t>(cap) + 1, 0);
    for (int i = 0; i <= r_max; ++i)
        for (int j = 0; j <= r_max; ++j)
            for (int k = 0; k <= r_max; ++k) {
                const int s = i * i + j * j + k * k;
                if (s >= 1 && s <= cap)
                    hit[s] = 1;
            }

    RadiusSet rs;
    rs.r_max = r_max;
    for (int s = 1; s <= cap; ++s)
        if (hit[s]) {
            rs.squared.push_back(s);
            rs.radii.push_back(std::sqrt(static_cast<double>(s)));
        }
    return rs;
}

DistanceGrid edt3_squared(const GrayImage& surface, int r_max) {
    if (surface.levels > 256)
        fail(ErrorCode::InvalidArgument, "edt3_squared: levels must be <= 256");
    if (r_max < 1 || r_max > 64)
        fail(ErrorCode::InvalidArgument, "edt3_squared: r_max must be in [1, 64]");

    const int w = surface.width;
    const int h = surface.height;
    const int depth = surface.levels + 2 * r_max;

    DistanceGrid grid;
    grid.width = w;
    grid.height = h;
    grid.depth = depth;
    grid.r_max = r_max;
    grid.sq.resize(static_cast<size_t>(w) * h * depth);

    // Pass 1 (z): one seed per column at z0 = pixel + r_max, so the axial
    // distance is just (z - z0)^2.
    for (int z = 0; z < depth; ++z) {
        int32_t* slab = grid.sq.data() + static_cast<size_t>(z) * h * w;
        for (int y = 0; y < h; ++y) {
            const uint16_t* src = surface.pixels.data() + static_cast<size_t>(y) * w;
            int32_t* row = slab + static_cast<size_t>(y) * w;
            for (int x = 0; x < w; ++x) {
                const int dz = z - (src[x] + r_max);
                row[x] = dz * dz;
            }
        }
    }

    const int maxdim = std::max(w, h);
    std::vector<int32_t> f(maxdim), d(maxdim);
    std::vector<int> v(maxdim);
    std::vector<double> z_bounds(static_cast<size_t>(maxdim) + 1);

    // Pass 2 (x): rows are contiguous.
    for (int z = 0; z < depth; ++z) {
        int32_t* slab = grid.sq.data() + static_cast<size_t>(z) * h * w;
        for (int y = 0; y < h; ++y) {
            int32_t* row = slab + static_cast<size_t>(y) * w;
            std::copy(row, row + w, f.data());
            envelope_1d(f.data(), row, w, v.data(), z_bounds.data());
        }
    }

    // Pass 3 (y): gather strided columns within each z slab.
    for (int z = 0; z < depth; ++z) {
        int32_t* slab = grid.sq.data() + static_cast<size_t>(z) * h * w;
        for (int x = 0; x < w; ++x) {
            for (int y = 0; y < h; ++y)
                f[y] = slab[static_cast<size_t>(y) * w + x];
            envelope_1d(f.data(), d.data(), h, v.data(), z_bounds.data());
            for (int y = 0; y < h; ++y)
                slab[static_cast<size_t>(y) * w + x] = d[y];
        }
    }

    return grid;
}

std::vector<int64_t> volumes(const DistanceGrid& grid, const RadiusSet& rs) {
    if (rs.r_max != grid.r_max)
        fail(ErrorCode::InvalidArgument, "volumes: radius set does not match grid");

    const int cap = rs.r_max * rs.r_max;
    std::vector<int64_t> bucket(static_cast<size_t>(cap) + 1, 0);
    for (int32_t s : grid.sq)
        if (s <= cap)
            ++bucket[s];

    std::vector<int64_t> counts;
    counts.reserve(rs.size());
    int64_t running = 0;
    int next = 0;
    for (int s = 0; s <= cap; ++s) {
        running += bucket[s];
        if (next < static_cast<int>(rs.squared.size()) && rs.squared[next] == s) {
            counts.push_back(running);
            ++next;
        }
    }
    return counts;
}

FractalSignature fractal_signature(const GrayImage& img, int r_max) {
    const RadiusSet rs = radius_set(r_max);
    const DistanceGrid grid = edt3_squared(img, r_max);
    const std::vector<int64_t> v = volumes(grid, rs);

    FractalSignature sig;
    sig.r_max = r_max;
    sig.log_volumes.reserve(v.size());
    for (int64_t count : v)
        sig.log_volumes.push_back(std::log(static_cast<double>(count)));
    return sig;
}

double fractal_dimension(const FractalSignature& sig) {
    if (sig.log_volumes.size() < 2)
        fail(ErrorCode::InvalidArgument, "fractal_dimension: signature too short");

    const RadiusSet rs = radius_set(sig.r_max);
    const size_t n = sig.log_volumes.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t t = 0; t < n; ++t) {
        const double x = std::log(rs.radii[t]);
        const double y = sig.log_volumes[t];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return 3.0 - slope;
}

} // namespace texfract
