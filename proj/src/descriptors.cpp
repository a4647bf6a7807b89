#include "texfract/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace texfract {

namespace {

std::string channel_tag(int m, int n) {
    return "m" + std::to_string(m) + "_n" + std::to_string(n);
}

std::shared_ptr<const FeatureSchema> make_schema(std::string descriptor,
                                                 std::vector<std::string> entries) {
    auto schema = std::make_shared<FeatureSchema>();
    schema->descriptor = std::move(descriptor);
    schema->entries = std::move(entries);
    return schema;
}

int requantize_level(int value, int from_levels, int to_levels) {
    return static_cast<int>(static_cast<long>(value) * to_levels / from_levels);
}

} // namespace

const char* to_string(FirstOrderStat which) {
    switch (which) {
        case FirstOrderStat::Energy: return "energy";
        case FirstOrderStat::Variance: return "variance";
        case FirstOrderStat::Percentile75: return "percentile75";
    }
    return "?";
}

DensityHistogram histogram(const GrayImage& img) {
    DensityHistogram h;
    h.p.assign(static_cast<size_t>(img.levels), 0.0);
    for (uint16_t v : img.pixels)
        h.p[v] += 1.0;
    const double inv = 1.0 / static_cast<double>(img.pixel_count());
    for (double& v : h.p)
        v *= inv;
    return h;
}

double first_order(const DensityHistogram& hist, FirstOrderStat which) {
    const size_t g = hist.p.size();
    switch (which) {
        case FirstOrderStat::Energy: {
            double e = 0.0;
            for (double p : hist.p) e += p * p;
            return e;
        }
        case FirstOrderStat::Variance: {
            double mean = 0.0;
            for (size_t i = 0; i < g; ++i) mean += static_cast<double>(i) * hist.p[i];
            double var = 0.0;
            for (size_t i = 0; i < g; ++i) {
                const double d = static_cast<double>(i) - mean;
                var += d * d * hist.p[i];
            }
            return var;
        }
        case FirstOrderStat::Percentile75: {
            std::vector<double> sorted = hist.p;
            std::sort(sorted.begin(), sorted.end());
            const size_t idx = static_cast<size_t>(std::ceil(0.75 * static_cast<double>(g - 1)));
            return sorted[idx];
        }
    }
    fail(ErrorCode::InvalidArgument, "first_order: unknown statistic");
}

Glcm glcm(const GrayImage& img, double distance, double angle_deg, int levels) {
    if (distance < 1.0)
        fail(ErrorCode::InvalidArgument, "glcm: distance must be >= 1");
    if (levels < 2)
        fail(ErrorCode::InvalidArgument, "glcm: levels must be >= 2");
    const bool known_angle = angle_deg == 0.0 || angle_deg == 45.0 ||
                             angle_deg == 90.0 || angle_deg == 135.0;
    if (!known_angle)
        fail(ErrorCode::InvalidArgument, "glcm: angle must be one of 0, 45, 90, 135");

    const double rad = angle_deg * std::numbers::pi / 180.0;
    const int dx = static_cast<int>(std::llround(distance * std::cos(rad)));
    const int dy = static_cast<int>(std::llround(distance * std::sin(rad)));
    if (std::abs(dx) >= img.width || std::abs(dy) >= img.height)
        fail(ErrorCode::InvalidArgument, "glcm: image smaller than the pixel offset");

    Glcm out;
    out.levels = levels;
    out.distance = distance;
    out.angle_deg = angle_deg;
    out.matrix.assign(static_cast<size_t>(levels) * levels, 0.0);

    long pairs = 0;
    for (int y = 0; y < img.height; ++y) {
        const int y2 = y + dy;
        if (y2 < 0 || y2 >= img.height) continue;
        for (int x = 0; x < img.width; ++x) {
            const int x2 = x + dx;
            if (x2 < 0 || x2 >= img.width) continue;
            const int i = requantize_level(img.at(x, y), img.levels, levels);
            const int j = requantize_level(img.at(x2, y2), img.levels, levels);
            out.matrix[static_cast<size_t>(i) * levels + j] += 1.0;
            out.matrix[static_cast<size_t>(j) * levels + i] += 1.0;
            pairs += 2;
        }
    }
    if (pairs == 0)
        fail(ErrorCode::InvalidArgument, "glcm: no valid pixel pairs");
    const double inv = 1.0 / static_cast<double>(pairs);
    for (double& v : out.matrix)
        v *= inv;
    return out;
}

GlcmFeatures glcm_features(const Glcm& m) {
    GlcmFeatures f;
    std::vector<double> px(m.levels, 0.0), py(m.levels, 0.0);
    double sum_ij = 0.0;
    for (int i = 0; i < m.levels; ++i) {
        for (int j = 0; j < m.levels; ++j) {
            const double p = m.at(i, j);
            if (p > 0.0)
                f.entropy -= p * std::log2(p);
            f.contrast += static_cast<double>(i - j) * (i - j) * p;
            sum_ij += static_cast<double>(i) * j * p;
            px[i] += p;
            py[j] += p;
        }
    }

    double mx = 0.0, my = 0.0;
    for (int i = 0; i < m.levels; ++i) {
        mx += i * px[i];
        my += i * py[i];
    }
    double vx = 0.0, vy = 0.0;
    for (int i = 0; i < m.levels; ++i) {
        vx += (i - mx) * (i - mx) * px[i];
        vy += (i - my) * (i - my) * py[i];
    }
    const double sxsy = std::sqrt(vx) * std::sqrt(vy);
    f.correlation = sxsy > 0.0 ? (sum_ij - mx * my) / sxsy : 0.0;
    return f;
}

FeatureVector covariance_features(const GaborStack& stack) {
    if (stack.channels.empty())
        fail(ErrorCode::InvalidArgument, "covariance_features: empty stack");
    const int width = stack.channels[0].width;
    const int height = stack.channels[0].height;
    for (const auto& ch : stack.channels)
        if (ch.width != width || ch.height != height)
            fail(ErrorCode::DimensionMismatch, "covariance_features: channel size mismatch");
    const long n = static_cast<long>(width) * height;
    if (n < 2)
        fail(ErrorCode::InvalidArgument, "covariance_features: need at least 2 pixels");

    const int k = static_cast<int>(stack.channels.size());
    const size_t plane = static_cast<size_t>(width + 1) * (height + 1);

    // Integral plane over one value stream; corner lookups give rectangle sums.
    auto integral = [&](auto&& value) {
        std::vector<double> acc(plane, 0.0);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                acc[static_cast<size_t>(y + 1) * (width + 1) + (x + 1)] =
                    value(x, y) + acc[static_cast<size_t>(y) * (width + 1) + (x + 1)] +
                    acc[static_cast<size_t>(y + 1) * (width + 1) + x] -
                    acc[static_cast<size_t>(y) * (width + 1) + x];
        return acc;
    };
    // Window sum over [x0,x1) x [y0,y1) by four-corner inclusion-exclusion.
    auto rect_sum = [&](const std::vector<double>& acc, int x0, int y0, int x1, int y1) {
        return acc[static_cast<size_t>(y1) * (width + 1) + x1] +
               acc[static_cast<size_t>(y0) * (width + 1) + x0] -
               acc[static_cast<size_t>(y0) * (width + 1) + x1] -
               acc[static_cast<size_t>(y1) * (width + 1) + x0];
    };

    std::vector<double> p_sums(k);
    for (int i = 0; i < k; ++i) {
        const auto acc = integral([&](int x, int y) { return stack.channels[i].at(x, y); });
        p_sums[i] = rect_sum(acc, 0, 0, width, height);
    }

    std::vector<double> values;
    std::vector<std::string> entries;
    values.reserve(static_cast<size_t>(k) * (k + 1) / 2);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            const auto acc = integral([&](int x, int y) {
                return stack.channels[i].at(x, y) * stack.channels[j].at(x, y);
            });
            const double q = rect_sum(acc, 0, 0, width, height);
            values.push_back((q - p_sums[i] * p_sums[j] / static_cast<double>(n)) /
                             static_cast<double>(n - 1));
            entries.push_back("cov_" + std::to_string(i) + "_" + std::to_string(j));
        }
    }

    return FeatureVector{std::move(values), make_schema("covariance", std::move(entries))};
}

GrayImage lbp_map(const GrayImage& img) {
    if (img.width < 3 || img.height < 3)
        fail(ErrorCode::InvalidArgument, "lbp_map: image must be at least 3x3");

    GrayImage map(img.width - 2, img.height - 2, 16);
    for (int y = 1; y < img.height - 1; ++y) {
        for (int x = 1; x < img.width - 1; ++x) {
            const uint16_t center = img.at(x, y);
            int code = 0;
            if (img.at(x, y - 1) >= center) code |= 1;      // top
            if (img.at(x + 1, y) >= center) code |= 2;      // right
            if (img.at(x, y + 1) >= center) code |= 4;      // bottom
            if (img.at(x - 1, y) >= center) code |= 8;      // left
            map.at(x - 1, y - 1) = static_cast<uint16_t>(code);
        }
    }
    return map;
}

FeatureVector lgbp_features(const GaborStack& stack) {
    std::vector<double> values;
    std::vector<std::string> entries;
    values.reserve(static_cast<size_t>(stack.channel_count()) * 16);

    for (int m = 0; m < stack.scales; ++m) {
        for (int n = 0; n < stack.orientations; ++n) {
            const GrayImage map = lbp_map(quantize(stack.channel(m, n), 256));
            std::vector<double> bins(16, 0.0);
            for (uint16_t v : map.pixels)
                bins[v] += 1.0;
            const double inv = 1.0 / static_cast<double>(map.pixel_count());
            for (int b = 0; b < 16; ++b) {
                values.push_back(bins[b] * inv);
                entries.push_back(channel_tag(m, n) + "_bin" + std::to_string(b));
            }
        }
    }
    return FeatureVector{std::move(values), make_schema("lgbp", std::move(entries))};
}

FeatureVector stat_features(const GaborStack& stack, FirstOrderStat which) {
    std::vector<double> values;
    std::vector<std::string> entries;
    values.reserve(static_cast<size_t>(stack.channel_count()));

    for (int m = 0; m < stack.scales; ++m) {
        for (int n = 0; n < stack.orientations; ++n) {
            const DensityHistogram h = histogram(quantize(stack.channel(m, n), 256));
            values.push_back(first_order(h, which));
            entries.push_back(channel_tag(m, n));
        }
    }
    return FeatureVector{std::move(values), make_schema(to_string(which), std::move(entries))};
}

FeatureVector glcm_features_stack(const GaborStack& stack) {
    static constexpr double kAngles[] = {0.0, 45.0, 90.0, 135.0};

    std::vector<double> values;
    std::vector<std::string> entries;
    values.reserve(static_cast<size_t>(stack.channel_count()) * 3);

    for (int m = 0; m < stack.scales; ++m) {
        for (int n = 0; n < stack.orientations; ++n) {
            const GrayImage q = quantize(stack.channel(m, n), 64);
            GlcmFeatures mean;
            for (double angle : kAngles) {
                const GlcmFeatures f = glcm_features(glcm(q, 1.0, angle, 64));
                mean.entropy += f.entropy;
                mean.contrast += f.contrast;
                mean.correlation += f.correlation;
            }
            const double scale = 1.0 / static_cast<double>(std::size(kAngles));
            values.push_back(mean.entropy * scale);
            values.push_back(mean.contrast * scale);
            values.push_back(mean.correlation * scale);
            entries.push_back(channel_tag(m, n) + "_entropy");
            entries.push_back(channel_tag(m, n) + "_contrast");
            entries.push_back(channel_tag(m, n) + "_correlation");
        }
    }
    return FeatureVector{std::move(values), make_schema("glcm", std::move(entries))};
}

} // namespace texfract
