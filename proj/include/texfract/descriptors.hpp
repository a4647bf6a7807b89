#pragma once

#include <memory>
#include <string>
#include <vector>

#include "texfract/gabor.hpp"
#include "texfract/image.hpp"

namespace texfract {

struct DensityHistogram {
    std::vector<double> p; // one probability per gray level, sums to 1
};

/// Symmetric gray-level co-occurrence matrix, normalized to sum 1.
struct Glcm {
    int levels = 0;
    double distance = 0.0;
    double angle_deg = 0.0;
    std::vector<double> matrix; // levels x levels, row-major

    double at(int i, int j) const {
        return matrix[static_cast<size_t>(i) * levels + j];
    }
};

struct GlcmFeatures {
    double entropy = 0.0;
    double contrast = 0.0;
    double correlation = 0.0;
};

struct FeatureSchema {
    std::string descriptor;
    std::vector<std::string> entries;
};

struct FeatureVector {
    std::vector<double> values;
    std::shared_ptr<const FeatureSchema> schema;

    size_t size() const { return values.size(); }
};

enum class FirstOrderStat { Energy, Variance, Percentile75 };

DensityHistogram histogram(const GrayImage& img);

/// Energy sum(p^2), variance about the histogram mean, or the percentile-75
/// entry of the ascending-sorted density vector.
double first_order(const DensityHistogram& hist, FirstOrderStat which);

/// Co-occurrence at offset (round(d cos theta), round(d sin theta)), accumulated
/// symmetrically; pairs leaving the image are skipped. The image is requantized
/// to `levels` gray values first.
Glcm glcm(const GrayImage& img, double distance, double angle_deg, int levels);

GlcmFeatures glcm_features(const Glcm& m);

/// K(K+1)/2 upper-triangle entries of the K x K channel covariance (K = M*N),
/// computed from raw magnitudes through integral-image tensors over the
/// full-image window.
FeatureVector covariance_features(const GaborStack& stack);

/// 4-neighbour LBP over interior pixels; neighbours (top,right,bottom,left)
/// contribute bits 0..3 with S=1 when neighbour >= center. Output is
/// (W-2) x (H-2) with 16 levels.
GrayImage lbp_map(const GrayImage& img);

/// Per channel: quantize to 256 levels, LBP-map, 16-bin normalized histogram;
/// concatenated in (m,n) order.
FeatureVector lgbp_features(const GaborStack& stack);

/// One first-order statistic per channel over its 256-level histogram.
FeatureVector stat_features(const GaborStack& stack, FirstOrderStat which);

/// Per channel: 64-level GLCM at d=1, entropy/contrast/correlation averaged
/// over angles {0,45,90,135}.
FeatureVector glcm_features_stack(const GaborStack& stack);

const char* to_string(FirstOrderStat which);

} // namespace texfract
