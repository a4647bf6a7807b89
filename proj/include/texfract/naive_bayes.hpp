#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "texfract/linalg.hpp"

namespace texfract {

/// Gaussian naive Bayes: class priors plus per-feature class-conditional
/// mean/variance, variances floored so log densities stay finite.
struct NaiveBayesModel {
    std::vector<std::string> class_names;
    std::vector<double> priors;
    Matrix means;     // classes x p
    Matrix variances; // classes x p

    int class_count() const { return static_cast<int>(class_names.size()); }
    int feature_count() const { return means.cols; }
};

struct Prediction {
    int label = 0;
    std::vector<double> log_posteriors;
};

struct Evaluation {
    double accuracy = 0.0;
    std::vector<std::vector<int>> confusion; // rows = true class, cols = predicted
};

NaiveBayesModel fit_nb(const Matrix& x, const std::vector<int>& y,
                       const std::vector<std::string>& class_names);

/// Argmax of log prior + sum of log Gaussian densities; ties resolve to the
/// earliest class in class_names order.
Prediction predict(const NaiveBayesModel& model, std::span<const double> features);

Evaluation evaluate(const NaiveBayesModel& model, const Matrix& x_test,
                    const std::vector<int>& y_test);

void save_nb(const NaiveBayesModel& model, std::ostream& out);
NaiveBayesModel load_nb(std::istream& in);

} // namespace texfract
