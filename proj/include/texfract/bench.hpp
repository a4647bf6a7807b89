#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "texfract/pipeline.hpp"

namespace texfract {

inline constexpr const char* kToolVersion = "0.1.0";

struct GridSpec {
    int scales = 0;
    int orientations = 0;
};

GridSpec parse_grid(const std::string& text); // "4x6"
std::string to_string(const GridSpec& grid);

struct BenchConfig {
    std::filesystem::path dataset_root;
    std::vector<DescriptorKind> kinds;
    std::vector<GridSpec> grids;
    double u_low = 0.05;
    double u_high = 0.4;
    double truncation = 3.0;
    SigmaVForm sigma_v_form = SigmaVForm::Printed;
    int r_max = 16;
    int n_components = 10;
    double ridge_scale = 1e-6;
    int folds = 10;
    uint64_t seed = 42;
    bool leaky_cda = false; // fit CDA stages on all folds (protocol comparison only)
    bool final_cda = true;
    bool timing = false;    // emit measured wall time into report.csv
    std::filesystem::path out_dir;

    void validate() const;
};

struct CellResult {
    DescriptorKind kind = DescriptorKind::Energy;
    GridSpec grid;
    std::vector<double> fold_accuracies; // fractions in [0,1]
    std::vector<double> fold_seconds;
    double mean_accuracy = 0.0;
    double seconds = 0.0;
    std::string error; // nonempty when the cell failed

    bool ok() const { return error.empty(); }
};

struct BenchmarkReport {
    BenchConfig config;
    std::vector<CellResult> cells; // kinds x grids, in request order
};

/// Fold index per sample: seeded shuffle within each class, dealt round-robin.
std::vector<int> stratified_folds(const std::vector<int>& labels, int n_classes,
                                  int folds, uint64_t seed);

/// Stratified k-fold accuracies for one (kind, grid) cell. The Gabor stacks and
/// fractal signatures are label-free and computed once; CDA stages and naive
/// Bayes are refitted per fold on the training rows only (unless leaky_cda).
std::vector<double> cross_validate(const LabeledDataset& dataset, DescriptorKind kind,
                                   const GridSpec& grid, const BenchConfig& cfg,
                                   std::vector<double>* fold_seconds = nullptr);

/// Run every (kind, grid) cell and write report.csv, summary.csv and
/// report.txt under cfg.out_dir.
BenchmarkReport run_benchmark(const BenchConfig& cfg);

void write_report_files(const BenchmarkReport& report);

} // namespace texfract
