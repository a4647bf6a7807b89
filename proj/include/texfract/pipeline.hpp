#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "texfract/cda.hpp"
#include "texfract/dataset.hpp"
#include "texfract/descriptors.hpp"
#include "texfract/gabor.hpp"
#include "texfract/naive_bayes.hpp"
#include "texfract/vfd.hpp"

namespace texfract {

enum class DescriptorKind {
    Energy,
    Variance,
    Percentile75,
    Glcm,
    Covariance,
    Lgbp,
    EnhancedFractal,
};

DescriptorKind parse_kind(const std::string& name);
const char* to_string(DescriptorKind kind);
std::vector<DescriptorKind> all_kinds();

/// Per-channel fractal signature matrices for a whole dataset; rows are
/// samples in dataset order for every channel.
struct ChannelSignatureTable {
    int scales = 0;
    int orientations = 0;
    int r_max = 0;
    std::vector<Matrix> channels; // one samples x |E(r_max)| matrix per (m,n)
    std::vector<int> labels;

    int channel_count() const { return scales * orientations; }
    int sample_count() const { return channels.empty() ? 0 : channels[0].rows; }
    ChannelSignatureTable subset(const std::vector<int>& rows) const;
};

struct PipelineOptions {
    BankConfig bank;
    int r_max = 16;
    CdaOptions cda;         // shared by the per-channel and dataset-level stages
    bool final_cda = true;  // dataset-level decorrelation before naive Bayes
};

/// Everything needed to score a new image.
struct PipelineModel {
    DescriptorKind kind = DescriptorKind::EnhancedFractal;
    BankConfig bank;
    int r_max = 16;
    CdaOptions cda;
    std::vector<CdaProjection> channel_projections; // M*N entries for enhanced_fractal
    bool has_final = false;
    CdaProjection final_projection;
    NaiveBayesModel nb;
};

ChannelSignatureTable channel_signatures(const LabeledDataset& dataset,
                                         const GaborBank& bank, int r_max);

/// One CDA per channel, fitted on that channel's signatures. The table must
/// come from the training split only.
std::vector<CdaProjection> fit_proposed(const ChannelSignatureTable& table,
                                        const CdaOptions& opts);

/// Concatenate the projected per-channel signatures in (m,n) order.
Matrix compose_features(const std::vector<CdaProjection>& projections,
                        const ChannelSignatureTable& table);

/// Raw (pre final-CDA) descriptor values for one image. EnhancedFractal needs
/// the fitted per-channel projections.
std::vector<double> raw_descriptor(DescriptorKind kind, const GaborStack& stack,
                                   int r_max,
                                   const std::vector<CdaProjection>* channel_projections);

/// Raw descriptor rows for every sample, in dataset order.
Matrix raw_descriptor_table(const LabeledDataset& dataset, const GaborBank& bank,
                            DescriptorKind kind, int r_max,
                            const std::vector<CdaProjection>* channel_projections);

/// Uniform dispatch over the descriptor families, with provenance schema.
FeatureVector extract(DescriptorKind kind, const GrayImage& img, const PipelineModel& model);

PipelineModel train_pipeline(const LabeledDataset& dataset, DescriptorKind kind,
                             const PipelineOptions& opts);

Prediction score(const PipelineModel& model, const GrayImage& img);
Evaluation evaluate_pipeline(const PipelineModel& model, const LabeledDataset& dataset);

void save_model(const PipelineModel& model, const std::filesystem::path& dir);
PipelineModel load_model(const std::filesystem::path& dir);

} // namespace texfract
