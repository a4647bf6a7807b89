#include "texfract/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "texfract/parallel.hpp"
#include "texfract/text_io.hpp"

namespace texfract {

namespace fs = std::filesystem;

DescriptorKind parse_kind(const std::string& name) {
    static const std::map<std::string, DescriptorKind> table = {
        {"energy", DescriptorKind::Energy},
        {"variance", DescriptorKind::Variance},
        {"percentile75", DescriptorKind::Percentile75},
        {"glcm", DescriptorKind::Glcm},
        {"covariance", DescriptorKind::Covariance},
        {"lgbp", DescriptorKind::Lgbp},
        {"enhanced_fractal", DescriptorKind::EnhancedFractal},
    };
    const auto it = table.find(name);
    if (it == table.end())
        fail(ErrorCode::InvalidArgument, "unknown descriptor kind: " + name);
    return it->second;
}

const char* to_string(DescriptorKind kind) {
    switch (kind) {
        case DescriptorKind::Energy: return "energy";
        case DescriptorKind::Variance: return "variance";
        case DescriptorKind::Percentile75: return "percentile75";
        case DescriptorKind::Glcm: return "glcm";
        case DescriptorKind::Covariance: return "covariance";
        case DescriptorKind::Lgbp: return "lgbp";
        case DescriptorKind::EnhancedFractal: return "enhanced_fractal";
    }
    return "?";
}

std::vector<DescriptorKind> all_kinds() {
    return {DescriptorKind::Energy,     DescriptorKind::Variance,
            DescriptorKind::Percentile75, DescriptorKind::Glcm,
            DescriptorKind::Covariance, DescriptorKind::Lgbp,
            DescriptorKind::EnhancedFractal};
}

ChannelSignatureTable ChannelSignatureTable::subset(const std::vector<int>& rows) const {
    ChannelSignatureTable out;
    out.scales = scales;
    out.orientations = orientations;
    out.r_max = r_max;
    out.labels.reserve(rows.size());
    for (int r : rows)
        out.labels.push_back(labels[r]);
    out.channels.reserve(channels.size());
    for (const Matrix& ch : channels) {
        Matrix m(static_cast<int>(rows.size()), ch.cols);
        for (size_t i = 0; i < rows.size(); ++i)
            for (int j = 0; j < ch.cols; ++j)
                m.at(static_cast<int>(i), j) = ch.at(rows[i], j);
        out.channels.push_back(std::move(m));
    }
    return out;
}

ChannelSignatureTable channel_signatures(const LabeledDataset& dataset,
                                         const GaborBank& bank, int r_max) {
    if (dataset.samples.empty())
        fail(ErrorCode::InvalidArgument, "channel_signatures: empty dataset");

    const int n_channels = bank.config().scales * bank.config().orientations;
    const size_t sig_len = radius_set(r_max).size();
    const int n = static_cast<int>(dataset.samples.size());

    ChannelSignatureTable table;
    table.scales = bank.config().scales;
    table.orientations = bank.config().orientations;
    table.r_max = r_max;
    table.labels = dataset.labels();
    table.channels.assign(n_channels, Matrix(n, static_cast<int>(sig_len)));

    parallel_for(dataset.samples.size(), [&](size_t i) {
        const GaborStack stack = bank.stack(dataset.samples[i].image);
        for (int c = 0; c < n_channels; ++c) {
            const FractalSignature sig =
                fractal_signature(quantize(stack.channels[c], 256), r_max);
            for (size_t j = 0; j < sig.log_volumes.size(); ++j)
                table.channels[c].at(static_cast<int>(i), static_cast<int>(j)) =
                    sig.log_volumes[j];
        }
    });
    return table;
}

std::vector<CdaProjection> fit_proposed(const ChannelSignatureTable& table,
                                        const CdaOptions& opts) {
    std::vector<CdaProjection> projections;
    projections.reserve(table.channels.size());
    for (const Matrix& ch : table.channels)
        projections.push_back(fit_cda(ch, table.labels, opts));
    return projections;
}

Matrix compose_features(const std::vector<CdaProjection>& projections,
                        const ChannelSignatureTable& table) {
    if (projections.size() != table.channels.size())
        fail(ErrorCode::DimensionMismatch, "compose_features: projection count mismatch");

    int total = 0;
    for (const auto& proj : projections)
        total += proj.component_count();

    Matrix out(table.sample_count(), total);
    int offset = 0;
    for (size_t c = 0; c < projections.size(); ++c) {
        const Matrix z = project(projections[c], table.channels[c]);
        for (int i = 0; i < z.rows; ++i)
            for (int j = 0; j < z.cols; ++j)
                out.at(i, offset + j) = z.at(i, j);
        offset += z.cols;
    }
    return out;
}

std::vector<double> raw_descriptor(DescriptorKind kind, const GaborStack& stack,
                                   int r_max,
                                   const std::vector<CdaProjection>* channel_projections) {
    switch (kind) {
        case DescriptorKind::Energy:
            return stat_features(stack, FirstOrderStat::Energy).values;
        case DescriptorKind::Variance:
            return stat_features(stack, FirstOrderStat::Variance).values;
        case DescriptorKind::Percentile75:
            return stat_features(stack, FirstOrderStat::Percentile75).values;
        case DescriptorKind::Glcm:
            return glcm_features_stack(stack).values;
        case DescriptorKind::Covariance:
            return covariance_features(stack).values;
        case DescriptorKind::Lgbp:
            return lgbp_features(stack).values;
        case DescriptorKind::EnhancedFractal: {
            if (!channel_projections ||
                channel_projections->size() != static_cast<size_t>(stack.channel_count()))
                fail(ErrorCode::InvalidArgument,
                     "enhanced_fractal requires fitted per-channel projections");
            std::vector<double> values;
            for (int c = 0; c < stack.channel_count(); ++c) {
                const FractalSignature sig =
                    fractal_signature(quantize(stack.channels[c], 256), r_max);
                Matrix row(1, static_cast<int>(sig.log_volumes.size()));
                for (size_t j = 0; j < sig.log_volumes.size(); ++j)
                    row.at(0, static_cast<int>(j)) = sig.log_volumes[j];
                const Matrix z = project((*channel_projections)[c], row);
                values.insert(values.end(), z.data.begin(), z.data.end());
            }
            return values;
        }
    }
    fail(ErrorCode::InvalidArgument, "raw_descriptor: unknown kind");
}

Matrix raw_descriptor_table(const LabeledDataset& dataset, const GaborBank& bank,
                            DescriptorKind kind, int r_max,
                            const std::vector<CdaProjection>* channel_projections) {
    if (dataset.samples.empty())
        fail(ErrorCode::InvalidArgument, "raw_descriptor_table: empty dataset");

    std::vector<std::vector<double>> rows(dataset.samples.size());
    parallel_for(dataset.samples.size(), [&](size_t i) {
        const GaborStack stack = bank.stack(dataset.samples[i].image);
        rows[i] = raw_descriptor(kind, stack, r_max, channel_projections);
    });

    Matrix out(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            fail(ErrorCode::DimensionMismatch, "raw_descriptor_table: ragged rows");
        for (size_t j = 0; j < rows[i].size(); ++j)
            out.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return out;
}

FeatureVector extract(DescriptorKind kind, const GrayImage& img, const PipelineModel& model) {
    const GaborBank bank(model.bank);
    const GaborStack stack = bank.stack(img);

    switch (kind) {
        case DescriptorKind::Energy:
            return stat_features(stack, FirstOrderStat::Energy);
        case DescriptorKind::Variance:
            return stat_features(stack, FirstOrderStat::Variance);
        case DescriptorKind::Percentile75:
            return stat_features(stack, FirstOrderStat::Percentile75);
        case DescriptorKind::Glcm:
            return glcm_features_stack(stack);
        case DescriptorKind::Covariance:
            return covariance_features(stack);
        case DescriptorKind::Lgbp:
            return lgbp_features(stack);
        case DescriptorKind::EnhancedFractal: {
            if (model.channel_projections.empty())
                fail(ErrorCode::InvalidArgument,
                     "enhanced_fractal requires a fitted model");
            FeatureVector fv;
            fv.values = raw_descriptor(kind, stack, model.r_max, &model.channel_projections);
            auto schema = std::make_shared<FeatureSchema>();
            schema->descriptor = "enhanced_fractal";
            for (int m = 0; m < stack.scales; ++m)
                for (int n = 0; n < stack.orientations; ++n) {
                    const int k =
                        model.channel_projections[static_cast<size_t>(m) * stack.orientations + n]
                            .component_count();
                    for (int c = 0; c < k; ++c)
                        schema->entries.push_back("m" + std::to_string(m) + "_n" +
                                                  std::to_string(n) + "_c" + std::to_string(c));
                }
            fv.schema = std::move(schema);
            return fv;
        }
    }
    fail(ErrorCode::InvalidArgument, "extract: unknown kind");
}

PipelineModel train_pipeline(const LabeledDataset& dataset, DescriptorKind kind,
                             const PipelineOptions& opts) {
    if (dataset.class_names.size() < 2)
        fail(ErrorCode::InvalidArgument, "train_pipeline: need at least 2 classes");

    PipelineModel model;
    model.kind = kind;
    model.bank = opts.bank;
    model.r_max = opts.r_max;
    model.cda = opts.cda;

    const GaborBank bank(opts.bank);
    const std::vector<int> labels = dataset.labels();

    Matrix features;
    if (kind == DescriptorKind::EnhancedFractal) {
        const ChannelSignatureTable table = channel_signatures(dataset, bank, opts.r_max);
        model.channel_projections = fit_proposed(table, opts.cda);
        features = compose_features(model.channel_projections, table);
    } else {
        features = raw_descriptor_table(dataset, bank, kind, opts.r_max, nullptr);
    }

    if (opts.final_cda) {
        model.has_final = true;
        model.final_projection = fit_cda(features, labels, opts.cda);
        features = project(model.final_projection, features);
    }

    model.nb = fit_nb(features, labels, dataset.class_names);
    return model;
}

Prediction score(const PipelineModel& model, const GrayImage& img) {
    const GaborBank bank(model.bank);
    const GaborStack stack = bank.stack(img);
    std::vector<double> values =
        raw_descriptor(model.kind, stack, model.r_max,
                       model.kind == DescriptorKind::EnhancedFractal
                           ? &model.channel_projections
                           : nullptr);
    if (model.has_final) {
        Matrix row(1, static_cast<int>(values.size()));
        row.data = values;
        values = project(model.final_projection, row).data;
    }
    return predict(model.nb, values);
}

Evaluation evaluate_pipeline(const PipelineModel& model, const LabeledDataset& dataset) {
    const GaborBank bank(model.bank);
    Matrix features = raw_descriptor_table(
        dataset, bank, model.kind, model.r_max,
        model.kind == DescriptorKind::EnhancedFractal ? &model.channel_projections : nullptr);
    if (model.has_final)
        features = project(model.final_projection, features);
    return evaluate(model.nb, features, dataset.labels());
}

namespace {

std::string form_name(SigmaVForm form) {
    return form == SigmaVForm::Printed ? "printed" : "classic";
}

SigmaVForm parse_form(const std::string& name) {
    if (name == "printed") return SigmaVForm::Printed;
    if (name == "classic") return SigmaVForm::Classic;
    fail(ErrorCode::CorruptData, "model.meta: bad sigma_v_form: " + name);
}

} // namespace

void save_model(const PipelineModel& model, const fs::path& dir) {
    fs::create_directories(dir);

    std::ofstream meta(dir / "model.meta");
    if (!meta)
        fail(ErrorCode::FileNotFound, "cannot create " + (dir / "model.meta").string());
    meta << "texfract_model,1\n";
    meta << "kind," << to_string(model.kind) << "\n";
    meta << "scales," << model.bank.scales << "\n";
    meta << "orientations," << model.bank.orientations << "\n";
    meta << "u_low," << fmt_double(model.bank.u_low) << "\n";
    meta << "u_high," << fmt_double(model.bank.u_high) << "\n";
    meta << "truncation," << fmt_double(model.bank.truncation) << "\n";
    meta << "sigma_v_form," << form_name(model.bank.sigma_v_form) << "\n";
    meta << "r_max," << model.r_max << "\n";
    meta << "n_components," << model.cda.n_components << "\n";
    meta << "ridge_scale," << fmt_double(model.cda.ridge_scale) << "\n";
    meta << "cap_components," << (model.cda.cap_components ? 1 : 0) << "\n";
    meta << "final_cda," << (model.has_final ? 1 : 0) << "\n";

    for (size_t c = 0; c < model.channel_projections.size(); ++c) {
        const int m = static_cast<int>(c) / model.bank.orientations;
        const int n = static_cast<int>(c) % model.bank.orientations;
        std::ofstream out(dir / ("channel_" + std::to_string(m) + "_" +
                                 std::to_string(n) + ".csv"));
        save_projection(model.channel_projections[c], out);
    }
    if (model.has_final) {
        std::ofstream out(dir / "final.csv");
        save_projection(model.final_projection, out);
    }
    std::ofstream nb_out(dir / "nb.csv");
    save_nb(model.nb, nb_out);
}

PipelineModel load_model(const fs::path& dir) {
    std::ifstream meta(dir / "model.meta");
    if (!meta)
        fail(ErrorCode::FileNotFound, "model not found: " + dir.string());

    std::map<std::string, std::string> kv;
    std::string line;
    bool first = true;
    while (std::getline(meta, line)) {
        const auto parts = split_csv(line);
        if (first) {
            if (parts.size() != 2 || parts[0] != "texfract_model" || parts[1] != "1")
                fail(ErrorCode::UnsupportedFormat, "model.meta: bad header");
            first = false;
            continue;
        }
        if (parts.size() == 2)
            kv[parts[0]] = parts[1];
    }
    auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            fail(ErrorCode::CorruptData, "model.meta: missing key " + key);
        return it->second;
    };

    PipelineModel model;
    model.kind = parse_kind(need("kind"));
    model.bank.scales = std::stoi(need("scales"));
    model.bank.orientations = std::stoi(need("orientations"));
    model.bank.u_low = std::stod(need("u_low"));
    model.bank.u_high = std::stod(need("u_high"));
    model.bank.truncation = std::stod(need("truncation"));
    model.bank.sigma_v_form = parse_form(need("sigma_v_form"));
    model.r_max = std::stoi(need("r_max"));
    model.cda.n_components = std::stoi(need("n_components"));
    model.cda.ridge_scale = std::stod(need("ridge_scale"));
    model.cda.cap_components = need("cap_components") == "1";
    model.has_final = need("final_cda") == "1";

    if (model.kind == DescriptorKind::EnhancedFractal) {
        const int count = model.bank.scales * model.bank.orientations;
        for (int c = 0; c < count; ++c) {
            const int m = c / model.bank.orientations;
            const int n = c % model.bank.orientations;
            const fs::path file =
                dir / ("channel_" + std::to_string(m) + "_" + std::to_string(n) + ".csv");
            std::ifstream in(file);
            if (!in)
                fail(ErrorCode::FileNotFound, "model missing " + file.string());
            model.channel_projections.push_back(load_projection(in));
        }
    }
    if (model.has_final) {
        std::ifstream in(dir / "final.csv");
        if (!in)
            fail(ErrorCode::FileNotFound, "model missing final.csv");
        model.final_projection = load_projection(in);
    }
    std::ifstream nb_in(dir / "nb.csv");
    if (!nb_in)
        fail(ErrorCode::FileNotFound, "model missing nb.csv");
    model.nb = load_nb(nb_in);
    return model;
}

} // namespace texfract
