#include "texfract/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "texfract/rng.hpp"

namespace texfract {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", fraction * 100.0);
    return buf;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

Matrix take_rows(const Matrix& m, const std::vector<int>& rows) {
    Matrix out(static_cast<int>(rows.size()), m.cols);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < m.cols; ++j)
            out.at(static_cast<int>(i), j) = m.at(rows[i], j);
    return out;
}

std::vector<int> take_labels(const std::vector<int>& labels, const std::vector<int>& rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (int r : rows)
        out.push_back(labels[r]);
    return out;
}

} // namespace

GridSpec parse_grid(const std::string& text) {
    const size_t sep = text.find_first_of("xX");
    if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size())
        fail(ErrorCode::InvalidArgument, "bad grid (expected MxN): " + text);
    GridSpec g;
    try {
        size_t used = 0;
        g.scales = std::stoi(text.substr(0, sep), &used);
        if (used != sep) throw std::invalid_argument(text);
        g.orientations = std::stoi(text.substr(sep + 1), &used);
        if (used != text.size() - sep - 1) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, "bad grid (expected MxN): " + text);
    }
    return g;
}

std::string to_string(const GridSpec& grid) {
    return std::to_string(grid.scales) + "x" + std::to_string(grid.orientations);
}

void BenchConfig::validate() const {
    if (kinds.empty())
        fail(ErrorCode::InvalidArgument, "bench config: no descriptor kinds requested");
    if (grids.empty())
        fail(ErrorCode::InvalidArgument, "bench config: no grids requested");
    for (const GridSpec& g : grids)
        if (g.scales < 2 || g.scales > 6 || g.orientations < 3 || g.orientations > 6)
            fail(ErrorCode::InvalidArgument,
                 "bench config: grid outside {2..6}x{3..6}: " + to_string(g));
    if (folds < 2)
        fail(ErrorCode::InvalidArgument, "bench config: folds must be >= 2");
    if (r_max < 1 || r_max > 64)
        fail(ErrorCode::InvalidArgument, "bench config: r_max must be in [1, 64]");
    if (n_components < 1)
        fail(ErrorCode::InvalidArgument, "bench config: n_components must be >= 1");
    if (!(u_low > 0.0 && u_low < u_high && u_high < 0.5))
        fail(ErrorCode::InvalidArgument, "bench config: require 0 < U_l < U_h < 0.5");
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int n_classes,
                                  int folds, uint64_t seed) {
    if (folds < 2)
        fail(ErrorCode::InvalidArgument, "stratified_folds: folds must be >= 2");

    std::vector<std::vector<int>> by_class(n_classes);
    for (size_t i = 0; i < labels.size(); ++i)
        by_class[labels[i]].push_back(static_cast<int>(i));

    std::mt19937_64 rng(seed);
    std::vector<int> fold_of(labels.size(), -1);
    for (int c = 0; c < n_classes; ++c) {
        auto& members = by_class[c];
        if (static_cast<int>(members.size()) < folds)
            fail(ErrorCode::InvalidArgument,
                 "stratified_folds: class " + std::to_string(c) +
                     " has fewer samples than folds");
        shuffle_deterministic(members, rng);
        for (size_t i = 0; i < members.size(); ++i)
            fold_of[members[i]] = static_cast<int>(i % folds);
    }
    return fold_of;
}

std::vector<double> cross_validate(const LabeledDataset& dataset, DescriptorKind kind,
                                   const GridSpec& grid, const BenchConfig& cfg,
                                   std::vector<double>* fold_seconds) {
    cfg.validate();
    const std::vector<int> labels = dataset.labels();
    const int n_classes = static_cast<int>(dataset.class_names.size());

    const auto counts = dataset.class_counts();
    for (int c = 0; c < n_classes; ++c)
        if (counts[c] < cfg.folds)
            fail(ErrorCode::InvalidArgument,
                 "cross_validate: class '" + dataset.class_names[c] +
                     "' has fewer samples than folds");

    BankConfig bank_cfg;
    bank_cfg.scales = grid.scales;
    bank_cfg.orientations = grid.orientations;
    bank_cfg.u_low = cfg.u_low;
    bank_cfg.u_high = cfg.u_high;
    bank_cfg.truncation = cfg.truncation;
    bank_cfg.sigma_v_form = cfg.sigma_v_form;

    CdaOptions cda_opts;
    cda_opts.n_components = cfg.n_components;
    cda_opts.ridge_scale = cfg.ridge_scale;

    const GaborBank bank(bank_cfg);

    // Label-free extraction happens once; folds only refit the supervised stages.
    ChannelSignatureTable table;
    Matrix raw;
    if (kind == DescriptorKind::EnhancedFractal)
        table = channel_signatures(dataset, bank, cfg.r_max);
    else
        raw = raw_descriptor_table(dataset, bank, kind, cfg.r_max, nullptr);

    // The leaky protocol fits both CDA stages on every fold, so those fits do
    // not vary per fold and hoist out of the loop.
    std::vector<CdaProjection> leaky_projections;
    CdaProjection leaky_final;
    if (cfg.leaky_cda) {
        Matrix all_feat;
        if (kind == DescriptorKind::EnhancedFractal) {
            leaky_projections = fit_proposed(table, cda_opts);
            all_feat = compose_features(leaky_projections, table);
        } else {
            all_feat = raw;
        }
        if (cfg.final_cda)
            leaky_final = fit_cda(all_feat, labels, cda_opts);
    }

    const std::vector<int> fold_of =
        stratified_folds(labels, n_classes, cfg.folds, cfg.seed);

    std::vector<double> accuracies;
    accuracies.reserve(cfg.folds);
    if (fold_seconds)
        fold_seconds->clear();

    for (int f = 0; f < cfg.folds; ++f) {
        const auto start = std::chrono::steady_clock::now();

        std::vector<int> train_rows, test_rows;
        for (size_t i = 0; i < fold_of.size(); ++i)
            (fold_of[i] == f ? test_rows : train_rows).push_back(static_cast<int>(i));

        const std::vector<int> train_y = take_labels(labels, train_rows);
        const std::vector<int> test_y = take_labels(labels, test_rows);

        Matrix train_feat, test_feat;
        if (kind == DescriptorKind::EnhancedFractal) {
            const auto projections = cfg.leaky_cda
                                         ? leaky_projections
                                         : fit_proposed(table.subset(train_rows), cda_opts);
            train_feat = compose_features(projections, table.subset(train_rows));
            test_feat = compose_features(projections, table.subset(test_rows));
        } else {
            train_feat = take_rows(raw, train_rows);
            test_feat = take_rows(raw, test_rows);
        }

        if (cfg.final_cda) {
            const CdaProjection final_proj =
                cfg.leaky_cda ? leaky_final : fit_cda(train_feat, train_y, cda_opts);
            train_feat = project(final_proj, train_feat);
            test_feat = project(final_proj, test_feat);
        }

        const NaiveBayesModel nb = fit_nb(train_feat, train_y, dataset.class_names);
        const Evaluation ev = evaluate(nb, test_feat, test_y);
        accuracies.push_back(ev.accuracy);
        if (fold_seconds)
            fold_seconds->push_back(seconds_since(start));
    }
    return accuracies;
}

BenchmarkReport run_benchmark(const BenchConfig& cfg) {
    cfg.validate();
    const LabeledDataset dataset = load_dataset(cfg.dataset_root);

    BenchmarkReport report;
    report.config = cfg;
    for (DescriptorKind kind : cfg.kinds) {
        for (const GridSpec& grid : cfg.grids) {
            CellResult cell;
            cell.kind = kind;
            cell.grid = grid;
            const auto start = std::chrono::steady_clock::now();
            try {
                cell.fold_accuracies =
                    cross_validate(dataset, kind, grid, cfg, &cell.fold_seconds);
                cell.mean_accuracy =
                    std::accumulate(cell.fold_accuracies.begin(),
                                    cell.fold_accuracies.end(), 0.0) /
                    static_cast<double>(cell.fold_accuracies.size());
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cell.seconds = seconds_since(start);
            report.cells.push_back(std::move(cell));
        }
    }

    write_report_files(report);
    return report;
}

void write_report_files(const BenchmarkReport& report) {
    const auto& cfg = report.config;
    std::filesystem::create_directories(cfg.out_dir);

    std::ofstream csv(cfg.out_dir / "report.csv");
    if (!csv)
        fail(ErrorCode::FileNotFound,
             "cannot create " + (cfg.out_dir / "report.csv").string());
    csv << "kind,grid,fold,accuracy,seconds\n";
    for (const CellResult& cell : report.cells) {
        if (!cell.ok()) continue;
        for (size_t f = 0; f < cell.fold_accuracies.size(); ++f)
            csv << to_string(cell.kind) << "," << to_string(cell.grid) << "," << f << ","
                << percent(cell.fold_accuracies[f]) << ","
                << (cfg.timing ? fixed3(cell.fold_seconds[f]) : std::string("0.000"))
                << "\n";
    }

    std::ofstream summary(cfg.out_dir / "summary.csv");
    summary << "kind,grid,mean_accuracy\n";
    for (const CellResult& cell : report.cells)
        summary << to_string(cell.kind) << "," << to_string(cell.grid) << ","
                << (cell.ok() ? percent(cell.mean_accuracy) : std::string("NA")) << "\n";

    std::ofstream txt(cfg.out_dir / "report.txt");
    txt << "texfract bench " << kToolVersion << "\n";
    txt << "dataset: " << cfg.dataset_root.string() << "\n";
    txt << "folds: " << cfg.folds << "  seed: " << cfg.seed << "  r_max: " << cfg.r_max
        << "  components: " << cfg.n_components << "\n";
    txt << "U_l: " << cfg.u_low << "  U_h: " << cfg.u_high
        << "  final_cda: " << (cfg.final_cda ? "on" : "off")
        << "  leaky_cda: " << (cfg.leaky_cda ? "on" : "off") << "\n\n";

    txt << std::left << std::setw(18) << "kind";
    for (const GridSpec& grid : cfg.grids)
        txt << std::right << std::setw(10) << to_string(grid);
    txt << "\n";
    for (DescriptorKind kind : cfg.kinds) {
        txt << std::left << std::setw(18) << to_string(kind);
        for (const GridSpec& grid : cfg.grids) {
            std::string value = "-";
            for (const CellResult& cell : report.cells)
                if (cell.kind == kind && cell.grid.scales == grid.scales &&
                    cell.grid.orientations == grid.orientations)
                    value = cell.ok() ? percent(cell.mean_accuracy) : std::string("ERR");
            txt << std::right << std::setw(10) << value;
        }
        txt << "\n";
    }
    txt << "\nwall time per cell (s):\n";
    for (const CellResult& cell : report.cells) {
        txt << "  " << to_string(cell.kind) << " " << to_string(cell.grid) << ": "
            << fixed3(cell.seconds);
        if (!cell.ok())
            txt << "  ERROR: " << cell.error;
        txt << "\n";
    }
}

} // namespace texfract
