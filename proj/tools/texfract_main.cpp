#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "texfract/bench.hpp"
#include "texfract/image_io.hpp"
#include "texfract/parallel.hpp"
#include "texfract/pipeline.hpp"
#include "texfract/text_io.hpp"

namespace {

using namespace texfract;

struct FiltersArgs {
    std::string grid = "4x6";
    double u_low = 0.05, u_high = 0.4, truncation = 3.0;
    std::string sigma_v_form = "printed";
    std::string out_dir = "filters_out";
};

struct VfdArgs {
    std::string input;
    int r_max = 16;
    std::string output; // empty -> stdout
};

struct ExtractArgs {
    std::string data_root;
    std::string kind = "energy";
    std::string grid = "4x6";
    double u_low = 0.05, u_high = 0.4, truncation = 3.0;
    std::string sigma_v_form = "printed";
    int r_max = 16;
    std::string model_dir;
    std::string output = "features.csv";
};

struct TrainArgs {
    std::string data_root;
    std::string kind = "enhanced_fractal";
    std::string grid = "4x6";
    double u_low = 0.05, u_high = 0.4, truncation = 3.0;
    std::string sigma_v_form = "printed";
    int r_max = 16;
    int components = 10;
    double ridge = 1e-6;
    bool no_final_cda = false;
    std::string out_dir = "model";
};

struct EvalArgs {
    std::string data_root;
    std::string model_dir;
};

struct BenchArgs {
    std::string data_root;
    std::vector<std::string> kinds = {"energy",     "variance", "percentile75", "lgbp",
                                      "covariance", "glcm",     "enhanced_fractal"};
    std::vector<std::string> grids = {"2x6", "3x4", "3x5", "4x4", "4x6", "5x5", "6x3", "6x6"};
    double u_low = 0.05, u_high = 0.4, truncation = 3.0;
    std::string sigma_v_form = "printed";
    int r_max = 16;
    int components = 10;
    double ridge = 1e-6;
    int folds = 10;
    uint64_t seed = 42;
    bool leaky_cda = false;
    bool no_final_cda = false;
    bool timing = false;
    std::string out_dir = "bench_out";
};

struct WindowsArgs {
    std::string in_dir;
    std::string out_dir;
    int count = 10;
    int size = 200;
    int width = 0, height = 0; // override size when nonzero
    uint64_t seed = 7;
};

SigmaVForm parse_sigma_v_form(const std::string& name) {
    if (name == "printed") return SigmaVForm::Printed;
    if (name == "classic") return SigmaVForm::Classic;
    fail(ErrorCode::InvalidArgument, "sigma-v-form must be 'printed' or 'classic'");
}

BankConfig make_bank_config(const std::string& grid, double u_low, double u_high,
                            double truncation, const std::string& form) {
    const GridSpec g = parse_grid(grid);
    BankConfig cfg;
    cfg.scales = g.scales;
    cfg.orientations = g.orientations;
    cfg.u_low = u_low;
    cfg.u_high = u_high;
    cfg.truncation = truncation;
    cfg.sigma_v_form = parse_sigma_v_form(form);
    cfg.validate();
    return cfg;
}

int run_filters(const FiltersArgs& args) {
    const BankConfig cfg = make_bank_config(args.grid, args.u_low, args.u_high,
                                            args.truncation, args.sigma_v_form);
    const BankParams params = derive_params(cfg);
    const auto kernels = build_bank(cfg);

    std::filesystem::create_directories(args.out_dir);
    std::ofstream manifest(std::filesystem::path(args.out_dir) / "manifest.txt");
    manifest << "texfract filter bank " << kToolVersion << "\n";
    manifest << "scales," << cfg.scales << "\n";
    manifest << "orientations," << cfg.orientations << "\n";
    manifest << "u_low," << fmt_double(cfg.u_low) << "\n";
    manifest << "u_high," << fmt_double(cfg.u_high) << "\n";
    manifest << "truncation," << fmt_double(cfg.truncation) << "\n";
    manifest << "sigma_v_form," << args.sigma_v_form << "\n";
    manifest << "a," << fmt_double(params.a) << "\n";
    manifest << "sigma_u," << fmt_double(params.sigma_u) << "\n";
    manifest << "sigma_v," << fmt_double(params.sigma_v) << "\n";
    manifest << "sigma_x," << fmt_double(params.sigma_x) << "\n";
    manifest << "sigma_y," << fmt_double(params.sigma_y) << "\n";
    manifest << "w," << fmt_double(params.w) << "\n";
    manifest << "kernels,m,n,theta,side\n";

    for (const GaborKernel& k : kernels) {
        manifest << "kernel," << k.scale << "," << k.orientation << ","
                 << fmt_double(k.theta) << "," << k.side << "\n";
        RealImage mag(k.side, k.side);
        for (int y = 0; y < k.side; ++y)
            for (int x = 0; x < k.side; ++x)
                mag.at(x, y) = std::abs(k.taps[static_cast<size_t>(y) * k.side + x]);
        save_pgm(quantize(mag, 256),
                 std::filesystem::path(args.out_dir) /
                     ("kernel_" + std::to_string(k.scale) + "_" +
                      std::to_string(k.orientation) + ".pgm"));
    }
    std::cout << "wrote " << kernels.size() << " kernel previews to " << args.out_dir << "\n";
    return 0;
}

int run_vfd(const VfdArgs& args) {
    const GrayImage img = load_image(args.input);
    const RadiusSet rs = radius_set(args.r_max);
    const DistanceGrid grid = edt3_squared(img, args.r_max);
    const auto counts = volumes(grid, rs);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!args.output.empty()) {
        file.open(args.output);
        if (!file)
            fail(ErrorCode::FileNotFound, "cannot create " + args.output);
        out = &file;
    }
    *out << "r,sq_r,V,lnV\n";
    for (size_t t = 0; t < rs.size(); ++t)
        *out << fmt_double(rs.radii[t]) << "," << rs.squared[t] << "," << counts[t] << ","
             << fmt_double(std::log(static_cast<double>(counts[t]))) << "\n";
    return 0;
}

int run_extract(const ExtractArgs& args) {
    const DescriptorKind kind = parse_kind(args.kind);
    const LabeledDataset dataset = load_dataset(args.data_root);

    PipelineModel model;
    if (kind == DescriptorKind::EnhancedFractal) {
        if (args.model_dir.empty())
            fail(ErrorCode::InvalidArgument,
                 "enhanced_fractal extraction needs --model (train one first)");
        model = load_model(args.model_dir);
    } else {
        model.kind = kind;
        model.bank = make_bank_config(args.grid, args.u_low, args.u_high, args.truncation,
                                      args.sigma_v_form);
        model.r_max = args.r_max;
    }

    std::vector<FeatureVector> rows(dataset.size());
    parallel_for(dataset.size(), [&](size_t i) {
        rows[i] = extract(kind, dataset.samples[i].image, model);
    });

    std::ofstream out(args.output);
    if (!out)
        fail(ErrorCode::FileNotFound, "cannot create " + args.output);
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& sample = dataset.samples[i];
        out << (sample.id.empty() ? std::to_string(i) : sample.id) << ","
            << dataset.class_names[sample.label] << "," << rows[i].schema->descriptor;
        for (double v : rows[i].values)
            out << "," << fmt_double(v);
        out << "\n";
    }
    std::cout << "wrote " << rows.size() << " feature rows to " << args.output << "\n";
    return 0;
}

int run_train(const TrainArgs& args) {
    const LabeledDataset dataset = load_dataset(args.data_root);

    PipelineOptions opts;
    opts.bank = make_bank_config(args.grid, args.u_low, args.u_high, args.truncation,
                                 args.sigma_v_form);
    opts.r_max = args.r_max;
    opts.cda.n_components = args.components;
    opts.cda.ridge_scale = args.ridge;
    opts.final_cda = !args.no_final_cda;

    const PipelineModel model = train_pipeline(dataset, parse_kind(args.kind), opts);
    save_model(model, args.out_dir);
    std::cout << "trained " << args.kind << " model on " << dataset.size()
              << " samples; saved to " << args.out_dir << "\n";
    if (model.has_final) {
        double total = 0.0;
        for (double v : model.final_projection.eigenvalues)
            total += v;
        std::cout << "final projection eigenvalue fractions (cumulative):";
        double running = 0.0;
        for (double v : model.final_projection.eigenvalues) {
            running += v;
            std::cout << " " << std::fixed << std::setprecision(4)
                      << (total > 0.0 ? running / total : 0.0);
        }
        std::cout << "\n";
    }
    return 0;
}

int run_eval(const EvalArgs& args) {
    const PipelineModel model = load_model(args.model_dir);
    const LabeledDataset dataset = load_dataset(args.data_root);
    if (dataset.class_names != model.nb.class_names)
        fail(ErrorCode::InvalidArgument,
             "dataset classes do not match the model's training classes");

    const Evaluation ev = evaluate_pipeline(model, dataset);
    std::cout << "accuracy: " << ev.accuracy * 100.0 << "%\n";
    std::cout << "confusion (rows = true class):\n";
    for (size_t r = 0; r < ev.confusion.size(); ++r) {
        std::cout << "  " << model.nb.class_names[r] << ":";
        for (int v : ev.confusion[r])
            std::cout << " " << v;
        std::cout << "\n";
    }
    return 0;
}

int run_bench(const BenchArgs& args) {
    BenchConfig cfg;
    cfg.dataset_root = args.data_root;
    for (const auto& k : args.kinds)
        cfg.kinds.push_back(parse_kind(k));
    for (const auto& g : args.grids)
        cfg.grids.push_back(parse_grid(g));
    cfg.u_low = args.u_low;
    cfg.u_high = args.u_high;
    cfg.truncation = args.truncation;
    cfg.sigma_v_form = parse_sigma_v_form(args.sigma_v_form);
    cfg.r_max = args.r_max;
    cfg.n_components = args.components;
    cfg.ridge_scale = args.ridge;
    cfg.folds = args.folds;
    cfg.seed = args.seed;
    cfg.leaky_cda = args.leaky_cda;
    cfg.final_cda = !args.no_final_cda;
    cfg.timing = args.timing;
    cfg.out_dir = args.out_dir;

    const BenchmarkReport report = run_benchmark(cfg);
    int failures = 0;
    for (const CellResult& cell : report.cells)
        if (!cell.ok()) ++failures;
    std::cout << "bench finished: " << report.cells.size() << " cells, " << failures
              << " failed; reports in " << args.out_dir << "\n";
    return failures == 0 ? 0 : 1;
}

int run_windows(const WindowsArgs& args) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(args.in_dir))
        fail(ErrorCode::FileNotFound, "input directory not found: " + args.in_dir);

    std::vector<fs::path> sources;
    for (const auto& entry : fs::directory_iterator(args.in_dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        for (auto& ch : ext) ch = static_cast<char>(std::tolower(ch));
        if (ext == ".png" || ext == ".pgm")
            sources.push_back(entry.path());
    }
    std::sort(sources.begin(), sources.end());
    if (sources.empty())
        fail(ErrorCode::InvalidArgument, "no images found in " + args.in_dir);

    const int win_w = args.width > 0 ? args.width : args.size;
    const int win_h = args.height > 0 ? args.height : args.size;

    for (size_t i = 0; i < sources.size(); ++i) {
        const GrayImage img = load_image(sources[i]);
        // Distinct stream per source so adding images never reshuffles others.
        const auto windows =
            extract_windows(img, args.count, win_w, win_h, args.seed + i);
        const std::string stem = sources[i].stem().string();
        const fs::path class_dir = fs::path(args.out_dir) / stem;
        fs::create_directories(class_dir);
        for (size_t w = 0; w < windows.size(); ++w) {
            char name[64];
            std::snprintf(name, sizeof(name), "%s_w%02zu.pgm", stem.c_str(), w);
            save_pgm(windows[w], class_dir / name);
        }
    }
    std::cout << "wrote " << args.count << " windows for each of " << sources.size()
              << " textures to " << args.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"texture descriptor toolkit: Gabor banks, fractal signatures, benchmarks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file (see docs/bench-config.md)");

    FiltersArgs filters_args;
    auto* filters = app.add_subcommand("filters", "dump bank parameters and kernel previews");
    filters->add_option("--grid", filters_args.grid, "scales x orientations, e.g. 4x6");
    filters->add_option("--ul", filters_args.u_low, "low center frequency");
    filters->add_option("--uh", filters_args.u_high, "high center frequency");
    filters->add_option("--trunc", filters_args.truncation, "support half-width in sigmas");
    filters->add_option("--sigma-v-form", filters_args.sigma_v_form, "printed|classic");
    filters->add_option("--out", filters_args.out_dir, "output directory");

    VfdArgs vfd_args;
    auto* vfd = app.add_subcommand("vfd", "fractal signature of one image as CSV");
    vfd->add_option("--in", vfd_args.input, "input image")->required();
    vfd->add_option("--rmax", vfd_args.r_max, "maximum dilation radius");
    vfd->add_option("--out", vfd_args.output, "output CSV (default stdout)");

    ExtractArgs extract_args;
    auto* extract = app.add_subcommand("extract", "feature CSV for a dataset");
    extract->add_option("--data", extract_args.data_root, "dataset root")->required();
    extract->add_option("--kind", extract_args.kind, "descriptor kind");
    extract->add_option("--grid", extract_args.grid, "scales x orientations");
    extract->add_option("--ul", extract_args.u_low, "low center frequency");
    extract->add_option("--uh", extract_args.u_high, "high center frequency");
    extract->add_option("--trunc", extract_args.truncation, "support half-width in sigmas");
    extract->add_option("--sigma-v-form", extract_args.sigma_v_form, "printed|classic");
    extract->add_option("--rmax", extract_args.r_max, "maximum dilation radius");
    extract->add_option("--model", extract_args.model_dir,
                        "trained model dir (required for enhanced_fractal)");
    extract->add_option("--out", extract_args.output, "output CSV");

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "fit and serialize a pipeline model");
    train->add_option("--data", train_args.data_root, "dataset root")->required();
    train->add_option("--kind", train_args.kind, "descriptor kind");
    train->add_option("--grid", train_args.grid, "scales x orientations");
    train->add_option("--ul", train_args.u_low, "low center frequency");
    train->add_option("--uh", train_args.u_high, "high center frequency");
    train->add_option("--trunc", train_args.truncation, "support half-width in sigmas");
    train->add_option("--sigma-v-form", train_args.sigma_v_form, "printed|classic");
    train->add_option("--rmax", train_args.r_max, "maximum dilation radius");
    train->add_option("--components", train_args.components, "canonical variables to keep");
    train->add_option("--ridge", train_args.ridge, "CDA ridge scale");
    train->add_flag("--no-final-cda", train_args.no_final_cda,
                    "skip the dataset-level CDA stage");
    train->add_option("--out", train_args.out_dir, "model output directory");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "score a dataset against a trained model");
    eval->add_option("--data", eval_args.data_root, "dataset root")->required();
    eval->add_option("--model", eval_args.model_dir, "model directory")->required();

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "cross-validated sweep over kinds x grids");
    bench->fallthrough(); // lets `bench --config file` reach the app-level option
    bench->add_option("--data", bench_args.data_root, "dataset root")->required();
    bench->add_option("--kinds", bench_args.kinds, "descriptor kinds")->delimiter(',');
    bench->add_option("--grids,--grid", bench_args.grids, "grids, e.g. 4x6,2x6")
        ->delimiter(',');
    bench->add_option("--ul", bench_args.u_low, "low center frequency");
    bench->add_option("--uh", bench_args.u_high, "high center frequency");
    bench->add_option("--trunc", bench_args.truncation, "support half-width in sigmas");
    bench->add_option("--sigma-v-form", bench_args.sigma_v_form, "printed|classic");
    bench->add_option("--rmax", bench_args.r_max, "maximum dilation radius");
    bench->add_option("--components", bench_args.components, "canonical variables to keep");
    bench->add_option("--ridge", bench_args.ridge, "CDA ridge scale");
    bench->add_option("--folds", bench_args.folds, "cross-validation folds");
    bench->add_option("--seed", bench_args.seed, "fold shuffle seed");
    bench->add_flag("--leaky-cda", bench_args.leaky_cda,
                    "fit CDA stages on all folds (protocol comparison)");
    bench->add_flag("--no-final-cda", bench_args.no_final_cda,
                    "skip the dataset-level CDA stage");
    bench->add_flag("--timing", bench_args.timing,
                    "emit measured wall time in report.csv (breaks byte reproducibility)");
    bench->add_option("--out", bench_args.out_dir, "report output directory");

    WindowsArgs windows_args;
    auto* windows = app.add_subcommand("windows", "split textures into random windows");
    windows->add_option("--in", windows_args.in_dir, "directory of texture images")->required();
    windows->add_option("--out", windows_args.out_dir, "output dataset root")->required();
    windows->add_option("--count", windows_args.count, "windows per texture");
    windows->add_option("--size", windows_args.size, "square window side");
    windows->add_option("--width", windows_args.width, "window width (overrides --size)");
    windows->add_option("--height", windows_args.height, "window height (overrides --size)");
    windows->add_option("--seed", windows_args.seed, "placement seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << "run 'texfract --help' for usage\n";
        return 2;
    }

    try {
        if (filters->parsed()) return run_filters(filters_args);
        if (vfd->parsed()) return run_vfd(vfd_args);
        if (extract->parsed()) return run_extract(extract_args);
        if (train->parsed()) return run_train(train_args);
        if (eval->parsed()) return run_eval(eval_args);
        if (bench->parsed()) return run_bench(bench_args);
        if (windows->parsed()) return run_windows(windows_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
