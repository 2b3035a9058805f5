// altsssom: train, apply and sweep relevance-weighted semi-supervised self-organizing maps.
//
// Exit codes: 0 success, 1 usage or parameter error, 2 data or I/O error, 3 internal error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "altsssom/dataset.hpp"
#include "altsssom/errors.hpp"
#include "altsssom/harness.hpp"
#include "altsssom/learning.hpp"
#include "altsssom/metrics.hpp"
#include "altsssom/serialization.hpp"

namespace fs = std::filesystem;
using namespace altsssom;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

// Parameter validation failures are user errors, not internal ones.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataOptions {
    std::string path;
    std::optional<std::size_t> label_column;
    bool no_rescale = false;

    void attach(CLI::App& app, bool required = true) {
        auto* data = app.add_option("--data", path, "Input dataset (.arff or comma-separated)")->check(CLI::ExistingFile);
        if (required) data->required();
        app.add_option("--labels-column", label_column, "Zero-based class column of CSV input (default: last)");
        app.add_flag("--no-rescale", no_rescale, "Use features as given instead of min-max scaling them to [0,1]");
    }

    Dataset load() const {
        Dataset data = load_dataset(path, label_column);
        return no_rescale ? data : rescale_minmax(std::move(data));
    }
};

struct ParamOptions {
    std::string file;
    Params flags;
    std::vector<std::pair<CLI::Option*, std::function<void(Params&)>>> overrides;

    void attach(CLI::App& app) {
        app.add_option("--params", file, "JSON file with parameter values")->check(CLI::ExistingFile);
        add(app, "--lp", flags.lp, "Lowest cluster percentage", [this](Params& p) { p.lp = flags.lp; });
        add(app, "--beta", flags.beta, "Moving-average decay rate", [this](Params& p) { p.beta = flags.beta; });
        add(app, "--age-wins", flags.age_wins, "Competitions between removal resets",
            [this](Params& p) { p.age_wins = flags.age_wins; });
        add(app, "--eb", flags.e_b, "Winner learning rate", [this](Params& p) { p.e_b = flags.e_b; });
        add(app, "--en", flags.e_n, "Neighbor learning rate", [this](Params& p) { p.e_n = flags.e_n; });
        add(app, "--s", flags.s, "Relevance logistic slope", [this](Params& p) { p.s = flags.s; });
        add(app, "--minwd", flags.minwd, "Connection threshold", [this](Params& p) { p.minwd = flags.minwd; });
        add(app, "--epochs", flags.epochs, "Organization passes", [this](Params& p) { p.epochs = flags.epochs; });
        add(app, "--n-max", flags.n_max, "Node cap", [this](Params& p) { p.n_max = flags.n_max; });
    }

    template <typename T>
    void add(CLI::App& app, const char* name, T& target, const char* help, std::function<void(Params&)> apply) {
        overrides.emplace_back(app.add_option(name, target, help), std::move(apply));
    }

    // Defaults (range midpoints for this dataset size), then the file, then individual flags.
    Params resolve(std::size_t n_patterns) const {
        Params p = default_params(n_patterns);
        if (!file.empty()) p = params_from_json(read_text_file(file), p);
        for (const auto& [opt, apply] : overrides) {
            if (opt->count() > 0) apply(p);
        }
        try {
            validate(p);
        } catch (const ContractViolation& e) {
            throw UsageError(e.what());
        }
        return p;
    }
};

std::vector<double> parse_fractions(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cell.size() || !(v >= 0.0 && v <= 1.0)) {
            throw UsageError("--fractions: '" + cell + "' is not a fraction in [0,1]");
        }
        out.push_back(v);
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) throw IoError("cannot write '" + path.string() + "'");
}

double seconds(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string class_name(const SomModel& model, ClassId id) {
    if (id >= 0 && static_cast<std::size_t>(id) < model.class_names.size()) return model.class_names[id];
    return std::to_string(id);
}

int cmd_fit(const DataOptions& data_opts, const ParamOptions& param_opts, std::uint64_t seed,
            const std::string& out) {
    const Dataset data = data_opts.load();
    const Params params = param_opts.resolve(data.size());

    Phase phase = Phase::organization;
    auto phase_start = std::chrono::steady_clock::now();
    FitOptions options;
    options.observer = [&](const SomModel& m, const TrainStepOutcome&) {
        if (m.phase() != phase) {
            std::fprintf(stderr, "%s phase: %.3f s\n", to_string(phase), seconds(phase_start));
            phase = m.phase();
            phase_start = std::chrono::steady_clock::now();
        }
    };
    const SomModel model = fit(data, params, seed, options);
    std::fprintf(stderr, "%s phase: %.3f s\n", to_string(phase), seconds(phase_start));
    save_model(model, out);
    std::fprintf(stderr, "nodes: %zu, edges: %zu, model written to %s\n", model.size(),
                 model.graph().edge_count(), out.c_str());
    return kOk;
}

int cmd_predict(const DataOptions& data_opts, const std::string& model_path, const std::string& out) {
    const SomModel model = load_model(model_path);
    const Dataset data = data_opts.load();
    if (data.dim() != model.dim()) {
        throw ParseError("dataset has " + std::to_string(data.dim()) + " features, model expects m=" +
                             std::to_string(model.dim()),
                         0);
    }
    std::string text = "row,cluster,class\n";
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto x = data.features.row(r);
        const auto cls = predict_class(model, x);
        text += std::to_string(r) + "," + std::to_string(to_underlying(assign_cluster(model, x))) + "," +
                (cls ? class_name(model, *cls) : std::string{}) + "\n";
    }
    write_text(out, text);
    std::fprintf(stderr, "%zu predictions written to %s\n", data.size(), out.c_str());
    return kOk;
}

int cmd_evaluate(const DataOptions& data_opts, const std::string& model_path) {
    const SomModel model = load_model(model_path);
    const Dataset data = data_opts.load();
    if (data.dim() != model.dim()) {
        throw ParseError("dataset has " + std::to_string(data.dim()) + " features, model expects m=" +
                             std::to_string(model.dim()),
                         0);
    }
    std::vector<std::optional<ClassId>> predicted;
    std::vector<ClassId> truth;
    std::vector<std::int64_t> clusters, truth64;
    for (std::size_t r = 0; r < data.size(); ++r) {
        if (!data.labels[r]) continue;
        const auto x = data.features.row(r);
        predicted.push_back(predict_class(model, x));
        clusters.push_back(to_underlying(assign_cluster(model, x)));
        truth.push_back(*data.labels[r]);
        truth64.push_back(*data.labels[r]);
    }
    if (truth.empty()) throw ParseError("dataset has no labeled rows to evaluate against", 0);
    std::printf("rows,%zu\naccuracy,%.10g\nce,%.10g\nnodes,%zu\n", truth.size(), accuracy(predicted, truth),
                clustering_error(clusters, truth64), model.size());
    return kOk;
}

int cmd_cv(const DataOptions& data_opts, const ParamOptions& param_opts, std::uint64_t seed,
           const std::string& fractions_text, std::size_t folds, std::size_t repetitions, const std::string& out) {
    const auto fractions = parse_fractions(fractions_text);
    const Dataset data = data_opts.load();
    const Params params = param_opts.resolve(data.size());
    const FoldPlan plan = make_folds(data, folds, repetitions, seeds::mix(seed, {seeds::kFolds}));
    const auto results = run_cv_experiment(data, params, fractions, plan, seed);
    const Summary summary = aggregate(results);
    export_results(results, summary, out, fs::path(data_opts.path).stem().string());
    for (const ConfigSummary& g : summary.groups) {
        std::fprintf(stderr, "fraction %.4g: accuracy %.4f +- %.4f, CE %.4f +- %.4f\n", g.fraction,
                     g.accuracy.mean, g.accuracy.stddev, g.ce.mean, g.ce.stddev);
    }
    return kOk;
}

int cmd_sweep(const DataOptions& data_opts, SweepConfig config, const std::string& ranges_path,
              const std::string& fractions_text, const std::string& out) {
    if (!fractions_text.empty()) config.fractions = parse_fractions(fractions_text);
    if (!ranges_path.empty()) config.space = space_from_json(read_text_file(ranges_path));
    if (config.fractions.empty() && !config.clustering) {
        throw UsageError("nothing to run: give --fractions or drop --no-clustering");
    }
    const std::string raw = read_text_file(data_opts.path);
    const Dataset data = data_opts.load();
    const std::string name = fs::path(data_opts.path).stem().string();

    const auto start = std::chrono::steady_clock::now();
    std::fprintf(stderr, "sweeping %zu settings on %s (%zu rows, %zu features)\n", config.n_configs,
                 name.c_str(), data.size(), data.dim());
    const SweepOutput output = run_sweep(data, config);
    export_results(output.results, output.summary, out, name);
    write_text(fs::path(out) / "manifest.json", sweep_manifest(fnv1a_hex(raw), name, config));
    if (output.summary.best_full_ce) {
        std::fprintf(stderr, "best full-data CE %.4f (setting %zu)\n", output.summary.best_full_ce->ce,
                     output.summary.best_full_ce->config_index);
    }
    for (const ConfigSummary& g : output.summary.best_accuracy) {
        std::fprintf(stderr, "fraction %.4g: best accuracy %.4f +- %.4f (setting %zu)\n", g.fraction,
                     g.accuracy.mean, g.accuracy.stddev, g.config_index);
    }
    std::fprintf(stderr, "done in %.1f s, exports in %s\n", seconds(start), out.c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relevance-weighted semi-supervised self-organizing maps"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string out;
    std::string model_path;

    DataOptions fit_data;
    ParamOptions fit_params;
    auto* fit_cmd = app.add_subcommand("fit", "Train a map and write it as JSON");
    fit_data.attach(*fit_cmd);
    fit_params.attach(*fit_cmd);
    fit_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    fit_cmd->add_option("--out", out, "Model output path")->required();

    DataOptions predict_data;
    auto* predict_cmd = app.add_subcommand("predict", "Write cluster and class of every row");
    predict_data.attach(*predict_cmd);
    predict_cmd->add_option("--model", model_path, "Trained model")->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("--out", out, "Output CSV path")->required();

    DataOptions eval_data;
    auto* eval_cmd = app.add_subcommand("evaluate", "Print accuracy and CE of a model on labeled data");
    eval_data.attach(*eval_cmd);
    eval_cmd->add_option("--model", model_path, "Trained model")->required()->check(CLI::ExistingFile);

    DataOptions cv_data;
    ParamOptions cv_params;
    std::string fractions = "1";
    std::size_t folds = 3, repetitions = 3;
    auto* cv_cmd = app.add_subcommand("cv", "Repeated stratified k-fold evaluation of one setting");
    cv_data.attach(*cv_cmd);
    cv_params.attach(*cv_cmd);
    cv_cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
    cv_cmd->add_option("--fractions", fractions, "Comma-separated label fractions")->capture_default_str();
    cv_cmd->add_option("--folds", folds, "Folds per repetition")->capture_default_str()->check(CLI::Range(2, 1000));
    cv_cmd->add_option("--repetitions", repetitions, "Repetitions")->capture_default_str()->check(CLI::Range(1, 1000));
    cv_cmd->add_option("--out", out, "Export directory")->required();

    DataOptions sweep_data;
    SweepConfig sweep;
    std::string ranges_path, sweep_fractions;
    bool no_clustering = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "Latin hypercube parameter sweep");
    sweep_data.attach(*sweep_cmd);
    sweep_cmd->add_option("--ranges", ranges_path, "JSON file with parameter ranges")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--n-configs", sweep.n_configs, "Number of settings")->capture_default_str()->check(CLI::Range(1, 1000000));
    sweep_cmd->add_option("--fractions", sweep_fractions, "Comma-separated label fractions for cross-validation");
    sweep_cmd->add_flag("--no-clustering", no_clustering, "Skip the full-data clustering run of each setting");
    sweep_cmd->add_option("--folds", sweep.folds, "Folds per repetition")->capture_default_str()->check(CLI::Range(2, 1000));
    sweep_cmd->add_option("--repetitions", sweep.repetitions, "Repetitions")->capture_default_str()->check(CLI::Range(1, 1000));
    sweep_cmd->add_option("--seed", sweep.master_seed, "Master seed")->capture_default_str();
    sweep_cmd->add_option("--workers", sweep.workers, "Worker threads")->capture_default_str()->check(CLI::Range(1, 1024));
    sweep_cmd->add_option("--out", out, "Export directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit_data, fit_params, seed, out);
        if (*predict_cmd) return cmd_predict(predict_data, model_path, out);
        if (*eval_cmd) return cmd_evaluate(eval_data, model_path);
        if (*cv_cmd) return cmd_cv(cv_data, cv_params, seed, fractions, folds, repetitions, out);
        sweep.clustering = !no_clustering;
        return cmd_sweep(sweep_data, sweep, ranges_path, sweep_fractions, out);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kData;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kData;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kData;
    } catch (const ContractViolation& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kInternal;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kInternal;
    }
}
