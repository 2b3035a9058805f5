#include "altsssom/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

#include "altsssom/errors.hpp"
#include "altsssom/learning.hpp"
#include "altsssom/metrics.hpp"

namespace altsssom {

using nlohmann::json;

namespace seeds {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t tag : tags) h = splitmix64(h ^ splitmix64(tag));
    return h;
}

}  // namespace seeds

ParamSpace standard_space() {
    ParamSpace space;
    space.ranges = {
        {"lp", 0.001, 0.002, RangeScale::absolute, false},
        {"beta", 0.90, 0.95, RangeScale::absolute, false},
        {"age_wins", 1.0, 200.0, RangeScale::times_patterns, true},
        {"e_b", 0.001, 0.2, RangeScale::absolute, false},
        {"e_n", 0.002, 1.0, RangeScale::times_e_b, false},
        {"s", 0.01, 0.1, RangeScale::absolute, false},
        {"minwd", 0.0, 0.5, RangeScale::absolute, false},
        {"epochs", 1.0, 100.0, RangeScale::absolute, true},
    };
    space.n_max = 200;
    return space;
}

ParamSpace space_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    if (!doc.is_object()) throw ParseError("parameter ranges must be a JSON object", 0);

    ParamSpace space = standard_space();
    for (const auto& [key, value] : doc.items()) {
        if (key == "n_max") {
            if (!value.is_number_unsigned() || value.get<std::size_t>() < 1) {
                throw ParseError("n_max must be a positive integer", 0);
            }
            space.n_max = value.get<std::size_t>();
            continue;
        }
        auto it = std::find_if(space.ranges.begin(), space.ranges.end(),
                               [&](const ParamRange& r) { return r.name == key; });
        if (it == space.ranges.end()) throw ParseError("unknown parameter range '" + key + "'", 0);
        if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
            throw ParseError("range '" + key + "' must be [low, high]", 0);
        }
        it->low = value[0].get<double>();
        it->high = value[1].get<double>();
        if (!(it->low <= it->high)) throw ContractViolation("range '" + key + "' has low > high");
    }
    return space;
}

std::string space_to_json(const ParamSpace& space) {
    json doc = json::object();
    for (const ParamRange& r : space.ranges) doc[r.name] = {r.low, r.high};
    doc["n_max"] = space.n_max;
    return doc.dump(1) + "\n";
}

std::vector<std::vector<double>> lhs_design(std::span<const ParamRange> ranges, std::size_t n,
                                            std::uint64_t seed) {
    require(n >= 1, "latin hypercube needs at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> design(n, std::vector<double>(ranges.size()));
    std::vector<std::size_t> strata(n);
    for (std::size_t r = 0; r < ranges.size(); ++r) {
        const ParamRange& range = ranges[r];
        require(range.low <= range.high, "parameter range has low > high");
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        std::shuffle(strata.begin(), strata.end(), rng);
        const double width = (range.high - range.low) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = range.low + width * (static_cast<double>(strata[i]) + unit(rng));
            design[i][r] = std::clamp(v, range.low, range.high);
        }
    }
    return design;
}

namespace {

double round_half_up(double v) { return std::floor(v + 0.5); }

void assign(Params& p, const std::string& name, double v) {
    if (name == "lp") p.lp = v;
    else if (name == "beta") p.beta = v;
    else if (name == "age_wins") p.age_wins = static_cast<std::size_t>(std::max(1.0, v));
    else if (name == "e_b") p.e_b = v;
    else if (name == "e_n") p.e_n = v;
    else if (name == "s") p.s = v;
    else if (name == "minwd") p.minwd = v;
    else if (name == "epochs") p.epochs = static_cast<std::size_t>(std::max(1.0, v));
    else throw ContractViolation("unknown swept parameter '" + name + "'");
}

}  // namespace

Params materialize(const ParamSpace& space, std::span<const double> design_row, std::size_t n_patterns) {
    require(design_row.size() == space.ranges.size(), "design row does not match the parameter space");
    Params p = default_params(n_patterns);
    p.n_max = space.n_max;

    // Anchors first, so e_b-scaled ranges see the e_b of this row.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t r = 0; r < space.ranges.size(); ++r) {
            const ParamRange& range = space.ranges[r];
            const bool dependent = range.scale == RangeScale::times_e_b;
            if (dependent != (pass == 1)) continue;
            double v = design_row[r];
            if (range.scale == RangeScale::times_e_b) v *= p.e_b;
            if (range.scale == RangeScale::times_patterns) v *= static_cast<double>(n_patterns);
            if (range.integer) v = round_half_up(v);
            assign(p, range.name, v);
        }
    }
    return p;
}

std::vector<Params> lhs_sample(const ParamSpace& space, std::size_t n, std::uint64_t seed,
                               std::size_t n_patterns) {
    const auto design = lhs_design(space.ranges, n, seed);
    std::vector<Params> out;
    out.reserve(n);
    for (const auto& row : design) out.push_back(materialize(space, row, n_patterns));
    return out;
}

namespace {

std::vector<std::int64_t> known_labels(const Dataset& data, std::span<const std::size_t> rows) {
    std::vector<std::int64_t> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        require(data.labels[r].has_value(), "evaluation needs every row to carry a label");
        out.push_back(*data.labels[r]);
    }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<SweepResult> run_cv_experiment(const Dataset& data, const Params& params,
                                           std::span<const double> fractions, const FoldPlan& folds,
                                           std::uint64_t master_seed, std::size_t config_index) {
    std::vector<SweepResult> out;
    for (std::size_t rep = 0; rep < folds.repetitions.size(); ++rep) {
        const auto& plan = folds.repetitions[rep];
        for (std::size_t fold = 0; fold < plan.size(); ++fold) {
            const auto& test_rows = plan[fold];
            std::vector<std::size_t> train_rows;
            for (std::size_t other = 0; other < plan.size(); ++other) {
                if (other != fold) train_rows.insert(train_rows.end(), plan[other].begin(), plan[other].end());
            }
            std::sort(train_rows.begin(), train_rows.end());
            const Dataset train = subset(data, train_rows);
            const auto truth = known_labels(data, test_rows);
            std::vector<ClassId> truth_class(truth.begin(), truth.end());

            for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
                const auto start = std::chrono::steady_clock::now();
                const Dataset masked =
                    mask_labels(train, fractions[fi], seeds::mix(master_seed, {seeds::kMask, rep, fold, fi}));
                const SomModel model =
                    fit(masked, params, seeds::mix(master_seed, {seeds::kFit, config_index, rep, fold, fi}));

                std::vector<std::optional<ClassId>> predicted;
                std::vector<std::int64_t> clusters;
                for (std::size_t r : test_rows) {
                    const auto x = data.features.row(r);
                    predicted.push_back(predict_class(model, x));
                    clusters.push_back(to_underlying(assign_cluster(model, x)));
                }

                SweepResult res;
                res.config_index = config_index;
                res.params = params;
                res.repetition = static_cast<int>(rep);
                res.fold = static_cast<int>(fold);
                res.supervision_fraction = fractions[fi];
                res.accuracy = accuracy(predicted, truth_class);
                res.ce = clustering_error(clusters, truth);
                res.node_count = model.size();
                res.wall_time = seconds_since(start);
                out.push_back(res);
            }
        }
    }
    return out;
}

SweepResult run_clustering_experiment(const Dataset& data, const Params& params, std::uint64_t master_seed,
                                      std::size_t config_index) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const auto truth = known_labels(data, rows);

    Dataset hidden = data;
    std::fill(hidden.visible.begin(), hidden.visible.end(), false);
    const SomModel model =
        fit(hidden, params, seeds::mix(master_seed, {seeds::kFit, config_index, seeds::kFullData}));

    std::vector<std::int64_t> clusters;
    clusters.reserve(rows.size());
    for (std::size_t r : rows) clusters.push_back(to_underlying(assign_cluster(model, data.features.row(r))));

    SweepResult res;
    res.config_index = config_index;
    res.params = params;
    res.repetition = -1;
    res.fold = -1;
    res.supervision_fraction = 0.0;
    res.ce = clustering_error(clusters, truth);
    res.node_count = model.size();
    res.wall_time = seconds_since(start);
    return res;
}

MeanStd mean_std(std::span<const double> values) {
    if (values.empty()) return {};
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

Summary aggregate(std::span<const SweepResult> results) {
    // Sorting each group's values makes the sums independent of input order.
    struct Bucket {
        std::vector<double> accuracy, ce, nodes;
    };
    std::map<std::pair<double, std::size_t>, Bucket> buckets;
    Summary summary;
    for (const SweepResult& r : results) {
        if (r.full_data()) {
            if (!summary.best_full_ce || r.ce > summary.best_full_ce->ce ||
                (r.ce == summary.best_full_ce->ce && r.config_index < summary.best_full_ce->config_index)) {
                summary.best_full_ce = r;
            }
            continue;
        }
        Bucket& b = buckets[{r.supervision_fraction, r.config_index}];
        b.accuracy.push_back(r.accuracy);
        b.ce.push_back(r.ce);
        b.nodes.push_back(static_cast<double>(r.node_count));
    }

    for (auto& [key, b] : buckets) {
        std::sort(b.accuracy.begin(), b.accuracy.end());
        std::sort(b.ce.begin(), b.ce.end());
        std::sort(b.nodes.begin(), b.nodes.end());
        ConfigSummary g;
        g.fraction = key.first;
        g.config_index = key.second;
        g.runs = b.accuracy.size();
        g.accuracy = mean_std(b.accuracy);
        g.ce = mean_std(b.ce);
        g.node_count = mean_std(b.nodes);
        summary.groups.push_back(g);
    }

    auto better_accuracy = [](const ConfigSummary& a, const ConfigSummary& b) {
        if (a.accuracy.mean != b.accuracy.mean) return a.accuracy.mean > b.accuracy.mean;
        if (a.ce.mean != b.ce.mean) return a.ce.mean > b.ce.mean;
        return a.config_index < b.config_index;
    };
    auto better_ce = [](const ConfigSummary& a, const ConfigSummary& b) {
        if (a.ce.mean != b.ce.mean) return a.ce.mean > b.ce.mean;
        if (a.accuracy.mean != b.accuracy.mean) return a.accuracy.mean > b.accuracy.mean;
        return a.config_index < b.config_index;
    };
    for (std::size_t i = 0; i < summary.groups.size();) {
        std::size_t j = i;
        while (j < summary.groups.size() && summary.groups[j].fraction == summary.groups[i].fraction) ++j;
        const auto first = summary.groups.begin() + static_cast<std::ptrdiff_t>(i);
        const auto last = summary.groups.begin() + static_cast<std::ptrdiff_t>(j);
        summary.best_accuracy.push_back(*std::min_element(first, last, better_accuracy));
        summary.best_ce.push_back(*std::min_element(first, last, better_ce));
        i = j;
    }
    return summary;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string params_cells(const Params& p) {
    return num(p.lp) + "," + num(p.beta) + "," + std::to_string(p.age_wins) + "," + num(p.e_b) + "," +
           num(p.e_n) + "," + num(p.s) + "," + num(p.minwd) + "," + std::to_string(p.epochs) + "," +
           std::to_string(p.n_max);
}

constexpr const char* kParamHeader = "lp,beta,age_wins,e_b,e_n,s,minwd,epochs,n_max";

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("cannot write '" + path.string() + "'");
}

}  // namespace

std::string ce_table_csv(const std::vector<std::pair<std::string, std::optional<double>>>& columns) {
    std::string header = "metric";
    std::string row = "CE";
    for (const auto& [name, value] : columns) {
        header += "," + name;
        row += "," + (value ? num(*value) : std::string{});
    }
    return header + "\n" + row + "\n";
}

ExportPaths export_results(std::span<const SweepResult> results, const Summary& summary,
                           const std::filesystem::path& dir, std::string_view dataset_name) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

    ExportPaths paths{dir / "runs.csv", dir / "best_accuracy.csv", dir / "ce_table.csv"};

    std::string runs = std::string("config,repetition,fold,fraction,accuracy,ce,nodes,") + kParamHeader + "\n";
    std::map<std::size_t, Params> params_of;
    for (const SweepResult& r : results) {
        params_of.emplace(r.config_index, r.params);
        runs += std::to_string(r.config_index) + "," + std::to_string(r.repetition) + "," +
                std::to_string(r.fold) + "," + num(r.supervision_fraction) + "," + num(r.accuracy) + "," +
                num(r.ce) + "," + std::to_string(r.node_count) + "," + params_cells(r.params) + "\n";
    }
    write_file(paths.runs, runs);

    std::string best = std::string("fraction,config,runs,accuracy_mean,accuracy_std,ce_mean,ce_std,"
                                    "nodes_mean,nodes_std,") +
                       kParamHeader + "\n";
    for (const ConfigSummary& g : summary.best_accuracy) {
        auto it = params_of.find(g.config_index);
        best += num(g.fraction) + "," + std::to_string(g.config_index) + "," + std::to_string(g.runs) + "," +
                num(g.accuracy.mean) + "," + num(g.accuracy.stddev) + "," + num(g.ce.mean) + "," +
                num(g.ce.stddev) + "," + num(g.node_count.mean) + "," + num(g.node_count.stddev) + "," +
                (it != params_of.end() ? params_cells(it->second) : std::string(",,,,,,,,")) + "\n";
    }
    write_file(paths.best_accuracy, best);

    std::optional<double> ce;
    if (summary.best_full_ce) ce = summary.best_full_ce->ce;
    write_file(paths.ce_table, results.empty() ? std::string("metric,") + std::string(dataset_name) + "\n"
                                               : ce_table_csv({{std::string(dataset_name), ce}}));
    return paths;
}

SweepOutput run_sweep(const Dataset& data, const SweepConfig& config) {
    require(config.n_configs >= 1, "sweep needs at least one configuration");
    require(!config.fractions.empty() || config.clustering, "sweep has nothing to evaluate");
    data.check();

    SweepOutput output;
    output.settings = lhs_sample(config.space, config.n_configs,
                                 seeds::mix(config.master_seed, {seeds::kLhs}), data.size());
    FoldPlan folds;
    if (!config.fractions.empty()) {
        folds = make_folds(data, config.folds, config.repetitions,
                           seeds::mix(config.master_seed, {seeds::kFolds}));
    }

    std::vector<std::vector<SweepResult>> slots(output.settings.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (std::size_t i = next++; i < slots.size(); i = next++) {
            try {
                std::vector<SweepResult> cell;
                if (!config.fractions.empty()) {
                    cell = run_cv_experiment(data, output.settings[i], config.fractions, folds,
                                             config.master_seed, i);
                }
                if (config.clustering) {
                    cell.push_back(run_clustering_experiment(data, output.settings[i], config.master_seed, i));
                }
                slots[i] = std::move(cell);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = slots.size();
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, slots.size());
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (auto& cell : slots) {
        for (auto& r : cell) output.results.push_back(std::move(r));
    }
    output.summary = aggregate(output.results);
    return output;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string sweep_manifest(std::string_view dataset_digest, std::string_view dataset_name,
                           const SweepConfig& config) {
    json ranges = json::object();
    for (const ParamRange& r : config.space.ranges) {
        ranges[r.name] = {{"low", r.low},
                          {"high", r.high},
                          {"scale", r.scale == RangeScale::absolute    ? "absolute"
                                    : r.scale == RangeScale::times_e_b ? "times_e_b"
                                                                       : "times_patterns"},
                          {"integer", r.integer}};
    }
    const json doc{{"tool", "altsssom"},
                   {"tool_version", kToolVersion},
                   {"dataset", std::string(dataset_name)},
                   {"dataset_fnv1a", std::string(dataset_digest)},
                   {"master_seed", config.master_seed},
                   {"n_configs", config.n_configs},
                   {"fractions", config.fractions},
                   {"clustering", config.clustering},
                   {"folds", config.folds},
                   {"repetitions", config.repetitions},
                   {"n_max", config.space.n_max},
                   {"ranges", ranges}};
    return doc.dump(1) + "\n";
}

}  // namespace altsssom
