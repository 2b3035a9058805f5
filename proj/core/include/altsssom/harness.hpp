#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "altsssom/dataset.hpp"
#include "altsssom/params.hpp"

namespace altsssom {

// Seed fan-out. Every random stream of a sweep derives from one master seed through
// splitmix64 mixing of a tagged counter tuple:
//   lhs design      mix(master, kLhs)
//   fold plan       mix(master, kFolds)             (repetition r then uses plan seed + r)
//   label mask      mix(master, kMask, rep, fold, fraction index)
//   fit             mix(master, kFit, config, rep, fold, fraction index)
//   full-data fit   mix(master, kFit, config, kFullData)
// so any (config, repetition, fold, fraction) cell can be rerun in isolation.
namespace seeds {
inline constexpr std::uint64_t kLhs = 0x4c4853;
inline constexpr std::uint64_t kFolds = 0x464f4c44;
inline constexpr std::uint64_t kMask = 0x4d41534b;
inline constexpr std::uint64_t kFit = 0x464954;
inline constexpr std::uint64_t kFullData = 0xffffffff;

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t mix(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept;
}  // namespace seeds

enum class RangeScale {
    absolute,        ///< [low, high] as given
    times_e_b,       ///< [low * e_b, high * e_b] of the same setting
    times_patterns,  ///< [low * S, high * S] with S the number of patterns
};

struct ParamRange {
    std::string name;
    double low = 0.0;
    double high = 0.0;
    RangeScale scale = RangeScale::absolute;
    bool integer = false;
};

/// Sweep space: one range per swept parameter plus the fixed node cap.
struct ParamSpace {
    std::vector<ParamRange> ranges;
    std::size_t n_max = 200;
};

/// The standard ranges (lp, beta, age_wins, e_b, e_n, s, minwd, epochs) with n_max = 200.
ParamSpace standard_space();

/// Reads {"name": [low, high], ..., "n_max": 200}; names absent from the document keep the
/// standard range. Throws ParseError / ContractViolation.
ParamSpace space_from_json(std::string_view text);
std::string space_to_json(const ParamSpace& space);

/// Latin hypercube design: design[i][r] is sample i of range r in the range's own units
/// (multipliers for scaled ranges). Each column holds exactly one value per equal-width stratum.
std::vector<std::vector<double>> lhs_design(std::span<const ParamRange> ranges, std::size_t n,
                                            std::uint64_t seed);

/// Turns one design row into Params, resolving e_b- and S-scaled ranges and rounding integer
/// parameters half-up.
Params materialize(const ParamSpace& space, std::span<const double> design_row, std::size_t n_patterns);

/// lhs_design followed by materialize for each row.
std::vector<Params> lhs_sample(const ParamSpace& space, std::size_t n, std::uint64_t seed,
                               std::size_t n_patterns);

/// One (setting, repetition, fold, fraction) evaluation. repetition and fold are -1 for
/// full-data clustering runs, where accuracy is not measured and stays 0.
struct SweepResult {
    std::size_t config_index = 0;
    Params params;
    int repetition = 0;
    int fold = 0;
    double supervision_fraction = 0.0;
    double accuracy = 0.0;
    double ce = 0.0;
    std::size_t node_count = 0;
    double wall_time = 0.0;  ///< seconds; never exported, so exports stay reproducible

    bool full_data() const noexcept { return repetition < 0; }
};

/// For each (repetition, fold, fraction): hide labels on the training part at that fraction,
/// fit, and score test accuracy and CE. Results are ordered by repetition, fold, fraction.
std::vector<SweepResult> run_cv_experiment(const Dataset& data, const Params& params,
                                           std::span<const double> fractions, const FoldPlan& folds,
                                           std::uint64_t master_seed, std::size_t config_index = 0);

/// Unsupervised fit on every row, CE of the resulting clustering on the same rows.
SweepResult run_clustering_experiment(const Dataset& data, const Params& params,
                                      std::uint64_t master_seed, std::size_t config_index = 0);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation; 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

struct ConfigSummary {
    std::size_t config_index = 0;
    double fraction = 0.0;
    std::size_t runs = 0;
    MeanStd accuracy;
    MeanStd ce;
    MeanStd node_count;
};

struct Summary {
    /// One row per (config, fraction) of cross-validated runs, sorted by fraction then config.
    std::vector<ConfigSummary> groups;
    /// Per fraction: best mean accuracy (ties: higher mean CE, then lower config index).
    std::vector<ConfigSummary> best_accuracy;
    /// Per fraction: best mean CE (ties: higher mean accuracy, then lower config index).
    std::vector<ConfigSummary> best_ce;
    /// Best full-data clustering CE, if any full-data runs were present.
    std::optional<SweepResult> best_full_ce;
};

Summary aggregate(std::span<const SweepResult> results);

struct ExportPaths {
    std::filesystem::path runs;
    std::filesystem::path best_accuracy;
    std::filesystem::path ce_table;
};

/// Writes runs.csv, best_accuracy.csv and ce_table.csv under `dir` (created if needed).
/// Throws IoError when the directory or a file cannot be written.
ExportPaths export_results(std::span<const SweepResult> results, const Summary& summary,
                           const std::filesystem::path& dir, std::string_view dataset_name);

/// One row `CE,<v1>,<v2>,...` under a header naming each dataset.
std::string ce_table_csv(const std::vector<std::pair<std::string, std::optional<double>>>& columns);

struct SweepConfig {
    ParamSpace space = standard_space();
    std::size_t n_configs = 500;
    std::vector<double> fractions;  ///< cross-validated supervision levels; may be empty
    bool clustering = true;         ///< also run one full-data clustering fit per config
    std::size_t folds = 3;
    std::size_t repetitions = 3;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;
};

struct SweepOutput {
    std::vector<Params> settings;
    std::vector<SweepResult> results;  ///< ordered by config, then CV cells, then full-data run
    Summary summary;
};

/// lhs_sample + run_cv_experiment / run_clustering_experiment for every setting.
/// Work is split by setting across `workers` threads; the output does not depend on it.
SweepOutput run_sweep(const Dataset& data, const SweepConfig& config);

/// FNV-1a 64-bit digest, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

/// Key-value run manifest (JSON): dataset digest, master seed, ranges, counts, tool version.
std::string sweep_manifest(std::string_view dataset_digest, std::string_view dataset_name,
                           const SweepConfig& config);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace altsssom
