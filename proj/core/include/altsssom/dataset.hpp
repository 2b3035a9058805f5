#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "altsssom/node.hpp"

namespace altsssom {

/// Dense row-major matrix of doubles.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void append_row(std::span<const double> values);

    bool operator==(const FeatureMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Feature rows with optional class labels and a label-visibility mask.
struct Dataset {
    FeatureMatrix features;
    std::vector<std::optional<ClassId>> labels;
    std::vector<bool> visible;
    std::vector<std::string> class_names;

    std::size_t size() const noexcept { return features.rows(); }
    std::size_t dim() const noexcept { return features.cols(); }
    std::size_t visible_count() const;

    /// Throws ContractViolation when the fields disagree in length, a visible row has no label,
    /// or a label is outside the class dictionary.
    void check() const;

    bool operator==(const Dataset&) const = default;
};

/// Row indices per fold for each repetition.
struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<std::vector<std::size_t>>> repetitions;  // [rep][fold] -> rows

    bool operator==(const FoldPlan&) const = default;
};

/// Attribute-relation text: numeric attributes followed by one nominal class attribute.
/// A '?' class cell leaves the row unlabeled. Labeled rows are visible.
Dataset parse_arff(std::string_view text);

/// Comma-separated rows. `label_column` defaults to the last column; a first row whose feature
/// cells are not all numeric is taken as a header. An empty label cell leaves the row unlabeled.
Dataset parse_csv(std::string_view text, std::optional<std::size_t> label_column = std::nullopt);

/// Dispatches on the extension (.arff, otherwise delimited text). Throws IoError if unreadable.
Dataset load_dataset(const std::filesystem::path& path,
                     std::optional<std::size_t> label_column = std::nullopt);

std::string read_text_file(const std::filesystem::path& path);

/// Header `f1..fm,class`, 17 significant digits, empty cell for unlabeled rows.
std::string to_csv(const Dataset& data);
std::string to_arff(const Dataset& data, std::string_view relation = "data");

/// Per-column (v - min) / (max - min); constant columns become 0.
Dataset rescale_minmax(Dataset data);

/// Marks round(fraction * N) rows visible by stratified seeded sampling; every label must be known.
Dataset mask_labels(Dataset data, double fraction, std::uint64_t seed);

/// Stratified shuffled k-fold partitions; repetition r is seeded with seed + r.
FoldPlan make_folds(const Dataset& data, std::size_t k, std::size_t repetitions, std::uint64_t seed);

/// Rows `rows` of `data`, in order, with labels and mask.
Dataset subset(const Dataset& data, std::span<const std::size_t> rows);

}  // namespace altsssom
