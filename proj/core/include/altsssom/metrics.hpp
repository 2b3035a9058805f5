#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "altsssom/node.hpp"

namespace altsssom {

/// Square matrix of doubles, row-major.
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<double> values;

    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t size) : n(size), values(size * size, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return values[r * n + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * n + c]; }
};

/// Counts of (predicted cluster, true class) pairs over dense cluster/class indices.
struct ContingencyTable {
    std::size_t clusters = 0;
    std::size_t classes = 0;
    std::vector<std::uint64_t> counts;  // clusters x classes, row-major
    std::uint64_t n = 0;

    std::uint64_t at(std::size_t cluster, std::size_t cls) const { return counts[cluster * classes + cls]; }
};

ContingencyTable contingency_table(std::span<const std::int64_t> assignments,
                                   std::span<const std::int64_t> truth);

/// Permutation maximizing sum_i costs(i, perm[i]) (Hungarian method, O(n^3)).
std::vector<std::size_t> optimal_assignment(const SquareMatrix& costs);

/// Fraction of positions where a prediction is present and equals the truth.
double accuracy(std::span<const std::optional<ClassId>> predicted, std::span<const ClassId> truth);

/// Matched fraction under the best one-to-one cluster/class matching (higher is better).
double clustering_error(std::span<const std::int64_t> assignments, std::span<const std::int64_t> truth);

}  // namespace altsssom
