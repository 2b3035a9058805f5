#include "altsssom/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "altsssom/errors.hpp"

namespace altsssom {

namespace {

// Dense 0..k-1 indices in ascending order of the original ids.
std::vector<std::size_t> densify(std::span<const std::int64_t> ids, std::size_t& distinct) {
    std::map<std::int64_t, std::size_t> index;
    for (std::int64_t id : ids) index.emplace(id, 0);
    std::size_t next = 0;
    for (auto& [id, dense] : index) dense = next++;
    distinct = next;
    std::vector<std::size_t> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) out[i] = index[ids[i]];
    return out;
}

}  // namespace

ContingencyTable contingency_table(std::span<const std::int64_t> assignments,
                                   std::span<const std::int64_t> truth) {
    require(assignments.size() == truth.size(), "assignments and truth differ in length");
    ContingencyTable table;
    const auto rows = densify(assignments, table.clusters);
    const auto cols = densify(truth, table.classes);
    table.counts.assign(table.clusters * table.classes, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) ++table.counts[rows[i] * table.classes + cols[i]];
    table.n = assignments.size();
    return table;
}

// Kuhn-Munkres with potentials on the negated matrix (1-based internal indexing).
std::vector<std::size_t> optimal_assignment(const SquareMatrix& costs) {
    require(costs.values.size() == costs.n * costs.n, "assignment matrix must be square");
    for (double v : costs.values) require(std::isfinite(v), "assignment matrix has a non-finite entry");
    const std::size_t n = costs.n;
    if (n == 0) return {};

    constexpr double inf = std::numeric_limits<double>::infinity();
    auto cost = [&](std::size_t i, std::size_t j) { return -costs.at(i - 1, j - 1); };

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);  // match[col] = row
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t col = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[col] = true;
            const std::size_t row = match[col];
            double delta = inf;
            std::size_t next = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double reduced = cost(row, j) - u[row] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = col;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    next = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col = next;
        } while (match[col] != 0);
        do {
            const std::size_t prev = way[col];
            match[col] = match[prev];
            col = prev;
        } while (col != 0);
    }

    std::vector<std::size_t> perm(n);
    for (std::size_t j = 1; j <= n; ++j) perm[match[j] - 1] = j - 1;
    return perm;
}

double accuracy(std::span<const std::optional<ClassId>> predicted, std::span<const ClassId> truth) {
    require(predicted.size() == truth.size(), "predictions and truth differ in length");
    require(!truth.empty(), "accuracy of an empty sample");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (predicted[i] && *predicted[i] == truth[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double clustering_error(std::span<const std::int64_t> assignments, std::span<const std::int64_t> truth) {
    require(assignments.size() == truth.size(), "assignments and truth differ in length");
    require(!truth.empty(), "clustering error of an empty sample");
    const ContingencyTable table = contingency_table(assignments, truth);
    SquareMatrix square(std::max(table.clusters, table.classes));
    for (std::size_t r = 0; r < table.clusters; ++r) {
        for (std::size_t c = 0; c < table.classes; ++c) square.at(r, c) = static_cast<double>(table.at(r, c));
    }
    const auto perm = optimal_assignment(square);
    double matched = 0.0;
    for (std::size_t r = 0; r < square.n; ++r) matched += square.at(r, perm[r]);
    return matched / static_cast<double>(table.n);
}

}  // namespace altsssom
