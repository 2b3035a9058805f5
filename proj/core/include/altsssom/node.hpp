#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace altsssom {

enum class NodeId : std::uint32_t {};

constexpr std::uint32_t to_underlying(NodeId id) noexcept { return static_cast<std::uint32_t>(id); }

/// Index into a dataset's class dictionary.
using ClassId = std::int32_t;

/// One prototype of the map.
///
/// `delta` is the raw exponential moving average of |x - center| per dimension, `delta_hat` its
/// bias-corrected value, and `t` counts relevance updates since the node was created. A freshly
/// created node has zero moving averages and all-ones relevance; a duplicated node keeps the
/// averages of its source but restarts `t` at zero.
struct Node {
    NodeId id{};
    std::vector<double> center;
    std::vector<double> relevance;
    std::vector<double> delta;
    std::vector<double> delta_hat;
    std::uint64_t t = 0;
    double wins = 0.0;  // fractional: inserted nodes start at lp * nwins
    std::optional<ClassId> class_label;

    std::size_t dim() const noexcept { return center.size(); }

    /// A node at `position` with unit relevance and zeroed statistics.
    static Node fresh(NodeId id, std::span<const double> position);

    bool operator==(const Node&) const = default;
};

}  // namespace altsssom
