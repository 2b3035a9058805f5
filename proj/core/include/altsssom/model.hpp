#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "altsssom/node.hpp"
#include "altsssom/params.hpp"

namespace altsssom {

enum class Phase { organization, convergence, inference };

const char* to_string(Phase phase) noexcept;
std::optional<Phase> phase_from_string(std::string_view name) noexcept;

/// Symmetric, irreflexive adjacency over node ids.
class Graph {
public:
    void connect(NodeId a, NodeId b);
    void disconnect(NodeId a, NodeId b);
    void erase(NodeId id);
    void clear() { adjacency_.clear(); }

    bool connected(NodeId a, NodeId b) const;
    const std::set<NodeId>& neighbors(NodeId id) const;
    std::size_t edge_count() const;

    /// Each undirected edge once, as (lower, higher).
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    bool operator==(const Graph&) const = default;

private:
    std::map<NodeId, std::set<NodeId>> adjacency_;
};

/// The map: nodes kept sorted by id, the neighborhood graph, and the competition counter.
class SomModel {
public:
    SomModel() = default;
    SomModel(std::size_t dim, Params params);

    std::size_t dim() const noexcept { return dim_; }
    const Params& params() const noexcept { return params_; }
    Phase phase() const noexcept { return phase_; }
    void set_phase(Phase phase) noexcept { phase_ = phase; }

    /// Competitions since the last removal reset.
    std::uint64_t nwins() const noexcept { return nwins_; }
    void set_nwins(std::uint64_t n) noexcept { nwins_ = n; }

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    bool full() const noexcept { return nodes_.size() >= params_.n_max; }
    bool insertion_permitted() const noexcept { return phase_ == Phase::organization; }

    std::span<const Node> nodes() const noexcept { return nodes_; }
    std::span<Node> nodes() noexcept { return nodes_; }

    /// Throws ContractViolation for an unknown id.
    Node& node(NodeId id);
    const Node& node(NodeId id) const;
    bool contains(NodeId id) const;

    /// Appends a copy of `prototype` under a fresh id; throws ContractViolation when full
    /// or on a dimension mismatch.
    NodeId add_node(Node prototype);
    void remove_node(NodeId id);

    Graph& graph() noexcept { return graph_; }
    const Graph& graph() const noexcept { return graph_; }

    std::uint32_t next_id() const noexcept { return next_id_; }

    /// Names for class ids; informational, carried through serialization.
    std::vector<std::string> class_names;

    bool operator==(const SomModel&) const = default;

private:
    friend SomModel model_from_parts(std::size_t, Params, Phase, std::uint64_t, std::uint32_t,
                                     std::vector<Node>, Graph);

    std::size_t dim_ = 0;
    Params params_{};
    Phase phase_ = Phase::organization;
    std::uint64_t nwins_ = 0;
    std::uint32_t next_id_ = 0;
    std::vector<Node> nodes_;
    Graph graph_;
};

/// Reassembles a model from stored fields (used by deserialization); validates invariants.
SomModel model_from_parts(std::size_t dim, Params params, Phase phase, std::uint64_t nwins,
                          std::uint32_t next_id, std::vector<Node> nodes, Graph graph);

/// Id of the most activated node; ties go to the lowest id.
NodeId find_winner(const SomModel& model, std::span<const double> x);

/// Most activated node other than the global winner whose class is absent or equal to `label`.
std::optional<NodeId> find_next_winner(const SomModel& model, std::span<const double> x,
                                       ClassId label);

/// Whether two nodes may share an edge: relevance dissimilarity below minwd and compatible classes.
bool neighborhood_rule(const Node& a, const Node& b, double minwd);

/// Rebuilds every edge incident to `id` from the neighborhood rule.
void update_connections(SomModel& model, NodeId id);

/// Rebuilds the whole graph from the neighborhood rule.
void rebuild_connections(SomModel& model);

}  // namespace altsssom
