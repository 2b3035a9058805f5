#include "altsssom/model.hpp"

#include <algorithm>

#include "altsssom/errors.hpp"
#include "altsssom/node_math.hpp"

namespace altsssom {

const char* to_string(Phase phase) noexcept {
    switch (phase) {
        case Phase::organization: return "organization";
        case Phase::convergence: return "convergence";
        case Phase::inference: return "inference";
    }
    return "unknown";
}

std::optional<Phase> phase_from_string(std::string_view name) noexcept {
    if (name == "organization") return Phase::organization;
    if (name == "convergence") return Phase::convergence;
    if (name == "inference") return Phase::inference;
    return std::nullopt;
}

// --- Graph -------------------------------------------------------------------------------------

void Graph::connect(NodeId a, NodeId b) {
    require(a != b, "a node cannot be connected to itself");
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
}

void Graph::disconnect(NodeId a, NodeId b) {
    auto drop = [this](NodeId from, NodeId to) {
        auto it = adjacency_.find(from);
        if (it == adjacency_.end()) return;
        it->second.erase(to);
        if (it->second.empty()) adjacency_.erase(it);
    };
    drop(a, b);
    drop(b, a);
}

void Graph::erase(NodeId id) {
    auto it = adjacency_.find(id);
    if (it == adjacency_.end()) return;
    const std::set<NodeId> peers = it->second;
    for (NodeId peer : peers) disconnect(id, peer);
}

bool Graph::connected(NodeId a, NodeId b) const {
    auto it = adjacency_.find(a);
    return it != adjacency_.end() && it->second.contains(b);
}

const std::set<NodeId>& Graph::neighbors(NodeId id) const {
    static const std::set<NodeId> none;
    auto it = adjacency_.find(id);
    return it == adjacency_.end() ? none : it->second;
}

std::size_t Graph::edge_count() const {
    std::size_t degree_sum = 0;
    for (const auto& [id, peers] : adjacency_) degree_sum += peers.size();
    return degree_sum / 2;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (const auto& [id, peers] : adjacency_) {
        for (NodeId peer : peers) {
            if (id < peer) out.emplace_back(id, peer);
        }
    }
    return out;
}

// --- SomModel ----------------------------------------------------------------------------------

SomModel::SomModel(std::size_t dim, Params params) : dim_(dim), params_(params) {
    validate(params_);
}

namespace {

template <typename Nodes>
auto locate(Nodes& nodes, NodeId id) {
    return std::lower_bound(nodes.begin(), nodes.end(), id,
                            [](const Node& n, NodeId key) { return n.id < key; });
}

}  // namespace

Node& SomModel::node(NodeId id) {
    auto it = locate(nodes_, id);
    if (it == nodes_.end() || it->id != id) {
        detail::contract_failure("unknown node id " + std::to_string(to_underlying(id)));
    }
    return *it;
}

const Node& SomModel::node(NodeId id) const {
    auto it = locate(nodes_, id);
    if (it == nodes_.end() || it->id != id) {
        detail::contract_failure("unknown node id " + std::to_string(to_underlying(id)));
    }
    return *it;
}

bool SomModel::contains(NodeId id) const {
    auto it = locate(nodes_, id);
    return it != nodes_.end() && it->id == id;
}

NodeId SomModel::add_node(Node prototype) {
    require(!full(), "map already holds n_max nodes");
    require(prototype.dim() == dim_ && prototype.relevance.size() == dim_ &&
                prototype.delta.size() == dim_ && prototype.delta_hat.size() == dim_,
            "node dimension does not match the map");
    prototype.id = NodeId{next_id_++};
    nodes_.push_back(std::move(prototype));
    return nodes_.back().id;
}

void SomModel::remove_node(NodeId id) {
    auto it = locate(nodes_, id);
    require(it != nodes_.end() && it->id == id, "cannot remove an unknown node");
    graph_.erase(id);
    nodes_.erase(it);
}

SomModel model_from_parts(std::size_t dim, Params params, Phase phase, std::uint64_t nwins,
                          std::uint32_t next_id, std::vector<Node> nodes, Graph graph) {
    SomModel model(dim, params);
    model.phase_ = phase;
    model.nwins_ = nwins;
    require(nodes.size() <= params.n_max, "stored model exceeds n_max");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        require(n.dim() == dim && n.relevance.size() == dim && n.delta.size() == dim &&
                    n.delta_hat.size() == dim,
                "stored node has the wrong dimension");
        require(i == 0 || nodes[i - 1].id < n.id, "stored node ids must be strictly increasing");
        require(to_underlying(n.id) < next_id, "stored node id is not below next_id");
    }
    model.nodes_ = std::move(nodes);
    for (auto [a, b] : graph.edges()) {
        require(model.contains(a) && model.contains(b), "stored edge references an unknown node");
    }
    model.graph_ = std::move(graph);
    model.next_id_ = next_id;
    return model;
}

// --- Competition and neighborhood --------------------------------------------------------------

NodeId find_winner(const SomModel& model, std::span<const double> x) {
    require(!model.empty(), "winner search on an empty map");
    const double eps = model.params().eps_act;
    const auto nodes = model.nodes();
    NodeId best = nodes.front().id;
    double best_act = activation(x, nodes.front(), eps);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double a = activation(x, nodes[i], eps);
        if (a > best_act) {  // strict: ids ascend, so ties keep the lower id
            best_act = a;
            best = nodes[i].id;
        }
    }
    return best;
}

std::optional<NodeId> find_next_winner(const SomModel& model, std::span<const double> x,
                                       ClassId label) {
    const NodeId s1 = find_winner(model, x);
    const double eps = model.params().eps_act;
    std::optional<NodeId> best;
    double best_act = -1.0;
    for (const Node& n : model.nodes()) {
        if (n.id == s1) continue;
        if (n.class_label && *n.class_label != label) continue;
        const double a = activation(x, n, eps);
        if (a > best_act) {
            best_act = a;
            best = n.id;
        }
    }
    return best;
}

bool neighborhood_rule(const Node& a, const Node& b, double minwd) {
    if (a.class_label && b.class_label && *a.class_label != *b.class_label) return false;
    return relevance_dissimilarity(a, b) < minwd;
}

void update_connections(SomModel& model, NodeId id) {
    const Node& self = model.node(id);
    const double minwd = model.params().minwd;
    Graph& graph = model.graph();
    for (const Node& other : model.nodes()) {
        if (other.id == id) continue;
        if (neighborhood_rule(self, other, minwd)) {
            graph.connect(id, other.id);
        } else {
            graph.disconnect(id, other.id);
        }
    }
}

void rebuild_connections(SomModel& model) {
    Graph& graph = model.graph();
    graph.clear();
    const auto nodes = model.nodes();
    const double minwd = model.params().minwd;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            if (neighborhood_rule(nodes[i], nodes[j], minwd)) graph.connect(nodes[i].id, nodes[j].id);
        }
    }
}

}  // namespace altsssom
