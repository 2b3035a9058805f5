#include "altsssom/node_math.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "altsssom/errors.hpp"

namespace altsssom {

Node Node::fresh(NodeId id, std::span<const double> position) {
    const std::size_t m = position.size();
    Node node;
    node.id = id;
    node.center.assign(position.begin(), position.end());
    node.relevance.assign(m, 1.0);
    node.delta.assign(m, 0.0);
    node.delta_hat.assign(m, 0.0);
    return node;
}

namespace {

void require_dim(std::span<const double> x, const Node& node) {
    if (x.size() != node.dim()) {
        detail::contract_failure("pattern has " + std::to_string(x.size()) +
                                 " dimensions, node has " + std::to_string(node.dim()));
    }
}

}  // namespace

double weighted_distance(std::span<const double> x, const Node& node) {
    require_dim(x, node);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - node.center[i];
        sum += node.relevance[i] * d * d;
    }
    return std::sqrt(sum);
}

double activation(std::span<const double> x, const Node& node, double eps_act) {
    const double distance = weighted_distance(x, node);
    const double total = std::accumulate(node.relevance.begin(), node.relevance.end(), 0.0);
    return total / (total + distance + eps_act);
}

void relevance_from_distances(std::span<const double> delta_hat, double s, std::span<double> out) {
    require(out.size() == delta_hat.size(), "relevance output has the wrong length");
    if (delta_hat.empty()) return;
    const auto [lo, hi] = std::minmax_element(delta_hat.begin(), delta_hat.end());
    const double min = *lo;
    const double max = *hi;
    if (min == max) {
        std::fill(out.begin(), out.end(), 1.0);
        return;
    }
    const double mean =
        std::accumulate(delta_hat.begin(), delta_hat.end(), 0.0) / static_cast<double>(delta_hat.size());
    const double scale = s * (max - min);
    for (std::size_t i = 0; i < delta_hat.size(); ++i) {
        out[i] = 1.0 / (1.0 + std::exp((mean - delta_hat[i]) / scale));
    }
}

void update_relevances(Node& node, std::span<const double> x, const Params& p) {
    require_dim(x, node);
    node.t += 1;
    const double correction = 1.0 - std::pow(p.beta, static_cast<double>(node.t));
    for (std::size_t i = 0; i < x.size(); ++i) {
        node.delta[i] = p.beta * node.delta[i] + (1.0 - p.beta) * std::abs(x[i] - node.center[i]);
        node.delta_hat[i] = node.delta[i] / correction;
    }
    relevance_from_distances(node.delta_hat, p.s, node.relevance);
}

std::vector<double> relaxed_variance(const Node& node, const Params& p) {
    std::vector<double> v(node.dim());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::max(node.delta_hat[i], p.var_floor) / node.relevance[i];
    }
    return v;
}

bool acceptance(std::span<const double> x, const Node& node, const Params& p) {
    require_dim(x, node);
    if (node.t == 0) return true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = std::max(node.delta_hat[i], p.var_floor) / node.relevance[i];
        const double c = node.center[i];
        if (!(x[i] > c - v && x[i] < c + v)) return false;
    }
    return true;
}

void update_node(Node& node, std::span<const double> x, double lr, const Params& p) {
    update_relevances(node, x, p);
    for (std::size_t i = 0; i < x.size(); ++i) {
        node.center[i] = (1.0 - lr) * node.center[i] + lr * x[i];
    }
}

double relevance_dissimilarity(const Node& a, const Node& b) {
    require(a.dim() == b.dim(), "nodes have different dimensions");
    if (a.dim() == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) sum += std::abs(a.relevance[i] - b.relevance[i]);
    return sum / static_cast<double>(a.dim());
}

}  // namespace altsssom
