#pragma once

#include <span>
#include <vector>

#include "altsssom/node.hpp"
#include "altsssom/params.hpp"

namespace altsssom {

/// sqrt(sum_i relevance_i * (x_i - center_i)^2). Throws ContractViolation on a dimension mismatch.
double weighted_distance(std::span<const double> x, const Node& node);

/// Radial activation sum(w) / (sum(w) + D_w(x, c) + eps_act), in (0, 1].
double activation(std::span<const double> x, const Node& node, double eps_act);

/// Relevance from the bias-corrected distances through an inverse logistic with slope `s`.
/// All-ones when every component of `delta_hat` is equal.
void relevance_from_distances(std::span<const double> delta_hat, double s, std::span<double> out);

/// One step of the moving-average statistics: t += 1, delta, delta_hat, then relevance.
void update_relevances(Node& node, std::span<const double> x, const Params& p);

/// Per-dimension half-width of the acceptance box: max(delta_hat, var_floor) / relevance.
std::vector<double> relaxed_variance(const Node& node, const Params& p);

/// Whether `x` falls strictly inside the node's relaxed-variance box.
/// A node that has never been updated (t == 0) accepts every pattern.
bool acceptance(std::span<const double> x, const Node& node, const Params& p);

/// update_relevances followed by center += lr * (x - center).
void update_node(Node& node, std::span<const double> x, double lr, const Params& p);

/// Mean absolute difference of two relevance vectors.
double relevance_dissimilarity(const Node& a, const Node& b);

}  // namespace altsssom
