#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "altsssom/dataset.hpp"
#include "altsssom/model.hpp"

namespace altsssom {

enum class StepKind { updated_winner, created_node, duplicated_node, relevance_only };

const char* to_string(StepKind kind) noexcept;

/// What one training presentation did. `winner` is the node whose statistics were touched
/// (the fallback winner when the supervised step moved past the global winner).
struct TrainStepOutcome {
    StepKind kind = StepKind::relevance_only;
    NodeId winner{};
    std::optional<NodeId> created;

    bool operator==(const TrainStepOutcome&) const = default;
};

TrainStepOutcome unsupervised_step(SomModel& model, std::span<const double> x);
TrainStepOutcome supervised_step(SomModel& model, std::span<const double> x, ClassId label);

/// Drops nodes with wins < lp * age_wins (always keeping the node with most wins, lowest id
/// on ties), rebuilds connections, and zeroes every win counter.
void removal_reset(SomModel& model);

/// Called after every presentation with the model state and what the step did.
using StepObserver = std::function<void(const SomModel&, const TrainStepOutcome&)>;

struct FitOptions {
    StepObserver observer;
};

/// Trains a map on every row of `data`, dispatching supervised steps on rows whose label is
/// visible: `epochs` shuffled passes with insertion, then one more shuffled pass without it that
/// stops at the next removal reset (or ends with one). Deterministic for fixed (data, params, seed).
SomModel fit(const Dataset& data, const Params& params, std::uint64_t seed,
             const FitOptions& options = {});

/// Cluster of `x`: the most activated node. Inference never rejects.
NodeId assign_cluster(const SomModel& model, std::span<const double> x);

/// Class of the winner, else of the most activated labeled node, else nothing.
std::optional<ClassId> predict_class(const SomModel& model, std::span<const double> x);

}  // namespace altsssom
