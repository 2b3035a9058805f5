#include "altsssom/learning.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "altsssom/errors.hpp"
#include "altsssom/node_math.hpp"

namespace altsssom {

const char* to_string(StepKind kind) noexcept {
    switch (kind) {
        case StepKind::updated_winner: return "updated_winner";
        case StepKind::created_node: return "created_node";
        case StepKind::duplicated_node: return "duplicated_node";
        case StepKind::relevance_only: return "relevance_only";
    }
    return "unknown";
}

namespace {

void require_trainable(const SomModel& model, std::span<const double> x) {
    require(!model.empty(), "training step on an empty map");
    require(model.phase() != Phase::inference, "training step on a finished map");
    require(x.size() == model.dim(), "pattern dimension does not match the map");
}

// Moves `id` with e_b and each of its neighbors with e_n.
void update_with_neighbors(SomModel& model, NodeId id, std::span<const double> x) {
    const Params& p = model.params();
    update_node(model.node(id), x, p.e_b, p);
    for (NodeId peer : model.graph().neighbors(id)) update_node(model.node(peer), x, p.e_n, p);
}

double inserted_wins(const SomModel& model) {
    return model.params().lp * static_cast<double>(model.nwins());
}

NodeId insert_at(SomModel& model, std::span<const double> x, std::optional<ClassId> label) {
    Node node = Node::fresh(NodeId{}, x);
    node.class_label = label;
    node.wins = inserted_wins(model);
    const NodeId id = model.add_node(std::move(node));
    update_connections(model, id);
    return id;
}

}  // namespace

TrainStepOutcome unsupervised_step(SomModel& model, std::span<const double> x) {
    require_trainable(model, x);
    const Params& p = model.params();
    const NodeId s1 = find_winner(model, x);
    const bool accepted = acceptance(x, model.node(s1), p);

    if (accepted && !model.full()) {
        update_with_neighbors(model, s1, x);
        model.node(s1).wins += 1.0;
        return {StepKind::updated_winner, s1, std::nullopt};
    }
    if (!accepted && model.insertion_permitted() && !model.full()) {
        const NodeId created = insert_at(model, x, std::nullopt);
        update_relevances(model.node(s1), x, p);
        return {StepKind::created_node, s1, created};
    }
    update_relevances(model.node(s1), x, p);
    return {StepKind::relevance_only, s1, std::nullopt};
}

TrainStepOutcome supervised_step(SomModel& model, std::span<const double> x, ClassId label) {
    require_trainable(model, x);
    const Params& p = model.params();
    const NodeId s1 = find_winner(model, x);
    const std::optional<ClassId> s1_class = model.node(s1).class_label;

    if (!s1_class || *s1_class == label) {
        const bool accepted = acceptance(x, model.node(s1), p);
        if (!accepted && model.insertion_permitted() && !model.full()) {
            const NodeId created = insert_at(model, x, label);
            update_relevances(model.node(s1), x, p);
            return {StepKind::created_node, s1, created};
        }
        if (accepted) {
            update_with_neighbors(model, s1, x);
            model.node(s1).class_label = label;
            update_connections(model, s1);
            model.node(s1).wins += 1.0;
            return {StepKind::updated_winner, s1, std::nullopt};
        }
        update_relevances(model.node(s1), x, p);
        return {StepKind::relevance_only, s1, std::nullopt};
    }

    if (const std::optional<NodeId> s2 = find_next_winner(model, x, label)) {
        StepKind kind = StepKind::relevance_only;
        if (acceptance(x, model.node(*s2), p) && !model.full()) {
            update_with_neighbors(model, *s2, x);
            model.node(*s2).class_label = label;
            update_connections(model, *s2);
            kind = StepKind::updated_winner;
        } else {
            update_relevances(model.node(*s2), x, p);
        }
        model.node(*s2).wins += 1.0;
        return {kind, *s2, std::nullopt};
    }

    if (model.insertion_permitted() && !model.full()) {
        Node copy = model.node(s1);
        copy.t = 0;
        copy.class_label = label;
        copy.wins = inserted_wins(model);
        const NodeId created = model.add_node(std::move(copy));
        update_connections(model, created);
        return {StepKind::duplicated_node, s1, created};
    }
    update_relevances(model.node(s1), x, p);
    return {StepKind::relevance_only, s1, std::nullopt};
}

void removal_reset(SomModel& model) {
    if (!model.empty()) {
        const double threshold = model.params().lp * static_cast<double>(model.params().age_wins);
        const auto nodes = model.nodes();
        // max_element returns the first maximum, i.e. the lowest id among ties.
        const NodeId keeper =
            std::max_element(nodes.begin(), nodes.end(),
                             [](const Node& a, const Node& b) { return a.wins < b.wins; })
                ->id;
        std::vector<NodeId> doomed;
        for (const Node& n : nodes) {
            if (n.id != keeper && n.wins < threshold) doomed.push_back(n.id);
        }
        for (NodeId id : doomed) model.remove_node(id);
        rebuild_connections(model);
        for (Node& n : model.nodes()) n.wins = 0.0;
    }
    model.set_nwins(0);
}

namespace {

class Presenter {
public:
    Presenter(SomModel& model, const Dataset& data, const FitOptions& options)
        : model_(model), data_(data), options_(options) {}

    // Returns true when this presentation triggered a removal reset.
    bool present(std::size_t row) {
        model_.set_nwins(model_.nwins() + 1);
        const auto x = data_.features.row(row);
        const TrainStepOutcome outcome =
            data_.visible[row] ? supervised_step(model_, x, *data_.labels[row]) : unsupervised_step(model_, x);
        if (options_.observer) options_.observer(model_, outcome);
        if (model_.nwins() >= model_.params().age_wins) {
            removal_reset(model_);
            return true;
        }
        return false;
    }

private:
    SomModel& model_;
    const Dataset& data_;
    const FitOptions& options_;
};

}  // namespace

SomModel fit(const Dataset& data, const Params& params, std::uint64_t seed, const FitOptions& options) {
    require(data.size() > 0, "cannot fit an empty dataset");
    data.check();
    validate(params);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    SomModel model(data.dim(), params);
    model.class_names = data.class_names;
    {
        const std::size_t first = order.front();
        Node seed_node = Node::fresh(NodeId{}, data.features.row(first));
        if (data.visible[first]) seed_node.class_label = data.labels[first];
        model.add_node(std::move(seed_node));
    }

    Presenter presenter(model, data, options);
    model.set_phase(Phase::organization);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        if (epoch > 0) std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t row : order) presenter.present(row);
    }

    // Convergence: no insertion; finish the current reset cycle, but present at most one full
    // pass. A pass that ends before the cycle does closes it with a reset.
    model.set_phase(Phase::convergence);
    std::shuffle(order.begin(), order.end(), rng);
    bool reset = false;
    for (std::size_t row : order) {
        if (presenter.present(row)) {
            reset = true;
            break;
        }
    }
    if (!reset) removal_reset(model);

    model.set_phase(Phase::inference);
    return model;
}

NodeId assign_cluster(const SomModel& model, std::span<const double> x) {
    return find_winner(model, x);
}

std::optional<ClassId> predict_class(const SomModel& model, std::span<const double> x) {
    const NodeId winner = find_winner(model, x);
    if (const auto& label = model.node(winner).class_label) return label;
    const double eps = model.params().eps_act;
    std::optional<ClassId> best;
    double best_act = -1.0;
    for (const Node& n : model.nodes()) {
        if (!n.class_label) continue;
        const double a = activation(x, n, eps);
        if (a > best_act) {
            best_act = a;
            best = n.class_label;
        }
    }
    return best;
}

}  // namespace altsssom
