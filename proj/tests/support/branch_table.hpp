#pragma once

// Table of training-step scenarios covering every branch of the unsupervised and supervised
// steps. Each case states the expected outcome kind and builds the expected post-step map by
// applying the per-node primitives in pseudocode order to a copy of the initial map.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "altsssom/learning.hpp"
#include "altsssom/node_math.hpp"

namespace altsssom::testing {

struct BranchResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace branch_detail {

inline Params table_params(std::size_t n_max) {
    Params p;
    p.lp = 0.002;
    p.beta = 0.9;
    p.age_wins = 100;
    p.e_b = 0.1;
    p.e_n = 0.05;
    p.s = 0.05;
    p.minwd = 0.25;
    p.n_max = n_max;
    return p;
}

// A node that has seen `t` updates and whose acceptance box has half-width `spread` everywhere.
inline Node trained(std::vector<double> center, double spread, const Params& p, std::uint64_t t = 5) {
    Node n = Node::fresh(NodeId{}, center);
    n.t = t;
    for (std::size_t i = 0; i < n.dim(); ++i) {
        n.delta_hat[i] = spread;
        n.delta[i] = spread * (1.0 - std::pow(p.beta, static_cast<double>(t)));
    }
    return n;
}

inline const std::vector<double> kNearA{0.22, 0.21};  // inside A's box
inline const std::vector<double> kFar{0.4, 0.4};      // A wins, outside every trained box

enum class BNode { trained, newborn };

struct Scenario {
    std::size_t n_max = 10;
    Phase phase = Phase::organization;
    std::optional<ClassId> class_a;
    std::optional<BNode> b;  // absent: single-node map
    std::optional<ClassId> class_b;
    std::uint64_t nwins = 7;
};

// A at (0.2, 0.2); optional B at (0.8, 0.8); A and B connected when both exist.
inline SomModel build(const Scenario& sc) {
    const Params p = table_params(sc.n_max);
    SomModel m(2, p);
    Node a = trained({0.2, 0.2}, 0.05, p);
    a.class_label = sc.class_a;
    a.wins = 3.0;
    const NodeId ida = m.add_node(a);
    if (sc.b) {
        Node b = *sc.b == BNode::trained ? trained({0.8, 0.8}, 0.05, p) : Node::fresh(NodeId{}, std::vector<double>{0.8, 0.8});
        b.class_label = sc.class_b;
        b.wins = 2.0;
        const NodeId idb = m.add_node(b);
        m.graph().connect(ida, idb);
    }
    m.set_phase(sc.phase);
    m.set_nwins(sc.nwins);
    return m;
}

constexpr NodeId kA{0};
constexpr NodeId kB{1};
constexpr NodeId kNew{2};

}  // namespace branch_detail

struct BranchCase {
    std::string name;
    branch_detail::Scenario scenario;
    std::vector<double> x;
    std::optional<ClassId> label;  // absent: unsupervised step
    StepKind kind;
    NodeId winner;
    std::optional<NodeId> created;
    std::function<void(SomModel&)> expected;  // applies the pseudocode to a copy of the start map
    std::function<std::string(const SomModel&)> extra;  // further checks; empty string when fine
};

inline std::vector<BranchCase> branch_cases() {
    using namespace branch_detail;
    const auto move_with_neighbor = [](NodeId s, NodeId peer) {
        return [s, peer](SomModel& m) {
            const Params& p = m.params();
            update_node(m.node(s), kNearA, p.e_b, p);
            update_node(m.node(peer), kNearA, p.e_n, p);
        };
    };
    const auto touch = [](NodeId s, const std::vector<double>& x) {
        return [s, x](SomModel& m) { update_relevances(m.node(s), x, m.params()); };
    };
    const auto ok = [](const SomModel&) { return std::string{}; };

    std::vector<BranchCase> cases;
    const BNode tr = BNode::trained, nb = BNode::newborn;

    // Unsupervised step.
    cases.push_back({"unsup: accept, room -> winner and neighbor move, wins+1", {10, Phase::organization, {}, tr, {}},
                     kNearA, {}, StepKind::updated_winner, kA, {},
                     [=](SomModel& m) { move_with_neighbor(kA, kB)(m); m.node(kA).wins += 1; }, ok});
    cases.push_back({"unsup: reject, organization, room -> insert at x", {10, Phase::organization, {}, tr, {}},
                     kFar, {}, StepKind::created_node, kA, kNew,
                     [=](SomModel& m) {
                         Node n = Node::fresh(NodeId{}, kFar);
                         n.wins = m.params().lp * 7.0;
                         m.add_node(n);
                         touch(kA, kFar)(m);
                     },
                     ok});
    cases.push_back({"unsup: reject, convergence -> relevances only", {10, Phase::convergence, {}, tr, {}},
                     kFar, {}, StepKind::relevance_only, kA, {}, touch(kA, kFar), ok});
    cases.push_back({"unsup: reject, full -> relevances only", {2, Phase::organization, {}, tr, {}},
                     kFar, {}, StepKind::relevance_only, kA, {}, touch(kA, kFar), ok});
    cases.push_back({"unsup: accept, full -> relevances only", {2, Phase::organization, {}, tr, {}},
                     kNearA, {}, StepKind::relevance_only, kA, {}, touch(kA, kNearA), ok});

    // Supervised step, winner unlabeled or labeled with the pattern's class.
    cases.push_back({"sup: winner unlabeled, accept -> move, adopt label, wins+1", {10, Phase::organization, {}, tr, {}},
                     kNearA, 0, StepKind::updated_winner, kA, {},
                     [=](SomModel& m) {
                         move_with_neighbor(kA, kB)(m);
                         m.node(kA).class_label = 0;
                         m.node(kA).wins += 1;
                     },
                     ok});
    cases.push_back({"sup: winner same class, accept, full -> still moves", {2, Phase::organization, 0, tr, 0},
                     kNearA, 0, StepKind::updated_winner, kA, {},
                     [=](SomModel& m) { move_with_neighbor(kA, kB)(m); m.node(kA).wins += 1; }, ok});
    cases.push_back({"sup: winner unlabeled, reject, room -> insert labeled node", {10, Phase::organization, {}, tr, {}},
                     kFar, 1, StepKind::created_node, kA, kNew,
                     [=](SomModel& m) {
                         Node n = Node::fresh(NodeId{}, kFar);
                         n.wins = m.params().lp * 7.0;
                         n.class_label = 1;
                         m.add_node(n);
                         touch(kA, kFar)(m);
                     },
                     ok});
    cases.push_back({"sup: winner same class, reject, full -> relevances only", {2, Phase::organization, 1, tr, {}},
                     kFar, 1, StepKind::relevance_only, kA, {}, touch(kA, kFar), ok});
    cases.push_back({"sup: winner same class, reject, convergence -> relevances only", {10, Phase::convergence, 1, tr, {}},
                     kFar, 1, StepKind::relevance_only, kA, {}, touch(kA, kFar), ok});

    // Supervised step, winner labeled with another class.
    cases.push_back({"sup: class clash, s2 accepts, room -> s2 moves, adopts label, wins+1",
                     {10, Phase::organization, 1, nb, {}}, kNearA, 0, StepKind::updated_winner, kB, {},
                     [=](SomModel& m) {
                         const Params& p = m.params();
                         update_node(m.node(kB), kNearA, p.e_b, p);
                         update_node(m.node(kA), kNearA, p.e_n, p);
                         m.node(kB).class_label = 0;
                         m.node(kB).wins += 1;
                     },
                     [](const SomModel& m) {
                         return m.graph().connected(kA, kB) ? std::string("edge between clashing classes kept")
                                                            : std::string{};
                     }});
    cases.push_back({"sup: class clash, s2 rejects -> s2 relevances only, wins+1", {10, Phase::organization, 1, tr, {}},
                     kNearA, 0, StepKind::relevance_only, kB, {},
                     [=](SomModel& m) { touch(kB, kNearA)(m); m.node(kB).wins += 1; }, ok});
    cases.push_back({"sup: class clash, s2 accepts, full -> s2 relevances only, wins+1", {2, Phase::organization, 1, nb, {}},
                     kNearA, 0, StepKind::relevance_only, kB, {},
                     [=](SomModel& m) { touch(kB, kNearA)(m); m.node(kB).wins += 1; }, ok});
    cases.push_back({"sup: class clash, no s2, room -> duplicate winner", {10, Phase::organization, 1, tr, 1},
                     kNearA, 0, StepKind::duplicated_node, kA, kNew,
                     [=](SomModel& m) {
                         Node copy = m.node(kA);
                         copy.t = 0;
                         copy.class_label = 0;
                         copy.wins = m.params().lp * 7.0;
                         m.add_node(copy);
                     },
                     [](const SomModel& m) {
                         return m.graph().connected(kA, kNew) ? std::string("duplicate linked to a clashing class")
                                                              : std::string{};
                     }});
    cases.push_back({"sup: class clash, no s2, full -> winner relevances only", {2, Phase::organization, 1, tr, 1},
                     kNearA, 0, StepKind::relevance_only, kA, {}, touch(kA, kNearA), ok});
    cases.push_back({"sup: class clash, no s2, convergence -> winner relevances only", {10, Phase::convergence, 1, {}, {}},
                     kNearA, 0, StepKind::relevance_only, kA, {}, touch(kA, kNearA), ok});
    return cases;
}

inline BranchResult run_branch_case(const BranchCase& c) {
    BranchResult r{c.name, false, {}};
    SomModel actual = branch_detail::build(c.scenario);
    SomModel expected = actual;
    const TrainStepOutcome out = c.label ? supervised_step(actual, c.x, *c.label) : unsupervised_step(actual, c.x);
    c.expected(expected);

    if (out.kind != c.kind) {
        r.detail = std::string("kind ") + to_string(out.kind) + ", expected " + to_string(c.kind);
    } else if (out.winner != c.winner) {
        r.detail = "touched node " + std::to_string(to_underlying(out.winner));
    } else if (out.created != c.created) {
        r.detail = "created id mismatch";
    } else if (actual.size() != expected.size()) {
        r.detail = "node count " + std::to_string(actual.size()) + ", expected " + std::to_string(expected.size());
    } else {
        for (std::size_t i = 0; i < actual.size() && r.detail.empty(); ++i) {
            if (!(actual.nodes()[i] == expected.nodes()[i])) {
                r.detail = "state of node " + std::to_string(to_underlying(actual.nodes()[i].id)) + " differs";
            }
        }
        if (r.detail.empty()) r.detail = c.extra(actual);
    }
    r.passed = r.detail.empty();
    return r;
}

inline std::vector<BranchResult> run_branch_table() {
    std::vector<BranchResult> out;
    for (const BranchCase& c : branch_cases()) out.push_back(run_branch_case(c));
    return out;
}

}  // namespace altsssom::testing
