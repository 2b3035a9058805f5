#include <doctest.h>

#include <random>
#include <vector>

#include "altsssom/errors.hpp"
#include "altsssom/model.hpp"
#include "altsssom/node_math.hpp"
#include "oracles.hpp"

using namespace altsssom;

namespace {

SomModel two_node_map(std::vector<double> a, std::vector<double> b) {
    SomModel m(a.size(), Params{});
    m.add_node(Node::fresh(NodeId{}, a));
    m.add_node(Node::fresh(NodeId{}, b));
    return m;
}

}  // namespace

TEST_CASE("winner search") {
    SomModel one(2, Params{});
    CHECK_THROWS_AS(find_winner(one, std::vector<double>{0, 0}), ContractViolation);
    one.add_node(Node::fresh(NodeId{}, std::vector<double>{0.1, 0.1}));
    CHECK(find_winner(one, std::vector<double>{0.9, 0.9}) == NodeId{0});

    const SomModel two = two_node_map({0.2, 0.2}, {0.7, 0.7});
    CHECK(find_winner(two, std::vector<double>{0.7, 0.7}) == NodeId{1});
    const SomModel same = two_node_map({0.4, 0.4}, {0.4, 0.4});
    CHECK(find_winner(same, std::vector<double>{0.1, 0.9}) == NodeId{0});
}

TEST_CASE("winner search agrees with exhaustive search") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(1, 20), dims(1, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int disagreements = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = dims(rng);
        const SomModel map = testing::random_map(rng, m, size(rng));
        std::vector<double> x(m);
        for (double& v : x) v = unit(rng);
        if (find_winner(map, x) != testing::brute_force_winner(map, x)) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("next winner") {
    SomModel m(2, Params{});
    Node a = Node::fresh(NodeId{}, std::vector<double>{0.1, 0.1});
    a.class_label = 0;
    m.add_node(a);
    CHECK_FALSE(find_next_winner(m, std::vector<double>{0.1, 0.1}, 1).has_value());

    Node b = Node::fresh(NodeId{}, std::vector<double>{0.5, 0.5});
    b.class_label = 1;
    m.add_node(b);
    m.add_node(Node::fresh(NodeId{}, std::vector<double>{0.9, 0.9}));
    // s1 is the class-0 node; candidates are the class-1 node and the unlabeled one
    CHECK(find_next_winner(m, std::vector<double>{0.1, 0.1}, 1) == NodeId{1});
    CHECK(find_next_winner(m, std::vector<double>{0.1, 0.1}, 2) == NodeId{2});
    CHECK(find_next_winner(m, std::vector<double>{0.1, 0.1}, 0) == NodeId{2});

    SUBCASE("shared label: next highest activation") {
        SomModel s(1, Params{});
        for (double c : {0.1, 0.3, 0.6}) {
            Node n = Node::fresh(NodeId{}, std::vector<double>{c});
            n.class_label = 4;
            s.add_node(n);
        }
        CHECK(find_next_winner(s, std::vector<double>{0.12}, 4) == NodeId{1});
    }
}

TEST_CASE("graph") {
    Graph g;
    g.connect(NodeId{1}, NodeId{2});
    g.connect(NodeId{2}, NodeId{3});
    CHECK_THROWS_AS(g.connect(NodeId{3}, NodeId{3}), ContractViolation);
    CHECK(g.connected(NodeId{2}, NodeId{1}));
    CHECK_FALSE(g.connected(NodeId{3}, NodeId{3}));
    CHECK(g.edge_count() == 2);
    g.erase(NodeId{2});
    CHECK(g.edge_count() == 0);
    CHECK(g.neighbors(NodeId{9}).empty());
}

TEST_CASE("model bookkeeping") {
    Params p;
    p.n_max = 2;
    SomModel m(2, p);
    CHECK_THROWS_AS(m.add_node(Node::fresh(NodeId{}, std::vector<double>{0.1})), ContractViolation);
    const NodeId a = m.add_node(Node::fresh(NodeId{}, std::vector<double>{0.1, 0.1}));
    const NodeId b = m.add_node(Node::fresh(NodeId{}, std::vector<double>{0.2, 0.2}));
    CHECK(m.full());
    CHECK_THROWS_AS(m.add_node(Node::fresh(NodeId{}, std::vector<double>{0.3, 0.3})), ContractViolation);
    m.graph().connect(a, b);
    m.remove_node(a);
    CHECK(m.size() == 1);
    CHECK(m.graph().edge_count() == 0);
    CHECK_FALSE(m.contains(a));
    CHECK_THROWS_AS(m.node(a), ContractViolation);
    // ids are never reused
    CHECK(m.add_node(Node::fresh(NodeId{}, std::vector<double>{0.3, 0.3})) == NodeId{2});
    CHECK(m.insertion_permitted());
    m.set_phase(Phase::convergence);
    CHECK_FALSE(m.insertion_permitted());
}

TEST_CASE("neighborhood rule") {
    Params p;
    p.minwd = 0.5;
    SomModel m(3, p);
    Node a = Node::fresh(NodeId{}, std::vector<double>{0.1, 0.1, 0.1});
    Node b = Node::fresh(NodeId{}, std::vector<double>{0.9, 0.9, 0.9});
    CHECK(neighborhood_rule(a, b, 0.5));
    b.relevance = {1e-3, 1e-3, 1e-3};
    CHECK_FALSE(neighborhood_rule(a, b, 0.5));
    b.relevance = a.relevance;
    a.class_label = 0;
    CHECK(neighborhood_rule(a, b, 0.5));
    b.class_label = 1;
    CHECK_FALSE(neighborhood_rule(a, b, 0.5));
    CHECK_FALSE(neighborhood_rule(a, a, 0.0));  // strict threshold

    SUBCASE("update and rebuild agree") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            SomModel map = testing::random_map(rng, 3, 8);
            SomModel incremental = map;
            rebuild_connections(map);
            for (const Node& n : incremental.nodes()) update_connections(incremental, n.id);
            CHECK(map.graph() == incremental.graph());
            for (auto [x, y] : map.graph().edges()) {
                CHECK(relevance_dissimilarity(map.node(x), map.node(y)) < map.params().minwd);
                CHECK(map.graph().connected(y, x));
            }
        }
    }
}
