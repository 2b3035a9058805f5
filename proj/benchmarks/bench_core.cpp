#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "altsssom/dataset.hpp"
#include "altsssom/learning.hpp"
#include "altsssom/metrics.hpp"
#include "altsssom/node_math.hpp"
#include "altsssom/synthetic.hpp"

using namespace altsssom;

namespace {

SomModel random_map(std::size_t nodes, std::size_t dim) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Params p;
    p.n_max = nodes;
    SomModel m(dim, p);
    std::vector<double> c(dim);
    for (std::size_t k = 0; k < nodes; ++k) {
        for (double& v : c) v = u(rng);
        Node n = Node::fresh(NodeId{}, c);
        for (double& w : n.relevance) w = u(rng);
        m.add_node(n);
    }
    return m;
}

void BM_FindWinner(benchmark::State& state) {
    const auto nodes = static_cast<std::size_t>(state.range(0));
    const SomModel m = random_map(nodes, 10);
    const std::vector<double> x(10, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(find_winner(m, x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FindWinner)->Arg(20)->Arg(200);

void BM_UpdateRelevances(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    Node n = Node::fresh(NodeId{}, std::vector<double>(dim, 0.3));
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = static_cast<double>(i) / static_cast<double>(dim);
    const Params p;
    for (auto _ : state) {
        update_relevances(n, x, p);
        benchmark::DoNotOptimize(n.relevance.data());
    }
}
BENCHMARK(BM_UpdateRelevances)->Arg(9)->Arg(33);

void BM_Fit(benchmark::State& state) {
    BlobSpec spec;
    spec.points_per_cluster = 70;
    Dataset data = make_blobs(spec, 3);
    Params p = default_params(data.size());
    p.epochs = static_cast<std::size_t>(state.range(0));
    p.age_wins = 2 * data.size();
    for (auto _ : state) benchmark::DoNotOptimize(fit(data, p, 1).size());
}
BENCHMARK(BM_Fit)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_OptimalAssignment(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> count(0, 100);
    SquareMatrix m(n);
    for (double& v : m.values) v = count(rng);
    for (auto _ : state) benchmark::DoNotOptimize(optimal_assignment(m));
}
BENCHMARK(BM_OptimalAssignment)->Arg(6)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
