#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "corescore/core_score.hpp"
#include "corescore/graph.hpp"

using namespace corescore;

namespace {

WeightedGraph path3() {
    return WeightedGraph::from_edges({{"a", "b", 1.0}, {"b", "c", 1.0}});
}

WeightedGraph star(int leaves) {
    std::vector<LabeledEdge> edges;
    for (int i = 1; i <= leaves; ++i) edges.push_back({"hub", "l" + std::to_string(i), 1.0});
    return WeightedGraph::from_edges(edges);
}

WeightedGraph random_weighted(int n, double density, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (rng.next_double() < density) {
                edges.emplace_back(u, v, 0.1 + rng.next_double());
            }
        }
    }
    return WeightedGraph::from_index_edges(WeightedGraph::numbered_labels(n), edges);
}

/// Exhaustive maximum of R over every arrangement of `values` onto nodes.
double exhaustive_max_r(const WeightedGraph& g, std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double best = -1.0;
    do {
        best = std::max(best, core_quality(g, values));
    } while (std::next_permutation(values.begin(), values.end()));
    return best;
}

/// Ranks of the entries within the sorted order of the vector (values must
/// be distinct); identifies a permutation independent of scaling.
std::vector<int> value_ranks(const std::vector<double>& v) {
    std::vector<int> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return v[static_cast<std::size_t>(a)] < v[static_cast<std::size_t>(b)];
    });
    std::vector<int> rank(v.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
    return rank;
}

}  // namespace

TEST_CASE("local_core_values with alpha 0 is flat at one half") {
    const auto v = local_core_values(100, {0.0, 0.3});
    for (double x : v) REQUIRE(x == 0.5);
}

TEST_CASE("local_core_values matches direct evaluation at the boundary") {
    const auto v = local_core_values(100, {0.5, 0.5});
    REQUIRE(v[50] == Catch::Approx(1.0 / (1.0 + std::exp(-1.0))).margin(1e-9));  // m = 51
}

TEST_CASE("local_core_values with alpha 1 is the sharp step") {
    const auto v = local_core_values(100, {1.0, 0.5});
    for (int m = 1; m <= 49; ++m) REQUIRE(v[static_cast<std::size_t>(m - 1)] == 0.0);
    REQUIRE(v[49] == 0.5);
    for (int m = 51; m <= 100; ++m) REQUIRE(v[static_cast<std::size_t>(m - 1)] == 1.0);
}

TEST_CASE("local_core_values are nondecreasing within the unit interval") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const TransitionParams params{rng.next_double(), rng.next_double()};
        const auto v = local_core_values(1 + rng.next_index(40), params);
        for (std::size_t i = 0; i < v.size(); ++i) {
            REQUIRE(v[i] >= 0.0);
            REQUIRE(v[i] <= 1.0);
            if (i > 0) REQUIRE(v[i] >= v[i - 1]);
        }
    }
}

TEST_CASE("core_quality counts ordered pairs") {
    REQUIRE(core_quality(path3(), {0.5, 1.0, 0.5}) == Catch::Approx(2.0));
    REQUIRE(core_quality(path3(), {0.0, 0.0, 0.0}) == 0.0);
    const WeightedGraph k2 = WeightedGraph::from_edges({{"a", "b", 1.0}});
    REQUIRE(core_quality(k2, {1.0, 1.0}) == Catch::Approx(2.0));
}

TEST_CASE("anneal gives the largest value to the star hub") {
    const WeightedGraph g = star(5);
    const TransitionParams params{0.9, 0.8};
    AnnealSchedule schedule;
    schedule.seed = 7;
    schedule.restarts = 3;
    const CoreAssignment a = anneal_assignment(g, params, schedule);
    const auto values = local_core_values(6, params);
    REQUIRE(a.assigned_values[0] == values.back());
    REQUIRE(a.core_quality == Catch::Approx(exhaustive_max_r(g, values)).margin(1e-12));
}

TEST_CASE("anneal with alpha 0 short-circuits to the identity") {
    const WeightedGraph g = random_weighted(8, 0.5, 3);
    AnnealSchedule schedule;
    schedule.seed = 11;
    const CoreAssignment a = anneal_assignment(g, {0.0, 0.4}, schedule);
    const auto values = local_core_values(8, {0.0, 0.4});
    REQUIRE(a.assigned_values == values);
    REQUIRE(a.core_quality == Catch::Approx(core_quality(g, values)));
}

TEST_CASE("anneal reaches the exhaustive maximum on 5-node graphs") {
    for (int trial = 0; trial < 20; ++trial) {
        const WeightedGraph g = random_weighted(5, 0.6, 100 + static_cast<std::uint64_t>(trial));
        const TransitionParams params{0.1 + 0.8 * ((trial * 7) % 10) / 10.0,
                                      0.1 + 0.8 * ((trial * 3) % 10) / 10.0};
        AnnealSchedule schedule;
        schedule.seed = 500 + static_cast<std::uint64_t>(trial);
        schedule.restarts = 3;
        const CoreAssignment a = anneal_assignment(g, params, schedule);
        const double oracle = exhaustive_max_r(g, local_core_values(5, params));
        REQUIRE(a.core_quality == Catch::Approx(oracle).margin(1e-10));
    }
}

TEST_CASE("assigned values are exactly a shuffle of the local core values") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + rng.next_index(10);
        const WeightedGraph g = random_weighted(n, 0.5, 900 + static_cast<std::uint64_t>(trial));
        const TransitionParams params{rng.next_double(), rng.next_double()};
        AnnealSchedule schedule;
        schedule.seed = trial;
        const CoreAssignment a = anneal_assignment(g, params, schedule);
        auto sorted_assigned = a.assigned_values;
        std::sort(sorted_assigned.begin(), sorted_assigned.end());
        auto expected = local_core_values(n, params);
        std::sort(expected.begin(), expected.end());
        REQUIRE(sorted_assigned == expected);  // bitwise
        REQUIRE(a.core_quality == core_quality(g, a.assigned_values));
    }
}

TEST_CASE("optimal permutation is unchanged by sum-to-1 normalization") {
    Rng rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 4 + rng.next_index(5);
        const WeightedGraph g = random_weighted(n, 0.6, 40 + static_cast<std::uint64_t>(trial));
        // alpha capped to keep every value's placement numerically visible in R
        const TransitionParams params{0.05 + 0.75 * rng.next_double(),
                                      0.05 + 0.9 * rng.next_double()};
        const auto raw = local_core_values(n, params);
        double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
        std::vector<double> normalized(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) normalized[i] = raw[i] / sum;
        AnnealSchedule schedule;
        schedule.seed = 1000 + static_cast<std::uint64_t>(trial);
        schedule.restarts = 5;
        const auto a = anneal_values(g, raw, schedule);
        const auto b = anneal_values(g, normalized, schedule);
        REQUIRE(value_ranks(a) == value_ranks(b));
    }
}

TEST_CASE("best-so-far R never regresses") {
    const WeightedGraph g = random_weighted(12, 0.4, 5);
    AnnealSchedule schedule;
    schedule.seed = 19;
    std::vector<double> trace;
    AnnealOptions options;
    options.best_trace = &trace;
    anneal_values(g, local_core_values(12, {0.7, 0.4}), schedule, options);
    REQUIRE(trace.size() > 1);
    for (std::size_t i = 1; i < trace.size(); ++i) REQUIRE(trace[i] >= trace[i - 1]);
}

TEST_CASE("a 1x1 sweep is a single annealed assignment") {
    const WeightedGraph g = random_weighted(7, 0.5, 21);
    ParameterGrid grid;
    grid.alphas = {0.5};
    grid.betas = {0.5};
    AnnealSchedule schedule;
    schedule.seed = 99;
    const SweepResult sweep = sweep_grid(g, grid, schedule);
    REQUIRE(sweep.cells.size() == 1);
    AnnealSchedule cell_schedule = schedule;
    cell_schedule.seed = mix_seed(schedule.seed, 0, 0);
    const CoreAssignment direct = anneal_assignment(g, {0.5, 0.5}, cell_schedule);
    REQUIRE(sweep.cells[0].assigned_values == direct.assigned_values);
    REQUIRE(sweep.cells[0].core_quality == direct.core_quality);
}

TEST_CASE("sweep results are identical across thread counts") {
    const WeightedGraph g = random_weighted(10, 0.4, 8);
    const ParameterGrid grid = ParameterGrid::midpoints(4, 4);
    AnnealSchedule schedule;
    schedule.seed = 3;
    const SweepResult serial = sweep_grid(g, grid, schedule, 1);
    const SweepResult parallel = sweep_grid(g, grid, schedule, 4);
    REQUIRE(serial.r_landscape == parallel.r_landscape);
    REQUIRE(serial.top_node == parallel.top_node);
    for (std::size_t c = 0; c < serial.cells.size(); ++c) {
        REQUIRE(serial.cells[c].assigned_values == parallel.cells[c].assigned_values);
    }
}

TEST_CASE("core scores of a star peak at the hub") {
    const WeightedGraph g = star(3);
    const ParameterGrid grid = ParameterGrid::midpoints(6, 6);
    AnnealSchedule schedule;
    schedule.seed = 17;
    const CoreScoreResult result = aggregate_core_scores(sweep_grid(g, grid, schedule), g);
    REQUIRE(result.scores[0] == 1.0);
    for (std::size_t i = 1; i < result.scores.size(); ++i) {
        REQUIRE(result.scores[i] < 1.0);
        REQUIRE(result.scores[i] >= 0.0);
    }
    // fractions sum to one over nodes
    double total = 0.0;
    for (double f : result.top_fractions) total += f;
    REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("both endpoints of a single edge score 1") {
    const WeightedGraph g = WeightedGraph::from_edges({{"a", "b", 1.0}});
    const ParameterGrid grid = ParameterGrid::midpoints(3, 3);
    AnnealSchedule schedule;
    schedule.seed = 23;
    const CoreScoreResult result = aggregate_core_scores(sweep_grid(g, grid, schedule), g);
    REQUIRE(result.scores[0] == 1.0);
    REQUIRE(result.scores[1] == 1.0);
}

TEST_CASE("edgeless graphs get zero scores and skip normalization") {
    const WeightedGraph g = WeightedGraph::from_edges({}, {"a", "b", "c"});
    ParameterGrid grid = ParameterGrid::midpoints(2, 2);
    AnnealSchedule schedule;
    const CoreScoreResult result = aggregate_core_scores(sweep_grid(g, grid, schedule), g);
    REQUIRE_FALSE(result.normalized);
    for (double s : result.scores) REQUIRE(s == 0.0);
}

TEST_CASE("core scores are equivariant under node relabeling") {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 5 + rng.next_index(2);
        const WeightedGraph g = random_weighted(n, 0.6, 7000 + static_cast<std::uint64_t>(trial));
        std::vector<NodeId> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        const WeightedGraph h = g.relabeled(perm);
        const ParameterGrid grid = ParameterGrid::midpoints(3, 3);
        AnnealSchedule schedule;
        schedule.seed = 600 + static_cast<std::uint64_t>(trial);
        schedule.restarts = 6;
        const auto cs_g = aggregate_core_scores(sweep_grid(g, grid, schedule), g).scores;
        const auto cs_h = aggregate_core_scores(sweep_grid(h, grid, schedule), h).scores;
        for (NodeId i = 0; i < n; ++i) {
            REQUIRE(cs_h[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] ==
                    Catch::Approx(cs_g[static_cast<std::size_t>(i)]).margin(1e-9));
        }
    }
}

TEST_CASE("grid and schedule validation") {
    REQUIRE_THROWS_AS(local_core_values(0, {0.5, 0.5}), std::invalid_argument);
    REQUIRE_THROWS_AS(local_core_values(5, {1.5, 0.5}), std::invalid_argument);
    ParameterGrid bad;
    bad.alphas = {0.5, 0.5};
    bad.betas = {0.5};
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    AnnealSchedule schedule;
    schedule.cooling_factor = 1.0;
    REQUIRE_THROWS_AS(schedule.validate(), std::invalid_argument);
}
