#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "corescore/baselines.hpp"
#include "corescore/centrality.hpp"
#include "corescore/core_score.hpp"
#include "corescore/graph.hpp"
#include "corescore/parallel.hpp"
#include "corescore/rng.hpp"

namespace corescore {

/// CP(N, d, p, k): N nodes, floor(d*N) of them core; pair probabilities are
/// p (periphery-periphery), k*p (core-periphery) and k^2*p (core-core), so
/// k must stay within [1, (1/p)^(1/2)].
struct CPEnsembleParams {
    int n = 100;
    double d = 0.5;
    double p = 0.25;
    double k = 1.0;

    void validate() const {
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("d outside [0,1]");
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p outside [0,1]");
        if (!(k >= 1.0)) throw std::invalid_argument("k must be >= 1");
        if (k * k * p > 1.0 + 1e-12) {
            throw std::invalid_argument("k exceeds (1/p)^(1/2): core-core probability above 1");
        }
    }

    int core_size() const { return static_cast<int>(std::floor(d * n + 1e-9)); }
};

struct PlantedGraph {
    WeightedGraph graph;
    std::vector<NodeId> true_core;
};

/// Block sizes plus the symmetric block density matrix, and which blocks
/// count as the planted core.
struct BlockSpec {
    std::vector<int> sizes;
    std::vector<std::vector<double>> density;
    std::vector<int> core_blocks = {0};

    void validate() const {
        if (sizes.empty()) throw std::invalid_argument("no blocks");
        for (int s : sizes) {
            if (s < 0) throw std::invalid_argument("negative block size");
        }
        if (density.size() != sizes.size()) throw std::invalid_argument("density matrix dimension mismatch");
        for (std::size_t i = 0; i < density.size(); ++i) {
            if (density[i].size() != sizes.size()) {
                throw std::invalid_argument("density matrix dimension mismatch");
            }
            for (std::size_t j = 0; j < density[i].size(); ++j) {
                const double pij = density[i][j];
                if (!(pij >= 0.0 && pij <= 1.0)) throw std::invalid_argument("density outside [0,1]");
                if (pij != density[j][i]) throw std::invalid_argument("density matrix not symmetric");
            }
        }
        for (int b : core_blocks) {
            if (b < 0 || b >= static_cast<int>(sizes.size())) {
                throw std::invalid_argument("core block index out of range");
            }
        }
    }
};

/// Mean/stddev recovery fraction per method per k over all replicates.
struct BenchmarkReport {
    std::vector<double> k_values;
    std::vector<std::string> methods;
    int replicates = 0;
    std::vector<std::vector<double>> mean;    // [method][k]
    std::vector<std::vector<double>> stddev;  // [method][k]
};

/// Draws one graph of an arbitrary block model; each unordered pair gets an
/// edge independently with its block probability. Draw order is the fixed
/// pair order (u ascending, then v), so a seed pins the graph exactly.
inline PlantedGraph block_model(const BlockSpec& spec, std::uint64_t seed) {
    spec.validate();
    const int n = std::accumulate(spec.sizes.begin(), spec.sizes.end(), 0);
    std::vector<int> block_of(static_cast<std::size_t>(n));
    int pos = 0;
    for (std::size_t b = 0; b < spec.sizes.size(); ++b) {
        for (int i = 0; i < spec.sizes[b]; ++i) block_of[static_cast<std::size_t>(pos++)] = static_cast<int>(b);
    }
    Rng rng(seed);
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            const double prob = spec.density[static_cast<std::size_t>(block_of[static_cast<std::size_t>(u)])]
                                            [static_cast<std::size_t>(block_of[static_cast<std::size_t>(v)])];
            if (rng.next_double() < prob) edges.emplace_back(u, v, 1.0);
        }
    }
    PlantedGraph out;
    out.graph = WeightedGraph::from_index_edges(WeightedGraph::numbered_labels(n), edges);
    for (NodeId i = 0; i < n; ++i) {
        if (std::find(spec.core_blocks.begin(), spec.core_blocks.end(),
                      block_of[static_cast<std::size_t>(i)]) != spec.core_blocks.end()) {
            out.true_core.push_back(i);
        }
    }
    return out;
}

/// CP(N,d,p,k) sample. With shuffle_positions the planted core is scattered
/// over random node indices; the recorded truth follows it.
inline PlantedGraph generate_cp(const CPEnsembleParams& params, std::uint64_t seed,
                                bool shuffle_positions = false) {
    params.validate();
    const int n = params.n;
    const int core = params.core_size();
    BlockSpec spec;
    spec.sizes = {core, n - core};
    const double pp = params.p;
    const double cp = std::min(1.0, params.k * params.p);
    const double cc = std::min(1.0, params.k * params.k * params.p);
    spec.density = {{cc, cp}, {cp, pp}};
    spec.core_blocks = {0};
    if (core == 0) spec.core_blocks = {};
    PlantedGraph out = block_model(spec, mix_seed(seed, 0xC0DE5ULL));
    if (shuffle_positions) {
        std::vector<NodeId> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        Rng rng(mix_seed(seed, 0x5FFULL));
        rng.shuffle(perm);
        out.graph = out.graph.relabeled(perm);
        for (NodeId& c : out.true_core) c = perm[static_cast<std::size_t>(c)];
        std::sort(out.true_core.begin(), out.true_core.end());
    }
    return out;
}

/// Fig. 1 archetypes. (a) two communities; (b) core-periphery; (c) global
/// core-periphery with local communities; (d) global communities with local
/// core-periphery. (c) and (d) build the same four blocks in different
/// orders, so their density matrices agree up to a simultaneous row/column
/// permutation.
inline BlockSpec preset_community(int size_a, int size_b, double p_in, double p_out) {
    BlockSpec spec;
    spec.sizes = {size_a, size_b};
    spec.density = {{p_in, p_out}, {p_out, p_in}};
    spec.core_blocks = {};
    return spec;
}

inline BlockSpec preset_core_periphery(int core, int periphery, double p_cc, double p_cp,
                                       double p_pp) {
    BlockSpec spec;
    spec.sizes = {core, periphery};
    spec.density = {{p_cc, p_cp}, {p_cp, p_pp}};
    spec.core_blocks = {0};
    return spec;
}

inline BlockSpec preset_global_cp_local_communities(int core_each, int periphery_each,
                                                    double p_in, double p_cp, double p_pp,
                                                    double p_out) {
    // block order: C1, C2, P1, P2
    BlockSpec spec;
    spec.sizes = {core_each, core_each, periphery_each, periphery_each};
    spec.density = {{p_in, p_out, p_cp, p_out},
                    {p_out, p_in, p_out, p_cp},
                    {p_cp, p_out, p_pp, p_out},
                    {p_out, p_cp, p_out, p_pp}};
    spec.core_blocks = {0, 1};
    return spec;
}

inline BlockSpec preset_global_communities_local_cp(int core_each, int periphery_each,
                                                    double p_in, double p_cp, double p_pp,
                                                    double p_out) {
    // block order: C1, P1, C2, P2
    BlockSpec spec;
    spec.sizes = {core_each, periphery_each, core_each, periphery_each};
    spec.density = {{p_in, p_cp, p_out, p_out},
                    {p_cp, p_pp, p_out, p_out},
                    {p_out, p_out, p_in, p_cp},
                    {p_out, p_out, p_cp, p_pp}};
    spec.core_blocks = {0, 2};
    return spec;
}

/// Fraction of the planted core found among the top |core| nodes by score.
/// Higher scores are more core-like; ties are broken by random per-node
/// priorities drawn from tie_seed, so the result is invariant under strictly
/// monotone transformations of the scores.
inline double recovery_fraction(const std::vector<double>& scores,
                                const std::vector<NodeId>& true_core, std::uint64_t tie_seed) {
    if (true_core.empty()) throw std::invalid_argument("true core is empty");
    const std::size_t n = scores.size();
    if (true_core.size() > n) throw std::invalid_argument("true core larger than score vector");
    Rng rng(tie_seed);
    std::vector<std::uint64_t> priority(n);
    for (auto& p : priority) p = rng.next_u64();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        if (priority[a] != priority[b]) return priority[a] < priority[b];
        return a < b;
    });
    std::vector<bool> is_core(n, false);
    for (const NodeId c : true_core) {
        if (c < 0 || static_cast<std::size_t>(c) >= n) throw std::invalid_argument("core node out of range");
        is_core[static_cast<std::size_t>(c)] = true;
    }
    std::size_t hits = 0;
    for (std::size_t rank = 0; rank < true_core.size(); ++rank) {
        if (is_core[order[rank]]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(true_core.size());
}

enum class BenchMethod { CoreScore, Minres, Strength, Closeness, Betweenness, Eigenvector };

inline const char* bench_method_name(BenchMethod m) {
    switch (m) {
        case BenchMethod::CoreScore: return "core_score";
        case BenchMethod::Minres: return "minres";
        case BenchMethod::Strength: return "strength";
        case BenchMethod::Closeness: return "closeness";
        case BenchMethod::Betweenness: return "betweenness";
        case BenchMethod::Eigenvector: return "eigenvector";
    }
    return "unknown";
}

struct BenchmarkConfig {
    int n = 100;
    double d = 0.5;
    double p = 0.25;
    std::vector<double> k_values = {1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
    int replicates = 100;
    std::vector<BenchMethod> methods = {BenchMethod::CoreScore, BenchMethod::Minres,
                                        BenchMethod::Strength, BenchMethod::Closeness,
                                        BenchMethod::Betweenness, BenchMethod::Eigenvector};
    ParameterGrid grid = ParameterGrid::midpoints(100, 100);
    AnnealSchedule schedule;
    std::uint64_t seed = 0;
    int threads = 0;
};

namespace detail {

/// Core-likeness scores for one method on one graph: higher means more
/// core-like (closeness is negated since smaller is more central there).
inline std::vector<double> bench_scores(BenchMethod method, const WeightedGraph& g,
                                        const ParameterGrid& grid, const AnnealSchedule& schedule) {
    switch (method) {
        case BenchMethod::CoreScore: {
            const SweepResult sweep = sweep_grid(g, grid, schedule, 1);
            return aggregate_core_scores(sweep, g).scores;
        }
        case BenchMethod::Minres:
            return minres_coreness(g).values;
        case BenchMethod::Strength:
            return strength_centrality(g).values;
        case BenchMethod::Closeness: {
            std::vector<double> values = closeness(g, PathMode::HopCount).values;
            for (double& v : values) v = -v;
            return values;
        }
        case BenchMethod::Betweenness:
            return betweenness(g).values;
        case BenchMethod::Eigenvector:
            return eigenvector_centrality(g).values;
    }
    throw std::invalid_argument("unknown benchmark method");
}

}  // namespace detail

/// Fig. 2-style recovery experiment: for every k and replicate, draw a
/// CP(n,d,p,k) graph, score it with every requested method and record the
/// recovery fraction. (k, replicate) cells have derived seeds, so reports
/// are reproducible for any thread count.
inline BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
    if (config.k_values.empty()) throw std::invalid_argument("no k values");
    if (config.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (config.methods.empty()) throw std::invalid_argument("no methods selected");
    for (double k : config.k_values) {
        CPEnsembleParams check{config.n, config.d, config.p, k};
        check.validate();
    }
    config.grid.validate();
    config.schedule.validate();

    const std::size_t n_k = config.k_values.size();
    const std::size_t n_methods = config.methods.size();
    const std::size_t cells = n_k * static_cast<std::size_t>(config.replicates);
    // recovery[(k_idx * replicates + rep) * n_methods + method_idx]
    std::vector<double> recovery(cells * n_methods, 0.0);
    parallel_for(cells, config.threads, [&](std::size_t cell) {
        const std::size_t k_idx = cell / static_cast<std::size_t>(config.replicates);
        const std::size_t rep = cell % static_cast<std::size_t>(config.replicates);
        const std::uint64_t graph_seed = mix_seed(config.seed, k_idx, rep);
        CPEnsembleParams params{config.n, config.d, config.p, config.k_values[k_idx]};
        const PlantedGraph planted = generate_cp(params, graph_seed);
        for (std::size_t m = 0; m < n_methods; ++m) {
            AnnealSchedule schedule = config.schedule;
            schedule.seed = mix_seed(graph_seed, 0x5C03EULL, m);
            const std::vector<double> scores =
                detail::bench_scores(config.methods[m], planted.graph, config.grid, schedule);
            recovery[cell * n_methods + m] =
                recovery_fraction(scores, planted.true_core, mix_seed(graph_seed, 0x71EULL, m));
        }
    });

    BenchmarkReport report;
    report.k_values = config.k_values;
    report.replicates = config.replicates;
    for (const BenchMethod m : config.methods) report.methods.emplace_back(bench_method_name(m));
    report.mean.assign(n_methods, std::vector<double>(n_k, 0.0));
    report.stddev.assign(n_methods, std::vector<double>(n_k, 0.0));
    for (std::size_t m = 0; m < n_methods; ++m) {
        for (std::size_t ki = 0; ki < n_k; ++ki) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (int rep = 0; rep < config.replicates; ++rep) {
                const double r =
                    recovery[(ki * static_cast<std::size_t>(config.replicates) + static_cast<std::size_t>(rep)) * n_methods + m];
                sum += r;
                sum_sq += r * r;
            }
            const double mean = sum / config.replicates;
            report.mean[m][ki] = mean;
            if (config.replicates > 1) {
                const double var =
                    std::max(0.0, (sum_sq - config.replicates * mean * mean) / (config.replicates - 1));
                report.stddev[m][ki] = std::sqrt(var);
            }
        }
    }
    return report;
}

}  // namespace corescore
