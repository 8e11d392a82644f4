#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "corescore/graph.hpp"
#include "corescore/parallel.hpp"
#include "corescore/rng.hpp"

namespace corescore {

/// Boundary sharpness (alpha) and core size (beta) of the local core value
/// profile; both live in [0, 1].
struct TransitionParams {
    double alpha = 0.5;
    double beta = 0.5;

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside [0,1]");
        if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta outside [0,1]");
    }
};

/// Sweep lattice over [0,1]^2; strictly ascending values on each axis.
struct ParameterGrid {
    std::vector<double> alphas;
    std::vector<double> betas;

    /// Midpoint grid: 100x100 covers the unit square as {0.005, 0.015, ...,
    /// 0.995}^2, avoiding the degenerate endpoints.
    static ParameterGrid midpoints(int n_alpha, int n_beta) {
        if (n_alpha < 1 || n_beta < 1) throw std::invalid_argument("grid dimensions must be >= 1");
        ParameterGrid grid;
        grid.alphas.reserve(static_cast<std::size_t>(n_alpha));
        grid.betas.reserve(static_cast<std::size_t>(n_beta));
        for (int i = 0; i < n_alpha; ++i) grid.alphas.push_back((i + 0.5) / n_alpha);
        for (int j = 0; j < n_beta; ++j) grid.betas.push_back((j + 0.5) / n_beta);
        return grid;
    }

    std::size_t cell_count() const { return alphas.size() * betas.size(); }

    void validate() const {
        auto check_axis = [](const std::vector<double>& axis, const char* name) {
            if (axis.empty()) throw std::invalid_argument(std::string(name) + " axis is empty");
            double prev = -1.0;
            for (double v : axis) {
                if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " value outside [0,1]");
                if (v <= prev) throw std::invalid_argument(std::string(name) + " axis not strictly ascending");
                prev = v;
            }
        };
        check_axis(alphas, "alpha");
        check_axis(betas, "beta");
    }
};

/// Simulated-annealing schedule. Defaults follow the reference setup:
/// T0 = 1, stop at 1e-8, geometric cooling by 0.8, at most 1000 consecutive
/// rejections, 300 tries and 20 successes per temperature, one run per
/// assignment. Raising `restarts` keeps the best of several independent
/// runs; note that near-degenerate optima are then resolved the same way in
/// every cell, which sharpens per-cell results but shifts grid aggregates.
struct AnnealSchedule {
    double initial_temperature = 1.0;
    double stop_temperature = 1e-8;
    double cooling_factor = 0.8;
    int max_consecutive_rejections = 1000;
    int max_tries_per_temperature = 300;
    int max_successes_per_temperature = 20;
    int restarts = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(stop_temperature < initial_temperature)) {
            throw std::invalid_argument("stop temperature must be below initial temperature");
        }
        if (!(cooling_factor > 0.0 && cooling_factor < 1.0)) {
            throw std::invalid_argument("cooling factor must be in (0,1)");
        }
        if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
        if (max_consecutive_rejections < 1 || max_tries_per_temperature < 1 ||
            max_successes_per_temperature < 1) {
            throw std::invalid_argument("schedule counters must be >= 1");
        }
    }
};

/// One optimized placement of the local core values onto nodes at a single
/// (alpha, beta), with the core quality R it achieves.
struct CoreAssignment {
    TransitionParams params;
    std::vector<double> assigned_values;
    double core_quality = 0.0;
};

struct AnnealOptions {
    /// Warm-start the first restart from a strength-descending placement
    /// instead of a random permutation.
    bool warm_start_by_strength = false;
    /// When set, receives the best-so-far R after every accepted improvement.
    std::vector<double>* best_trace = nullptr;
};

/// Local core values C*_m = 1 / (1 + exp(-(m - N*beta) * tan(pi*alpha/2)))
/// for m = 1..n. Nondecreasing in m, all values in [0,1]. alpha = 1 is the
/// pointwise limit: 0 below N*beta, 1 above, 1/2 at equality.
inline std::vector<double> local_core_values(int n, TransitionParams params) {
    if (n < 1) throw std::invalid_argument("node count must be >= 1");
    params.validate();
    std::vector<double> values(static_cast<std::size_t>(n));
    const double boundary = static_cast<double>(n) * params.beta;
    if (params.alpha == 1.0) {
        for (int m = 1; m <= n; ++m) {
            const double x = static_cast<double>(m);
            values[static_cast<std::size_t>(m - 1)] = x < boundary ? 0.0 : (x > boundary ? 1.0 : 0.5);
        }
    } else {
        const double slope = std::tan(M_PI * params.alpha / 2.0);
        for (int m = 1; m <= n; ++m) {
            values[static_cast<std::size_t>(m - 1)] =
                1.0 / (1.0 + std::exp(-(static_cast<double>(m) - boundary) * slope));
        }
    }
    return values;
}

/// Core quality R = sum_{i,j} A_ij C_i C_j over ordered pairs (each edge
/// counted twice).
inline double core_quality(const WeightedGraph& g, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != g.node_count()) {
        throw std::invalid_argument("value vector length does not match node count");
    }
    for (double v : values) {
        if (v < 0.0) throw std::invalid_argument("core values must be nonnegative");
    }
    double r = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const double cu = values[static_cast<std::size_t>(u)];
        if (cu == 0.0) continue;
        for (const auto& nb : g.neighbors(u)) {
            r += nb.weight * cu * values[static_cast<std::size_t>(nb.node)];
        }
    }
    return r;
}

namespace detail {

/// One annealing run arranging `search_values[perm[node]]` to maximize R.
/// perm is modified in place to the best arrangement found. Moves swap the
/// values of two random nodes; dR is O(1) via cached neighbor-value sums.
inline double anneal_run(const WeightedGraph& g, const std::vector<double>& search_values,
                         std::vector<int>& perm, const AnnealSchedule& sched, Rng& rng,
                         std::vector<double>* best_trace) {
    const int n = g.node_count();
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        c[static_cast<std::size_t>(i)] = search_values[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
    std::vector<double> nbr_sum(static_cast<std::size_t>(n), 0.0);
    for (NodeId u = 0; u < n; ++u) {
        for (const auto& nb : g.neighbors(u)) {
            nbr_sum[static_cast<std::size_t>(u)] += nb.weight * c[static_cast<std::size_t>(nb.node)];
        }
    }
    double current_r = 0.0;
    for (NodeId u = 0; u < n; ++u) {
        current_r += c[static_cast<std::size_t>(u)] * nbr_sum[static_cast<std::size_t>(u)];
    }
    std::vector<int> best_perm = perm;
    double best_r = current_r;
    if (best_trace) best_trace->push_back(best_r);

    double temperature = sched.initial_temperature;
    int tries = 0;
    int successes = 0;
    int consecutive_rejections = 0;
    for (;;) {
        if (tries >= sched.max_tries_per_temperature ||
            successes >= sched.max_successes_per_temperature) {
            if (temperature < sched.stop_temperature ||
                consecutive_rejections >= sched.max_consecutive_rejections) {
                break;
            }
            temperature *= sched.cooling_factor;
            tries = 0;
            successes = 0;
        }
        ++tries;
        const int i = rng.next_index(static_cast<std::size_t>(n));
        int j = rng.next_index(static_cast<std::size_t>(n - 1));
        if (j >= i) ++j;
        const double ci = c[static_cast<std::size_t>(i)];
        const double cj = c[static_cast<std::size_t>(j)];
        const double delta = cj - ci;
        double dr = 0.0;
        if (delta != 0.0) {
            const double aij = g.weight(i, j);
            dr = 2.0 * delta * (nbr_sum[static_cast<std::size_t>(i)] - nbr_sum[static_cast<std::size_t>(j)]) -
                 2.0 * aij * delta * delta;
        }
        bool accept;
        if (dr >= 0.0) {
            accept = true;
        } else if (dr < -37.0 * temperature) {
            // exp(dr/T) below ~1e-16: cannot beat a 53-bit uniform draw
            accept = false;
        } else {
            accept = rng.next_double() < std::exp(dr / temperature);
        }
        if (!accept) {
            ++consecutive_rejections;
            continue;
        }
        consecutive_rejections = 0;
        ++successes;
        if (delta != 0.0) {
            for (const auto& nb : g.neighbors(i)) {
                nbr_sum[static_cast<std::size_t>(nb.node)] += nb.weight * delta;
            }
            for (const auto& nb : g.neighbors(j)) {
                nbr_sum[static_cast<std::size_t>(nb.node)] -= nb.weight * delta;
            }
            c[static_cast<std::size_t>(i)] = cj;
            c[static_cast<std::size_t>(j)] = ci;
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
            current_r += dr;
            if (current_r > best_r) {
                best_r = current_r;
                best_perm = perm;
                if (best_trace) best_trace->push_back(best_r);
            }
        }
    }
    perm = std::move(best_perm);
    return best_r;
}

inline std::vector<double> cell_node_terms(const WeightedGraph& g, const std::vector<double>& values,
                                           bool weight_by_edge) {
    const int n = g.node_count();
    std::vector<double> terms(static_cast<std::size_t>(n), 0.0);
    for (NodeId i = 0; i < n; ++i) {
        double neighbor_sum = 0.0;
        for (const auto& nb : g.neighbors(i)) {
            neighbor_sum += (weight_by_edge ? nb.weight : 1.0) * values[static_cast<std::size_t>(nb.node)];
        }
        terms[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(i)] * neighbor_sum;
    }
    return terms;
}

inline bool all_equal(const std::vector<double>& values) {
    for (double v : values) {
        if (v != values.front()) return false;
    }
    return true;
}

}  // namespace detail

/// Arranges `values` onto the nodes of g to maximize R, annealing with
/// `restarts` independent runs and returning the best arrangement found.
/// The search itself runs on the sum-to-1 normalized copy of the values, so
/// the accept/reject trajectory is invariant under positive rescaling of the
/// input; the returned vector is the original values permuted.
inline std::vector<double> anneal_values(const WeightedGraph& g, const std::vector<double>& values,
                                         const AnnealSchedule& schedule,
                                         const AnnealOptions& options = {}) {
    schedule.validate();
    const int n = g.node_count();
    if (static_cast<int>(values.size()) != n) {
        throw std::invalid_argument("value vector length does not match node count");
    }
    if (n < 1) throw std::invalid_argument("empty graph");
    if (n == 1 || detail::all_equal(values)) return values;

    double sum = 0.0;
    for (double v : values) {
        if (v < 0.0) throw std::invalid_argument("core values must be nonnegative");
        sum += v;
    }
    std::vector<double> search_values(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        search_values[i] = sum > 0.0 ? values[i] / sum : values[i];
    }

    std::vector<int> best_perm;
    double best_r = -1.0;
    for (int restart = 0; restart < schedule.restarts; ++restart) {
        Rng rng(mix_seed(schedule.seed, 0xA55A11ULL, static_cast<std::uint64_t>(restart)));
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        if (restart == 0 && options.warm_start_by_strength) {
            // largest value onto the strongest node
            std::vector<int> by_strength(static_cast<std::size_t>(n));
            std::iota(by_strength.begin(), by_strength.end(), 0);
            std::stable_sort(by_strength.begin(), by_strength.end(), [&](int a, int b) {
                return g.strength(a) > g.strength(b);
            });
            for (int rank = 0; rank < n; ++rank) {
                perm[static_cast<std::size_t>(by_strength[static_cast<std::size_t>(rank)])] = n - 1 - rank;
            }
        } else {
            rng.shuffle(perm);
        }
        const double r = detail::anneal_run(g, search_values, perm, schedule, rng,
                                            restart == 0 ? options.best_trace : nullptr);
        if (r > best_r) {
            best_r = r;
            best_perm = std::move(perm);
        }
    }
    std::vector<double> assigned(values.size());
    for (std::size_t i = 0; i < assigned.size(); ++i) {
        assigned[i] = values[static_cast<std::size_t>(best_perm[i])];
    }
    return assigned;
}

/// Optimized core assignment at one (alpha, beta): the local core values are
/// placed on nodes by simulated annealing to maximize R. alpha = 0 makes all
/// values equal, so every arrangement scores the same and the identity
/// placement is returned directly.
inline CoreAssignment anneal_assignment(const WeightedGraph& g, TransitionParams params,
                                        const AnnealSchedule& schedule,
                                        const AnnealOptions& options = {}) {
    params.validate();
    if (g.node_count() < 1) throw std::invalid_argument("empty graph");
    CoreAssignment out;
    out.params = params;
    const std::vector<double> values = local_core_values(g.node_count(), params);
    out.assigned_values = anneal_values(g, values, schedule, options);
    out.core_quality = core_quality(g, out.assigned_values);
    return out;
}

/// All per-cell assignments of a full (alpha, beta) sweep, in row-major cell
/// order (alpha index major).
struct SweepResult {
    ParameterGrid grid;
    std::vector<CoreAssignment> cells;
    /// R of the sum-to-1 normalized assignment, per cell (comparable across
    /// beta; the arrangement optimum is the same either way).
    std::vector<double> r_landscape;
    /// Per cell: node maximizing assigned value x neighbor-value sum; ties
    /// go to the lowest node index.
    std::vector<NodeId> top_node;

    std::size_t cell_index(std::size_t alpha_idx, std::size_t beta_idx) const {
        return alpha_idx * grid.betas.size() + beta_idx;
    }
};

/// Runs one annealed assignment per grid cell. Each cell's RNG stream is
/// derived from (schedule.seed, alpha index, beta index), so the sweep is
/// deterministic and independent of evaluation order and thread count.
inline SweepResult sweep_grid(const WeightedGraph& g, const ParameterGrid& grid,
                              const AnnealSchedule& schedule, int threads = 0,
                              const AnnealOptions& options = {}) {
    grid.validate();
    schedule.validate();
    SweepResult result;
    result.grid = grid;
    const std::size_t cells = grid.cell_count();
    result.cells.resize(cells);
    result.r_landscape.assign(cells, 0.0);
    result.top_node.assign(cells, 0);
    const std::size_t n_beta = grid.betas.size();
    parallel_for(cells, threads, [&](std::size_t cell) {
        const std::size_t ai = cell / n_beta;
        const std::size_t bi = cell % n_beta;
        AnnealSchedule cell_schedule = schedule;
        cell_schedule.seed = mix_seed(schedule.seed, ai, bi);
        const TransitionParams params{grid.alphas[ai], grid.betas[bi]};
        AnnealOptions cell_options = options;
        cell_options.best_trace = nullptr;  // traces are not meaningful across cells
        CoreAssignment assignment = anneal_assignment(g, params, cell_schedule, cell_options);
        double value_sum = 0.0;
        for (double v : assignment.assigned_values) value_sum += v;
        result.r_landscape[cell] =
            value_sum > 0.0 ? assignment.core_quality / (value_sum * value_sum) : 0.0;
        const auto terms = detail::cell_node_terms(g, assignment.assigned_values, false);
        NodeId top = 0;
        for (NodeId i = 1; i < g.node_count(); ++i) {
            if (terms[static_cast<std::size_t>(i)] > terms[static_cast<std::size_t>(top)]) top = i;
        }
        result.top_node[cell] = top;
        result.cells[cell] = std::move(assignment);
    });
    return result;
}

/// Per-node Core Scores plus the landscape grids of the sweep they came from.
struct CoreScoreResult {
    std::vector<double> scores;
    ParameterGrid grid;
    std::vector<double> r_landscape;
    std::vector<NodeId> top_node;
    std::vector<double> top_fractions;
    /// False only for edgeless graphs, where all scores are zero and the
    /// unit-maximum normalization is skipped.
    bool normalized = true;
};

/// CS(i) = Z * sum over cells of (assigned value of i) x (sum of neighbors'
/// assigned values), scaled so the maximum is exactly 1. Each cell's vector
/// is rescaled to unit sum before its terms are accumulated (the scale the
/// optimizer works on), which keeps cells comparable across the grid. The
/// neighbor sum ignores edge weights, as does the per-cell top node;
/// `weight_by_edge` switches both to A_ij-weighted sums (off by default).
inline CoreScoreResult aggregate_core_scores(const SweepResult& sweep, const WeightedGraph& g,
                                             bool weight_by_edge = false) {
    if (sweep.cells.empty()) throw std::invalid_argument("sweep result is empty");
    const int n = g.node_count();
    CoreScoreResult result;
    result.grid = sweep.grid;
    result.r_landscape = sweep.r_landscape;
    result.top_node = sweep.top_node;
    result.scores.assign(static_cast<std::size_t>(n), 0.0);
    result.top_fractions.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> cell_values;
    for (const auto& cell : sweep.cells) {
        cell_values = cell.assigned_values;
        double sum = 0.0;
        for (double v : cell_values) sum += v;
        if (sum > 0.0) {
            for (double& v : cell_values) v /= sum;
        }
        const auto terms = detail::cell_node_terms(g, cell_values, weight_by_edge);
        for (int i = 0; i < n; ++i) result.scores[static_cast<std::size_t>(i)] += terms[static_cast<std::size_t>(i)];
    }
    for (const NodeId top : sweep.top_node) {
        result.top_fractions[static_cast<std::size_t>(top)] += 1.0;
    }
    for (double& f : result.top_fractions) f /= static_cast<double>(sweep.top_node.size());
    double max_score = 0.0;
    for (double s : result.scores) max_score = std::max(max_score, s);
    if (max_score > 0.0) {
        for (double& s : result.scores) s /= max_score;
    } else {
        result.normalized = false;
        std::cerr << "warning: graph has no edges; core scores are all zero and left unnormalized\n";
    }
    return result;
}

}  // namespace corescore
