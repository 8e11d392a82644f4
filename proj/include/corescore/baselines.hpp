#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "corescore/centrality.hpp"
#include "corescore/core_score.hpp"
#include "corescore/graph.hpp"
#include "corescore/rng.hpp"

namespace corescore {

/// Discrete core/periphery split with its pattern score rho and the z-score
/// against size-preserving label shuffles.
struct DiscretePartition {
    std::vector<bool> core_mask;
    double rho = 0.0;
    double z_score = 0.0;
};

struct MinresCoreness {
    std::vector<double> values;
    double residual = 0.0;
    int iterations = 0;
    bool converged = true;
    std::vector<double> residual_history;
};

struct HolmeResult {
    double coefficient = 0.0;
    int best_k = 0;
    std::vector<NodeId> core_nodes;
    std::vector<double> null_samples;
    double observed_ratio = 0.0;
};

struct CapacityResult {
    double capacity = 0.0;
    double core_coefficient = 0.0;
    std::vector<NodeId> removal_order;
    std::vector<double> capacity_trace;  // K_0 .. K_N
};

/// rho_C = sum over ordered pairs of A_ij where at least one endpoint is in
/// the core.
inline double be_rho(const WeightedGraph& g, const std::vector<bool>& core_mask) {
    if (static_cast<int>(core_mask.size()) != g.node_count()) {
        throw std::invalid_argument("mask length does not match node count");
    }
    double rho = 0.0;
    for (const auto& [u, v, w] : g.edges()) {
        if (core_mask[static_cast<std::size_t>(u)] || core_mask[static_cast<std::size_t>(v)]) {
            rho += 2.0 * w;
        }
    }
    return rho;
}

/// Pattern variant: edges inside the core count 1, edges with exactly one
/// core endpoint count a, periphery-periphery edges count 0.
inline double be_pattern_score(const WeightedGraph& g, const std::vector<bool>& core_mask, double a) {
    if (static_cast<int>(core_mask.size()) != g.node_count()) {
        throw std::invalid_argument("mask length does not match node count");
    }
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("a outside [0,1]");
    double rho = 0.0;
    for (const auto& [u, v, w] : g.edges()) {
        const bool cu = core_mask[static_cast<std::size_t>(u)];
        const bool cv = core_mask[static_cast<std::size_t>(v)];
        if (cu && cv) {
            rho += 2.0 * w;
        } else if (cu || cv) {
            rho += 2.0 * a * w;
        }
    }
    return rho;
}

/// Expected rho under size-preserving shuffles of the core labels: a pair
/// avoids the core with probability n0(n0-1)/(N(N-1)), so
/// mu = S * (1 - n0(n0-1)/(N(N-1))) with S the full ordered-pair sum.
inline double be_shuffle_mean(double full_double_sum, int node_count, int periphery_count) {
    const double n = static_cast<double>(node_count);
    const double n0 = static_cast<double>(periphery_count);
    return full_double_sum * (1.0 - n0 * (n0 - 1.0) / (n * (n - 1.0)));
}

namespace detail {

inline double be_sigma_for_size(const WeightedGraph& g, int core_size, int shuffles, std::uint64_t seed) {
    const int n = g.node_count();
    std::vector<bool> mask(static_cast<std::size_t>(n));
    std::vector<int> nodes(static_cast<std::size_t>(n));
    std::iota(nodes.begin(), nodes.end(), 0);
    Rng rng(mix_seed(seed, 0x51613AULL, static_cast<std::uint64_t>(core_size)));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int s = 0; s < shuffles; ++s) {
        rng.shuffle(nodes);
        std::fill(mask.begin(), mask.end(), false);
        for (int i = 0; i < core_size; ++i) mask[static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)])] = true;
        const double rho = be_rho(g, mask);
        sum += rho;
        sum_sq += rho * rho;
    }
    const double mean = sum / shuffles;
    const double var = std::max(0.0, (sum_sq - shuffles * mean * mean) / std::max(1, shuffles - 1));
    return std::sqrt(var);
}

inline double be_z(double rho, double mu, double sigma) {
    if (sigma > 0.0) return (rho - mu) / sigma;
    if (rho > mu) return std::numeric_limits<double>::infinity();
    if (rho < mu) return -std::numeric_limits<double>::infinity();
    return 0.0;
}

}  // namespace detail

/// Borgatti-Everett discrete search: simulated annealing over core masks
/// (bit flips and core/periphery swaps, core size free, degenerate masks
/// excluded) maximizing z = (rho - mu)/sigma. mu is analytic; sigma comes
/// from `shuffles` size-preserving label permutations, estimated once per
/// core size and cached.
inline DiscretePartition be_discrete(const WeightedGraph& g, int shuffles,
                                     const AnnealSchedule& schedule) {
    schedule.validate();
    const int n = g.node_count();
    if (n < 3) throw std::invalid_argument("need at least 3 nodes");
    if (shuffles < 2) throw std::invalid_argument("need at least 2 shuffles");
    const double full_sum = 2.0 * g.total_weight();

    std::vector<double> sigma_cache(static_cast<std::size_t>(n), -1.0);
    auto sigma_for = [&](int core_size) {
        double& slot = sigma_cache[static_cast<std::size_t>(core_size)];
        if (slot < 0.0) slot = detail::be_sigma_for_size(g, core_size, shuffles, schedule.seed);
        return slot;
    };
    // weight to periphery neighbors; O(deg) to evaluate a flip
    auto periphery_weight = [&](const std::vector<bool>& mask, NodeId i) {
        double w = 0.0;
        for (const auto& nb : g.neighbors(i)) {
            if (!mask[static_cast<std::size_t>(nb.node)]) w += nb.weight;
        }
        return w;
    };

    std::vector<bool> best_mask;
    double best_z = -std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < schedule.restarts; ++restart) {
        Rng rng(mix_seed(schedule.seed, 0xBE57ULL, static_cast<std::uint64_t>(restart)));
        std::vector<int> nodes(static_cast<std::size_t>(n));
        std::iota(nodes.begin(), nodes.end(), 0);
        rng.shuffle(nodes);
        const int init_size = 1 + rng.next_index(static_cast<std::size_t>(n - 1));
        std::vector<bool> mask(static_cast<std::size_t>(n), false);
        for (int i = 0; i < init_size; ++i) mask[static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)])] = true;
        int core_size = init_size;
        double rho = be_rho(g, mask);
        double z = detail::be_z(rho, be_shuffle_mean(full_sum, n, n - core_size), sigma_for(core_size));
        std::vector<bool> run_best_mask = mask;
        double run_best_z = z;

        double temperature = schedule.initial_temperature;
        int tries = 0;
        int successes = 0;
        int consecutive_rejections = 0;
        for (;;) {
            if (tries >= schedule.max_tries_per_temperature ||
                successes >= schedule.max_successes_per_temperature) {
                if (temperature < schedule.stop_temperature ||
                    consecutive_rejections >= schedule.max_consecutive_rejections) {
                    break;
                }
                temperature *= schedule.cooling_factor;
                tries = 0;
                successes = 0;
            }
            ++tries;
            double new_rho = rho;
            int new_size = core_size;
            NodeId flip_a = -1;
            NodeId flip_b = -1;
            if (rng.next_bool()) {
                // single bit flip
                const NodeId i = rng.next_index(static_cast<std::size_t>(n));
                const bool to_core = !mask[static_cast<std::size_t>(i)];
                if ((to_core && core_size == n - 1) || (!to_core && core_size == 1)) {
                    ++consecutive_rejections;
                    continue;
                }
                const double pw = periphery_weight(mask, i);
                new_rho += to_core ? 2.0 * pw : -2.0 * pw;
                new_size += to_core ? 1 : -1;
                flip_a = i;
            } else {
                // swap one core node with one periphery node
                const int core_pick = rng.next_index(static_cast<std::size_t>(core_size));
                const int peri_pick = rng.next_index(static_cast<std::size_t>(n - core_size));
                NodeId ci = -1;
                NodeId pi = -1;
                int seen_core = 0;
                int seen_peri = 0;
                for (NodeId v = 0; v < n; ++v) {
                    if (mask[static_cast<std::size_t>(v)]) {
                        if (seen_core++ == core_pick) ci = v;
                    } else {
                        if (seen_peri++ == peri_pick) pi = v;
                    }
                }
                // remove ci, then add pi with ci already peripheral
                const double out_w = periphery_weight(mask, ci);
                mask[static_cast<std::size_t>(ci)] = false;
                const double in_w = periphery_weight(mask, pi);
                mask[static_cast<std::size_t>(ci)] = true;
                new_rho += 2.0 * (in_w - out_w);
                flip_a = ci;
                flip_b = pi;
            }
            const double new_z = detail::be_z(
                new_rho, be_shuffle_mean(full_sum, n, n - new_size), sigma_for(new_size));
            const double dz = new_z - z;
            bool accept;
            if (dz >= 0.0) {
                accept = true;
            } else if (temperature <= 0.0 || dz < -37.0 * temperature) {
                accept = false;
            } else {
                accept = rng.next_double() < std::exp(dz / temperature);
            }
            if (!accept) {
                ++consecutive_rejections;
                continue;
            }
            consecutive_rejections = 0;
            ++successes;
            mask[static_cast<std::size_t>(flip_a)] = !mask[static_cast<std::size_t>(flip_a)];
            if (flip_b >= 0) mask[static_cast<std::size_t>(flip_b)] = !mask[static_cast<std::size_t>(flip_b)];
            rho = new_rho;
            core_size = new_size;
            z = new_z;
            if (z > run_best_z) {
                run_best_z = z;
                run_best_mask = mask;
            }
        }
        if (run_best_z > best_z) {
            best_z = run_best_z;
            best_mask = std::move(run_best_mask);
        }
    }
    DiscretePartition out;
    out.core_mask = best_mask;
    out.rho = be_rho(g, best_mask);
    int core_size = 0;
    for (bool b : best_mask) core_size += b ? 1 : 0;
    out.z_score = detail::be_z(out.rho, be_shuffle_mean(full_sum, n, n - core_size),
                               sigma_for(core_size));
    return out;
}

/// Continuous coreness fit: minimizes sum_{i != j} (A_ij - C_i C_j)^2 by
/// cyclic coordinate updates C_i <- sum_j A_ij C_j / sum_{j != i} C_j^2,
/// clamped at 0, starting from unit-maximum strengths. Stops when the
/// largest coordinate change in a sweep drops below tol.
inline MinresCoreness minres_coreness(const WeightedGraph& g, double tol = 1e-10,
                                      int max_iter = 1000) {
    const int n = g.node_count();
    MinresCoreness out;
    out.values.assign(static_cast<std::size_t>(n), 0.0);
    double strength_norm = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        const double s = g.strength(i);
        out.values[static_cast<std::size_t>(i)] = s;
        strength_norm = std::max(strength_norm, s);
    }
    auto residual_of = [&](const std::vector<double>& c) {
        double sum_sq = 0.0;
        double sum_quad = 0.0;
        for (double v : c) {
            sum_sq += v * v;
            sum_quad += v * v * v * v;
        }
        double cross = 0.0;
        double weight_sq = 0.0;
        for (const auto& [u, v, w] : g.edges()) {
            cross += w * c[static_cast<std::size_t>(u)] * c[static_cast<std::size_t>(v)];
            weight_sq += w * w;
        }
        return 2.0 * weight_sq - 4.0 * cross + (sum_sq * sum_sq - sum_quad);
    };
    if (strength_norm == 0.0) {
        out.residual = 0.0;
        return out;
    }
    for (double& v : out.values) v /= strength_norm;

    for (int iter = 1; iter <= max_iter; ++iter) {
        double total_sq = 0.0;
        for (double v : out.values) total_sq += v * v;
        double max_change = 0.0;
        for (NodeId i = 0; i < n; ++i) {
            double numer = 0.0;
            for (const auto& nb : g.neighbors(i)) {
                numer += nb.weight * out.values[static_cast<std::size_t>(nb.node)];
            }
            const double old = out.values[static_cast<std::size_t>(i)];
            const double denom = total_sq - old * old;
            const double updated = denom > 0.0 ? std::max(0.0, numer / denom) : 0.0;
            out.values[static_cast<std::size_t>(i)] = updated;
            total_sq += updated * updated - old * old;
            max_change = std::max(max_change, std::abs(updated - old));
        }
        out.iterations = iter;
        out.residual_history.push_back(residual_of(out.values));
        if (max_change < tol) {
            out.residual = out.residual_history.back();
            return out;
        }
    }
    out.converged = false;
    out.residual = out.residual_history.back();
    return out;
}

/// Splits a coreness vector at the largest gap between consecutive sorted
/// values; everything above the gap is core.
inline std::vector<bool> largest_gap_split(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) return std::vector<bool>(n, true);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    double best_gap = -1.0;
    std::size_t split_after = 0;  // first index of the core within `order`
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double gap = values[order[i + 1]] - values[order[i]];
        if (gap > best_gap) {
            best_gap = gap;
            split_after = i + 1;
        }
    }
    std::vector<bool> mask(n, false);
    for (std::size_t i = split_after; i < n; ++i) mask[order[i]] = true;
    return mask;
}

namespace detail {

/// Mean hop distance from each node to all other nodes; requires N >= 2.
inline std::vector<double> mean_hop_distances(const WeightedGraph& g) {
    const int n = g.node_count();
    std::vector<double> mean_dist(static_cast<std::size_t>(n), 0.0);
    for (NodeId i = 0; i < n; ++i) {
        const PathLengths paths = shortest_paths(g, i, PathMode::HopCount);
        double sum = 0.0;
        for (NodeId j = 0; j < n; ++j) {
            if (j != i) sum += paths.dist[static_cast<std::size_t>(j)];
        }
        mean_dist[static_cast<std::size_t>(i)] = sum / static_cast<double>(n - 1);
    }
    return mean_dist;
}

struct HolmeCore {
    double closeness = 0.0;  // C_C of the best k-core component
    int k = 0;
    std::vector<NodeId> nodes;
};

}  // namespace detail

/// C_C(U): reciprocal of the mean over i in U of the mean hop distance from
/// i to every other node of the whole graph.
inline double holme_subset_closeness(const WeightedGraph& g, const std::vector<NodeId>& subset) {
    if (subset.empty()) throw std::invalid_argument("empty subset");
    if (g.node_count() < 2) throw std::invalid_argument("need at least 2 nodes");
    const std::vector<double> mean_dist = detail::mean_hop_distances(g);
    double sum = 0.0;
    for (const NodeId i : subset) sum += mean_dist[static_cast<std::size_t>(i)];
    return static_cast<double>(subset.size()) / sum;
}

namespace detail {

/// C_C(U) over the k-core components of g, scanning k upward; distances are
/// measured in the full graph.
inline HolmeCore holme_best_core(const WeightedGraph& g) {
    const std::vector<double> mean_dist = mean_hop_distances(g);
    auto closeness_of = [&](const std::vector<NodeId>& nodes) {
        double sum = 0.0;
        for (const NodeId i : nodes) sum += mean_dist[static_cast<std::size_t>(i)];
        return static_cast<double>(nodes.size()) / sum;
    };
    HolmeCore best;
    for (int k = 1;; ++k) {
        const auto components = k_core(g, k);
        if (components.empty()) break;
        for (const auto& comp : components) {
            const double cc = closeness_of(comp);
            if (cc > best.closeness) {
                best.closeness = cc;
                best.k = k;
                best.nodes = comp;
            }
        }
    }
    return best;
}

inline double holme_ratio(const WeightedGraph& g) {
    const HolmeCore best = holme_best_core(g);
    const std::vector<double> mean_dist = mean_hop_distances(g);
    double total = 0.0;
    for (double d : mean_dist) total += d;
    const double whole_cc = static_cast<double>(g.node_count()) / total;
    return best.closeness / whole_cc;
}

}  // namespace detail

/// Holme's core-periphery coefficient: the closeness ratio of the best
/// k-core against its average over degree-preserving null graphs. Requires a
/// connected graph; disconnected null samples are redrawn (at most 100 tries
/// per sample).
inline HolmeResult holme_coefficient(const WeightedGraph& g, int ensemble_size,
                                     int swaps_per_edge, std::uint64_t seed) {
    if (g.node_count() < 2) throw std::invalid_argument("need at least 2 nodes");
    if (ensemble_size < 1) throw std::invalid_argument("ensemble size must be >= 1");
    if (swaps_per_edge < 0) throw std::invalid_argument("swaps per edge must be >= 0");
    if (connected_components(g).size() != 1) {
        throw std::invalid_argument("graph is disconnected; Holme distances are undefined");
    }
    HolmeResult out;
    const detail::HolmeCore best = detail::holme_best_core(g);
    out.best_k = best.k;
    out.core_nodes = best.nodes;
    out.observed_ratio = detail::holme_ratio(g);

    const std::size_t swaps = static_cast<std::size_t>(swaps_per_edge) * g.edge_count();
    out.null_samples.reserve(static_cast<std::size_t>(ensemble_size));
    for (int s = 0; s < ensemble_size; ++s) {
        bool drawn = false;
        for (int attempt = 0; attempt < 100; ++attempt) {
            const WeightedGraph sample = degree_preserving_randomize(
                g, swaps, mix_seed(seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(attempt)));
            if (connected_components(sample).size() == 1) {
                out.null_samples.push_back(detail::holme_ratio(sample));
                drawn = true;
                break;
            }
        }
        if (!drawn) {
            throw std::runtime_error(
                "could not draw a connected degree-preserving sample in 100 attempts");
        }
    }
    double null_mean = 0.0;
    for (double r : out.null_samples) null_mean += r;
    null_mean /= static_cast<double>(out.null_samples.size());
    out.coefficient = out.observed_ratio - null_mean;
    return out;
}

/// Network capacity K: sum of reciprocal hop distances over unordered
/// connected pairs. Disconnected pairs contribute nothing.
inline double capacity(const WeightedGraph& g) {
    const int n = g.node_count();
    double k = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        const PathLengths paths = shortest_paths(g, i, PathMode::HopCount);
        for (NodeId j = i + 1; j < n; ++j) {
            const double d = paths.dist[static_cast<std::size_t>(j)];
            if (d != kUnreachable && d > 0.0) k += 1.0 / d;
        }
    }
    return k;
}

namespace detail {

inline double capacity_on_active(const WeightedGraph& g, const std::vector<bool>& active) {
    const int n = g.node_count();
    double k = 0.0;
    std::vector<double> dist(static_cast<std::size_t>(n));
    for (NodeId s = 0; s < n; ++s) {
        if (!active[static_cast<std::size_t>(s)]) continue;
        std::fill(dist.begin(), dist.end(), kUnreachable);
        dist[static_cast<std::size_t>(s)] = 0.0;
        std::queue<NodeId> queue;
        queue.push(s);
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop();
            for (const auto& nb : g.neighbors(u)) {
                if (!active[static_cast<std::size_t>(nb.node)]) continue;
                if (dist[static_cast<std::size_t>(nb.node)] == kUnreachable) {
                    dist[static_cast<std::size_t>(nb.node)] = dist[static_cast<std::size_t>(u)] + 1.0;
                    queue.push(nb.node);
                }
            }
        }
        for (NodeId j = s + 1; j < n; ++j) {
            if (!active[static_cast<std::size_t>(j)]) continue;
            const double d = dist[static_cast<std::size_t>(j)];
            if (d != kUnreachable && d > 0.0) k += 1.0 / d;
        }
    }
    return k;
}

}  // namespace detail

/// Da Silva core coefficient: removes nodes most-central-first (ascending
/// mean-distance closeness on the binary skeleton, ties by node index),
/// recording the capacity K_m after each removal. N' is the first index
/// where the cumulative capacity reaches 90% of the total; cc = N'/N.
/// Capacity-free graphs (no edges) get cc = 0.
inline CapacityResult core_coefficient(const WeightedGraph& g) {
    const int n = g.node_count();
    if (n < 2) throw std::invalid_argument("need at least 2 nodes");
    CapacityResult out;
    const CentralityVector cc = closeness(g, PathMode::HopCount);
    std::vector<NodeId> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        const double ca = cc.values[static_cast<std::size_t>(a)];
        const double cb = cc.values[static_cast<std::size_t>(b)];
        if (ca != cb) return ca < cb;
        return a < b;
    });
    out.removal_order = order;
    std::vector<bool> active(static_cast<std::size_t>(n), true);
    out.capacity_trace.reserve(static_cast<std::size_t>(n) + 1);
    out.capacity_trace.push_back(detail::capacity_on_active(g, active));
    for (int m = 0; m < n; ++m) {
        active[static_cast<std::size_t>(order[static_cast<std::size_t>(m)])] = false;
        out.capacity_trace.push_back(detail::capacity_on_active(g, active));
    }
    out.capacity = out.capacity_trace.front();
    double total = 0.0;
    for (double k : out.capacity_trace) total += k;
    if (total <= 0.0) {
        out.core_coefficient = 0.0;
        return out;
    }
    const double target = 0.9 * total;
    double cumulative = 0.0;
    int n_prime = n;
    for (int m = 0; m <= n; ++m) {
        cumulative += out.capacity_trace[static_cast<std::size_t>(m)];
        if (cumulative >= target) {
            n_prime = m;
            break;
        }
    }
    out.core_coefficient = static_cast<double>(n_prime) / static_cast<double>(n);
    return out;
}

}  // namespace corescore
