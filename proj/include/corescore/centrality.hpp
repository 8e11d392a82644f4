#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <stack>
#include <stdexcept>
#include <string>
#include <vector>

#include "corescore/graph.hpp"

namespace corescore {

enum class CentralityMethod { Strength, Closeness, Betweenness, Eigenvector };

struct CentralityVector {
    CentralityMethod method = CentralityMethod::Strength;
    std::vector<double> values;
    /// Method-specific settings the values were computed with.
    std::string parameters;
};

inline CentralityVector strength_centrality(const WeightedGraph& g) {
    CentralityVector out{CentralityMethod::Strength, {}, ""};
    out.values.reserve(static_cast<std::size_t>(g.node_count()));
    for (NodeId i = 0; i < g.node_count(); ++i) out.values.push_back(g.strength(i));
    return out;
}

/// Closeness as the mean shortest-path distance from a node to all nodes,
/// including itself: CC_j = (1/N) * sum_i P(i,j). Smaller is more central;
/// any unreachable node makes the value +inf.
inline CentralityVector closeness(const WeightedGraph& g, PathMode mode = PathMode::WeightSum) {
    const int n = g.node_count();
    CentralityVector out{CentralityMethod::Closeness, std::vector<double>(static_cast<std::size_t>(n), 0.0),
                         mode == PathMode::HopCount ? "mode=hop" : "mode=weight"};
    for (NodeId j = 0; j < n; ++j) {
        const PathLengths paths = shortest_paths(g, j, mode);
        double sum = 0.0;
        for (double d : paths.dist) sum += d;
        out.values[static_cast<std::size_t>(j)] = sum / static_cast<double>(n);
    }
    return out;
}

/// Shortest-path betweenness on the binary skeleton (Brandes accumulation).
/// Counts ordered source-target pairs with endpoints excluded, so the value
/// for the middle of a 3-path is 2. Weighted inputs should be thresholded
/// first; positive weights are treated as edges here.
inline CentralityVector betweenness(const WeightedGraph& g) {
    const int n = g.node_count();
    CentralityVector out{CentralityMethod::Betweenness, std::vector<double>(static_cast<std::size_t>(n), 0.0),
                         "skeleton=binary pairs=ordered endpoints=excluded"};
    std::vector<double> sigma(static_cast<std::size_t>(n));
    std::vector<double> delta(static_cast<std::size_t>(n));
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<std::vector<NodeId>> preds(static_cast<std::size_t>(n));
    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(n));
    for (NodeId s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        for (auto& p : preds) p.clear();
        order.clear();
        sigma[static_cast<std::size_t>(s)] = 1.0;
        dist[static_cast<std::size_t>(s)] = 0;
        std::queue<NodeId> queue;
        queue.push(s);
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop();
            order.push_back(u);
            for (const auto& nb : g.neighbors(u)) {
                const NodeId v = nb.node;
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    queue.push(v);
                }
                if (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(u)] + 1) {
                    sigma[static_cast<std::size_t>(v)] += sigma[static_cast<std::size_t>(u)];
                    preds[static_cast<std::size_t>(v)].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId w = *it;
            for (const NodeId v : preds[static_cast<std::size_t>(w)]) {
                delta[static_cast<std::size_t>(v)] +=
                    sigma[static_cast<std::size_t>(v)] / sigma[static_cast<std::size_t>(w)] *
                    (1.0 + delta[static_cast<std::size_t>(w)]);
            }
            if (w != s) out.values[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
        }
    }
    return out;
}

/// Leading eigenvector of the weight matrix by power iteration, normalized to
/// unit maximum. The iteration runs on A + sI with s = max strength, which
/// has the same eigenvectors and converges on bipartite graphs too. Requires
/// a connected graph.
inline CentralityVector eigenvector_centrality(const WeightedGraph& g, double tol = 1e-10,
                                               int max_iter = 10000) {
    const int n = g.node_count();
    if (n == 0) throw std::invalid_argument("empty graph");
    const auto components = connected_components(g);
    if (components.size() > 1) {
        std::string msg = "graph is disconnected (" + std::to_string(components.size()) +
                          " components; first nodes:";
        for (const auto& comp : components) msg += " " + g.label(comp.front());
        msg += ")";
        throw std::invalid_argument(msg);
    }
    CentralityVector out{CentralityMethod::Eigenvector, std::vector<double>(static_cast<std::size_t>(n), 1.0),
                         "tol=" + std::to_string(tol) + " max_iter=" + std::to_string(max_iter)};
    if (n == 1) return out;
    double shift = 0.0;
    for (NodeId i = 0; i < n; ++i) shift = std::max(shift, g.strength(i));
    std::vector<double>& x = out.values;
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int iter = 0; iter < max_iter; ++iter) {
        double max_entry = 0.0;
        for (NodeId i = 0; i < n; ++i) {
            double acc = shift * x[static_cast<std::size_t>(i)];
            for (const auto& nb : g.neighbors(i)) {
                acc += nb.weight * x[static_cast<std::size_t>(nb.node)];
            }
            next[static_cast<std::size_t>(i)] = acc;
            max_entry = std::max(max_entry, acc);
        }
        double max_change = 0.0;
        for (NodeId i = 0; i < n; ++i) {
            next[static_cast<std::size_t>(i)] /= max_entry;
            max_change = std::max(max_change,
                                  std::abs(next[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]));
        }
        x.swap(next);
        if (max_change < tol) return out;
    }
    throw std::runtime_error("eigenvector centrality did not converge after " +
                             std::to_string(max_iter) + " iterations");
}

}  // namespace corescore
