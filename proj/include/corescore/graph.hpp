#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "corescore/rng.hpp"

namespace corescore {

using NodeId = int;

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct LabeledEdge {
    std::string source;
    std::string target;
    double weight = 1.0;
};

struct Neighbor {
    NodeId node;
    double weight;
};

/// Symmetric nonnegative weighted graph over labeled nodes.
///
/// Immutable after construction, so concurrent reads are safe. Neighbor lists
/// are sorted by node index. Self-loops are rejected, duplicate edges are
/// summed, and zero-weight edges are dropped (their endpoints still register
/// as nodes).
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// Builds from labeled edges. `declared_nodes` registers nodes up front
    /// (in order), which is the only way to obtain isolated nodes.
    static WeightedGraph from_edges(const std::vector<LabeledEdge>& edges,
                                    const std::vector<std::string>& declared_nodes = {}) {
        WeightedGraph g;
        for (const auto& label : declared_nodes) g.add_node(label);
        std::unordered_map<std::uint64_t, double> accum;
        std::vector<std::uint64_t> order;
        for (const auto& e : edges) {
            if (e.weight < 0.0) {
                throw std::invalid_argument("negative edge weight on " + e.source + " -- " +
                                            e.target);
            }
            if (e.source == e.target) {
                throw std::invalid_argument("self-loop on node " + e.source);
            }
            const NodeId u = g.add_node(e.source);
            const NodeId v = g.add_node(e.target);
            const std::uint64_t key = pair_key(u, v);
            auto [it, inserted] = accum.try_emplace(key, 0.0);
            if (inserted) order.push_back(key);
            it->second += e.weight;
        }
        g.adjacency_.resize(g.labels_.size());
        for (const std::uint64_t key : order) {
            const double w = accum[key];
            if (w <= 0.0) continue;
            const NodeId u = static_cast<NodeId>(key >> 32);
            const NodeId v = static_cast<NodeId>(key & 0xffffffffu);
            g.adjacency_[u].push_back({v, w});
            g.adjacency_[v].push_back({u, w});
            ++g.edge_count_;
            g.total_weight_ += w;
        }
        g.sort_neighbors();
        return g;
    }

    /// Builds from index edges (u < v required, no duplicates) with the given
    /// labels; used by generators and graph transforms.
    static WeightedGraph from_index_edges(std::vector<std::string> labels,
                                          const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
        WeightedGraph g;
        g.labels_ = std::move(labels);
        for (std::size_t i = 0; i < g.labels_.size(); ++i) {
            auto [it, inserted] = g.index_.try_emplace(g.labels_[i], static_cast<NodeId>(i));
            if (!inserted) throw std::invalid_argument("duplicate node label " + g.labels_[i]);
        }
        g.adjacency_.resize(g.labels_.size());
        const NodeId n = static_cast<NodeId>(g.labels_.size());
        for (const auto& [u, v, w] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
            if (u == v) throw std::invalid_argument("self-loop on node " + g.labels_[u]);
            if (w < 0.0) throw std::invalid_argument("negative edge weight");
            if (w <= 0.0) continue;
            g.adjacency_[u].push_back({v, w});
            g.adjacency_[v].push_back({u, w});
            ++g.edge_count_;
            g.total_weight_ += w;
        }
        g.sort_neighbors();
        return g;
    }

    /// Default labels "1".."n".
    static std::vector<std::string> numbered_labels(int n) {
        std::vector<std::string> labels;
        labels.reserve(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
        return labels;
    }

    int node_count() const { return static_cast<int>(adjacency_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(NodeId i) const { return labels_.at(static_cast<std::size_t>(i)); }

    std::optional<NodeId> index_of(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<Neighbor>& neighbors(NodeId i) const {
        return adjacency_.at(static_cast<std::size_t>(i));
    }

    int degree(NodeId i) const { return static_cast<int>(neighbors(i).size()); }

    /// Row sum of the weight matrix; equals degree on binary graphs.
    double strength(NodeId i) const {
        double s = 0.0;
        for (const auto& nb : neighbors(i)) s += nb.weight;
        return s;
    }

    double weight(NodeId i, NodeId j) const {
        const auto& nbrs = neighbors(i);
        auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j,
                                   [](const Neighbor& nb, NodeId node) { return nb.node < node; });
        if (it != nbrs.end() && it->node == j) return it->weight;
        return 0.0;
    }

    bool has_edge(NodeId i, NodeId j) const { return weight(i, j) > 0.0; }

    std::size_t edge_count() const { return edge_count_; }
    double total_weight() const { return total_weight_; }

    /// Undirected edges as (u, v, w) with u < v, ascending.
    std::vector<std::tuple<NodeId, NodeId, double>> edges() const {
        std::vector<std::tuple<NodeId, NodeId, double>> out;
        out.reserve(edge_count_);
        for (NodeId u = 0; u < node_count(); ++u) {
            for (const auto& nb : adjacency_[static_cast<std::size_t>(u)]) {
                if (nb.node > u) out.emplace_back(u, nb.node, nb.weight);
            }
        }
        return out;
    }

    /// Same structure with node i moved to position perm[i]; perm must be a
    /// permutation of 0..n-1. Labels move with their nodes.
    WeightedGraph relabeled(const std::vector<NodeId>& perm) const {
        const int n = node_count();
        if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation size mismatch");
        std::vector<std::string> new_labels(static_cast<std::size_t>(n));
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (NodeId i = 0; i < n; ++i) {
            const NodeId p = perm[static_cast<std::size_t>(i)];
            if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
                throw std::invalid_argument("not a permutation");
            }
            seen[static_cast<std::size_t>(p)] = true;
            new_labels[static_cast<std::size_t>(p)] = labels_[static_cast<std::size_t>(i)];
        }
        std::vector<std::tuple<NodeId, NodeId, double>> new_edges;
        new_edges.reserve(edge_count_);
        for (const auto& [u, v, w] : edges()) {
            NodeId a = perm[static_cast<std::size_t>(u)];
            NodeId b = perm[static_cast<std::size_t>(v)];
            if (a > b) std::swap(a, b);
            new_edges.emplace_back(a, b, w);
        }
        return from_index_edges(std::move(new_labels), new_edges);
    }

private:
    NodeId add_node(const std::string& label) {
        auto it = index_.find(label);
        if (it != index_.end()) return it->second;
        const NodeId id = static_cast<NodeId>(labels_.size());
        labels_.push_back(label);
        index_.emplace(label, id);
        return id;
    }

    static std::uint64_t pair_key(NodeId u, NodeId v) {
        if (u > v) std::swap(u, v);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
    }

    void sort_neighbors() {
        for (auto& nbrs : adjacency_) {
            std::sort(nbrs.begin(), nbrs.end(),
                      [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
        }
    }

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::size_t edge_count_ = 0;
    double total_weight_ = 0.0;
};

enum class PathMode { HopCount, WeightSum };

struct PathLengths {
    NodeId source = 0;
    PathMode mode = PathMode::HopCount;
    std::vector<double> dist;  // +inf for unreachable nodes
};

/// Single-source shortest paths. HopCount treats every edge as one step;
/// WeightSum minimizes the total edge weight (Dijkstra, weights are positive
/// by construction).
inline PathLengths shortest_paths(const WeightedGraph& g, NodeId source, PathMode mode) {
    const int n = g.node_count();
    if (source < 0 || source >= n) throw std::invalid_argument("invalid source node");
    PathLengths out{source, mode, std::vector<double>(static_cast<std::size_t>(n), kUnreachable)};
    if (mode == PathMode::HopCount) {
        std::queue<NodeId> queue;
        out.dist[static_cast<std::size_t>(source)] = 0.0;
        queue.push(source);
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop();
            const double du = out.dist[static_cast<std::size_t>(u)];
            for (const auto& nb : g.neighbors(u)) {
                if (out.dist[static_cast<std::size_t>(nb.node)] == kUnreachable) {
                    out.dist[static_cast<std::size_t>(nb.node)] = du + 1.0;
                    queue.push(nb.node);
                }
            }
        }
    } else {
        using Item = std::pair<double, NodeId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        out.dist[static_cast<std::size_t>(source)] = 0.0;
        heap.push({0.0, source});
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (d > out.dist[static_cast<std::size_t>(u)]) continue;
            for (const auto& nb : g.neighbors(u)) {
                const double nd = d + nb.weight;
                if (nd < out.dist[static_cast<std::size_t>(nb.node)]) {
                    out.dist[static_cast<std::size_t>(nb.node)] = nd;
                    heap.push({nd, nb.node});
                }
            }
        }
    }
    return out;
}

/// Connected components of the positive-weight skeleton, each sorted, ordered
/// by smallest member.
inline std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<NodeId>> components;
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    for (NodeId start = 0; start < n; ++start) {
        if (visited[static_cast<std::size_t>(start)]) continue;
        std::vector<NodeId> comp;
        std::queue<NodeId> queue;
        visited[static_cast<std::size_t>(start)] = true;
        queue.push(start);
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop();
            comp.push_back(u);
            for (const auto& nb : g.neighbors(u)) {
                if (!visited[static_cast<std::size_t>(nb.node)]) {
                    visited[static_cast<std::size_t>(nb.node)] = true;
                    queue.push(nb.node);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

/// k-core decomposition on the binary skeleton: peel nodes of degree < k,
/// then split the survivors into connected components. Each component is a
/// maximal connected subgraph with all degrees >= k. Empty result if nothing
/// survives.
inline std::vector<std::vector<NodeId>> k_core(const WeightedGraph& g, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const int n = g.node_count();
    std::vector<int> deg(static_cast<std::size_t>(n));
    std::vector<bool> removed(static_cast<std::size_t>(n), false);
    std::queue<NodeId> peel;
    for (NodeId i = 0; i < n; ++i) {
        deg[static_cast<std::size_t>(i)] = g.degree(i);
        if (deg[static_cast<std::size_t>(i)] < k) {
            removed[static_cast<std::size_t>(i)] = true;
            peel.push(i);
        }
    }
    while (!peel.empty()) {
        const NodeId u = peel.front();
        peel.pop();
        for (const auto& nb : g.neighbors(u)) {
            if (removed[static_cast<std::size_t>(nb.node)]) continue;
            if (--deg[static_cast<std::size_t>(nb.node)] < k) {
                removed[static_cast<std::size_t>(nb.node)] = true;
                peel.push(nb.node);
            }
        }
    }
    std::vector<std::vector<NodeId>> components;
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    for (NodeId start = 0; start < n; ++start) {
        if (removed[static_cast<std::size_t>(start)] || visited[static_cast<std::size_t>(start)]) continue;
        std::vector<NodeId> comp;
        std::queue<NodeId> queue;
        visited[static_cast<std::size_t>(start)] = true;
        queue.push(start);
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop();
            comp.push_back(u);
            for (const auto& nb : g.neighbors(u)) {
                if (removed[static_cast<std::size_t>(nb.node)] ||
                    visited[static_cast<std::size_t>(nb.node)]) {
                    continue;
                }
                visited[static_cast<std::size_t>(nb.node)] = true;
                queue.push(nb.node);
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

/// Degree-preserving randomization of the binary skeleton via double-edge
/// swaps; self-loops and multi-edges are rejected. Runs until `swaps` moves
/// were accepted or the attempt budget runs out (some graphs, e.g. K_4, admit
/// no valid swap at all). Result is binary. Graphs with < 2 edges are
/// returned unchanged.
inline WeightedGraph degree_preserving_randomize(const WeightedGraph& g, std::size_t swaps,
                                                 std::uint64_t seed) {
    std::vector<std::pair<NodeId, NodeId>> edge_list;
    std::unordered_set<std::uint64_t> edge_set;
    auto key = [](NodeId a, NodeId b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
    };
    for (const auto& [u, v, w] : g.edges()) {
        edge_list.emplace_back(u, v);
        edge_set.insert(key(u, v));
    }
    const std::size_t m = edge_list.size();
    auto rebuild = [&]() {
        std::vector<std::tuple<NodeId, NodeId, double>> out;
        out.reserve(m);
        for (auto [u, v] : edge_list) {
            if (u > v) std::swap(u, v);
            out.emplace_back(u, v, 1.0);
        }
        return WeightedGraph::from_index_edges(g.labels(), out);
    };
    if (m < 2 || swaps == 0) return rebuild();
    Rng rng(seed);
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    const std::size_t budget = 200 * swaps + 1000;
    while (accepted < swaps && attempts < budget) {
        ++attempts;
        const std::size_t e1 = rng.next_below(m);
        const std::size_t e2 = rng.next_below(m);
        if (e1 == e2) continue;
        auto [a, b] = edge_list[e1];
        auto [c, d] = edge_list[e2];
        if (rng.next_bool()) std::swap(c, d);
        // proposed rewiring: (a,b),(c,d) -> (a,c),(b,d)
        if (a == c || b == d || a == d || b == c) continue;
        const std::uint64_t k1 = key(a, c);
        const std::uint64_t k2 = key(b, d);
        if (edge_set.count(k1) || edge_set.count(k2)) continue;
        edge_set.erase(key(a, b));
        edge_set.erase(key(c, d));
        edge_set.insert(k1);
        edge_set.insert(k2);
        edge_list[e1] = {a, c};
        edge_list[e2] = {b, d};
        ++accepted;
    }
    return rebuild();
}

/// Keeps edges with weight >= t at weight 1; everything else is dropped.
inline WeightedGraph threshold_binarize(const WeightedGraph& g, double t) {
    std::vector<std::tuple<NodeId, NodeId, double>> kept;
    for (const auto& [u, v, w] : g.edges()) {
        if (w >= t) kept.emplace_back(u, v, 1.0);
    }
    return WeightedGraph::from_index_edges(g.labels(), kept);
}

}  // namespace corescore
