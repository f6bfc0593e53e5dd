#include "graphsha/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>
#include <string>

namespace graphsha {

Graph build_graph(const std::vector<std::pair<int, int>>& edge_list, Matrix features,
                  std::vector<int> labels, int num_classes) {
    const int n = features.rows;
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("build_graph: labels size " + std::to_string(labels.size()) +
                                    " != num_nodes " + std::to_string(n));
    for (int i = 0; i < n; ++i)
        if (labels[i] < 0 || labels[i] >= num_classes)
            throw std::invalid_argument("build_graph: label out of range at node " + std::to_string(i));

    std::vector<std::pair<int, int>> edges;
    edges.reserve(edge_list.size() * 2);
    for (auto [u, v] : edge_list) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("build_graph: edge endpoint out of range: (" +
                                        std::to_string(u) + "," + std::to_string(v) + ")");
        if (u == v) continue;  // self-loops dropped
        edges.emplace_back(u, v);
        edges.emplace_back(v, u);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.num_nodes = n;
    g.num_classes = num_classes;
    g.feature_dim = features.cols;
    g.features = std::move(features);
    g.labels = std::move(labels);
    g.adj_offsets.assign(n + 1, 0);
    for (auto [u, v] : edges) g.adj_offsets[u + 1]++;
    for (int i = 0; i < n; ++i) g.adj_offsets[i + 1] += g.adj_offsets[i];
    g.adj_targets.reserve(edges.size());
    for (auto [u, v] : edges) g.adj_targets.push_back(v);  // already sorted per source
    return g;
}

DegreeDistribution degree_distribution(const Graph& g) {
    std::map<int, int> counts;
    for (int v = 0; v < g.num_nodes; ++v) counts[g.degree(v)]++;
    DegreeDistribution dd;
    for (auto [deg, cnt] : counts) {
        dd.degrees.push_back(deg);
        dd.probs.push_back(static_cast<double>(cnt) / g.num_nodes);
    }
    return dd;
}

SparseMatrix normalized_adjacency(const Graph& g) {
    const int n = g.num_nodes;
    SparseMatrix s;
    s.rows = s.cols = n;
    s.offsets.assign(n + 1, 0);
    std::vector<double> inv_sqrt_deg(n);
    for (int v = 0; v < n; ++v) inv_sqrt_deg[v] = 1.0 / std::sqrt(g.degree(v) + 1.0);
    for (int v = 0; v < n; ++v) s.offsets[v + 1] = s.offsets[v] + g.degree(v) + 1;
    s.targets.reserve(s.offsets[n]);
    s.values.reserve(s.offsets[n]);
    for (int v = 0; v < n; ++v) {
        auto nbrs = g.neighbors(v);
        size_t k = 0;
        // merge self into the sorted neighbor list
        while (k < nbrs.size() && nbrs[k] < v) {
            s.targets.push_back(nbrs[k]);
            s.values.push_back(inv_sqrt_deg[v] * inv_sqrt_deg[nbrs[k]]);
            ++k;
        }
        s.targets.push_back(v);
        s.values.push_back(inv_sqrt_deg[v] * inv_sqrt_deg[v]);
        while (k < nbrs.size()) {
            s.targets.push_back(nbrs[k]);
            s.values.push_back(inv_sqrt_deg[v] * inv_sqrt_deg[nbrs[k]]);
            ++k;
        }
    }
    return s;
}

SparseMatrix mean_aggregator(const Graph& g, bool transpose) {
    const int n = g.num_nodes;
    SparseMatrix s;
    s.rows = s.cols = n;
    s.offsets.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) s.offsets[v + 1] = s.offsets[v] + g.degree(v);
    s.targets = g.adj_targets;
    s.values.resize(s.targets.size());
    for (int v = 0; v < n; ++v) {
        for (int e = s.offsets[v]; e < s.offsets[v + 1]; ++e) {
            const int u = s.targets[e];
            // forward: row v averages over neighbors of v; transpose: weight 1/deg(u)
            s.values[e] = transpose ? 1.0 / g.degree(u) : 1.0 / g.degree(v);
        }
    }
    return s;
}

uint64_t graph_content_hash(const Graph& g) {
    // FNV-1a over structure, labels, and feature bytes
    uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* p, size_t len) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    mix(&g.num_nodes, sizeof(g.num_nodes));
    mix(&g.num_classes, sizeof(g.num_classes));
    mix(&g.feature_dim, sizeof(g.feature_dim));
    mix(g.adj_offsets.data(), g.adj_offsets.size() * sizeof(int));
    mix(g.adj_targets.data(), g.adj_targets.size() * sizeof(int));
    mix(g.labels.data(), g.labels.size() * sizeof(int));
    mix(g.features.data.data(), g.features.data.size() * sizeof(double));
    return h;
}

}  // namespace graphsha
