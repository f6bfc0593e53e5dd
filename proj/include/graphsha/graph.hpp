#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "graphsha/matrix.hpp"

namespace graphsha {

// Immutable undirected graph: CSR adjacency (sorted, symmetric, deduplicated,
// no self-loops), dense features, integer labels.
struct Graph {
    int num_nodes = 0;
    int num_classes = 0;
    int feature_dim = 0;
    std::vector<int> adj_offsets;  // size num_nodes+1
    std::vector<int> adj_targets;
    Matrix features;            // num_nodes x feature_dim
    std::vector<int> labels;    // values in [0, num_classes)

    int degree(int v) const { return adj_offsets[v + 1] - adj_offsets[v]; }
    std::span<const int> neighbors(int v) const {
        return {adj_targets.data() + adj_offsets[v],
                static_cast<size_t>(adj_offsets[v + 1] - adj_offsets[v])};
    }
    size_t num_undirected_edges() const { return adj_targets.size() / 2; }
};

// Empirical degree histogram over all nodes (degree-0 included).
struct DegreeDistribution {
    std::vector<int> degrees;      // sorted ascending
    std::vector<double> probs;     // same length, sums to 1
};

// Symmetrizes, deduplicates, drops self-loops. Edge pairs are directed on
// input. Throws std::invalid_argument on out-of-range ids/labels or a
// feature row-count mismatch.
Graph build_graph(const std::vector<std::pair<int, int>>& edge_list, Matrix features,
                  std::vector<int> labels, int num_classes);

DegreeDistribution degree_distribution(const Graph& g);

// GCN normalization: D~^{-1/2} (A + I) D~^{-1/2} over the closed neighborhood.
SparseMatrix normalized_adjacency(const Graph& g);

// Row-normalized adjacency without self-loops (mean neighbor aggregation);
// isolated nodes get an all-zero row. transpose=true yields its transpose
// (column-normalized), needed for backprop through the aggregation.
SparseMatrix mean_aggregator(const Graph& g, bool transpose = false);

// Content hash of structure, features, and labels (diffusion cache key).
uint64_t graph_content_hash(const Graph& g);

}  // namespace graphsha
