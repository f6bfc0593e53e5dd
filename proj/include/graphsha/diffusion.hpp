#pragma once

#include <string>
#include <vector>

#include "graphsha/graph.hpp"

namespace graphsha {

enum class DiffusionKind { Ppr, HeatKernel };

struct DiffusionConfig {
    DiffusionKind kind = DiffusionKind::Ppr;
    double alpha = 0.05;            // PPR teleport probability
    double t = 1.0;                 // HK diffusion time
    int top_k = 128;
    double series_tolerance = 1e-7; // stop when residual coefficient mass < this
    int max_terms = 512;
};

struct SparseColumn {
    std::vector<int> nodes;
    std::vector<double> scores;
    double sum() const;
};

// Column j holds the diffusion scores seeded at node j, truncated to top_k
// entries and renormalized to sum 1. Immutable once built.
struct DiffusionMatrix {
    std::vector<SparseColumn> columns;
};

// S = sum_r theta_r T^r with T = A D^{-1} (column-stochastic; isolated nodes
// self-transition), then per-column top-K and renormalization. Ties in the
// top-K cut broken by lower node id.
DiffusionMatrix compute_diffusion(const Graph& g, const DiffusionConfig& cfg);

namespace serial {
DiffusionMatrix compute_diffusion(const Graph& g, const DiffusionConfig& cfg);
}

// Truncated-series column seeded at `seed`, before top-K and renormalization.
std::vector<double> dense_diffusion_column(const Graph& g, const DiffusionConfig& cfg, int seed);

// Anchor's diffusion column restricted to {anchor} ∪ N(anchor), renormalized;
// uniform over the closed neighborhood if every restricted score is 0.
SparseColumn one_hop_sampling_weights(const DiffusionMatrix& dm, const Graph& g, int anchor);

// On-disk cache, keyed by (graph content hash, config). Versioned JSON.
std::string diffusion_cache_name(const Graph& g, const DiffusionConfig& cfg);
void save_diffusion(const std::string& path, const DiffusionMatrix& dm);
DiffusionMatrix load_diffusion(const std::string& path);

}  // namespace graphsha
