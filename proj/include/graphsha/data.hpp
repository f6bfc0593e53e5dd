#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphsha/graph.hpp"
#include "graphsha/rng.hpp"

namespace graphsha {

struct ImbalancedSplit {
    std::vector<uint8_t> train_mask, val_mask, test_mask;  // size N each
    std::vector<int> class_counts_train;                   // size C
    double rho = 1.0;                                      // realized max/min count ratio

    std::vector<int> train_nodes() const;
    std::vector<int> nodes_of(const std::vector<uint8_t>& mask) const;
};

struct SbmSpec {
    std::vector<int> block_sizes;
    double p_in = 0.1;
    double p_out = 0.01;
    int feature_dim = 16;
    double feature_separation = 1.0;  // distance between class means
    uint64_t seed = 0;
};

enum class QuotaMode { Mean, Max };

// Graph container: single JSON document, schema version 1.
Graph load_graph_container(const std::string& path);
void save_graph_container(const std::string& path, const Graph& g);

// Edge-list text file ("u v" per line) + features CSV + labels CSV,
// joined by node index.
Graph load_edge_list(const std::string& edges_path, const std::string& features_csv,
                     const std::string& labels_csv);

// Deterministic given spec.seed. Features per class: Gaussian around a
// class-specific mean, means pairwise separated by feature_separation.
Graph generate_sbm(const SbmSpec& spec);

// Long-tailed split: per-class train counts n_c = round(n_max * rho^{-c/(C-1)})
// (clamped >= 1) with classes ranked by available size descending; from each
// class's remainder, val_per_class go to validation, the rest to test.
ImbalancedSplit make_long_tailed_split(const Graph& g, double rho, int n_max,
                                       int val_per_class, uint64_t seed);

// Step split: ceil(C/2) major classes at n_maj, the rest at
// max(1, round(n_maj/rho)); n_maj derived from the train fraction.
// Validation sampled class-balanced from the remainder.
ImbalancedSplit make_step_split(const Graph& g, double rho,
                                std::array<double, 3> fractions, uint64_t seed);

// Per-class counts of a step split given n_maj (exposed for testing).
std::vector<int> step_class_counts(int num_classes, int n_maj, double rho);

// Duplicate minor training nodes (features, label, incident edges) until
// every class reaches the quota.
std::pair<Graph, ImbalancedSplit> upsample_split(const Graph& g, const ImbalancedSplit& split,
                                                 QuotaMode mode);

}  // namespace graphsha
