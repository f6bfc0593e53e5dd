#pragma once

#include <string>
#include <vector>

#include "graphsha/data.hpp"
#include "graphsha/diffusion.hpp"
#include "graphsha/graph.hpp"
#include "graphsha/hardness.hpp"
#include "graphsha/matrix.hpp"
#include "graphsha/rng.hpp"

namespace graphsha {

struct MixupConfig {
    double beta_b1 = 1.0;  // delta ~ Beta(b1, b2), default mean 0.2
    double beta_b2 = 4.0;
    QuotaMode quota_mode = QuotaMode::Mean;
};

struct Provenance {
    int anchor;
    int auxiliary;  // -1 for the duplicate-anchor fallback
    double delta;
};

// Per-epoch synthesized nodes. Synth node m gets global id N + m in the
// augmented graph; every edge attaches it to an original node inside its
// anchor's closed 1-hop neighborhood.
struct SynthesisBatch {
    Matrix features;                        // M x d
    std::vector<int> labels;                // anchor labels
    std::vector<std::pair<int, int>> edges; // (synth index m, original node id)
    std::vector<Provenance> provenance;

    int size() const { return features.rows; }
    bool empty() const { return features.rows == 0; }
};

// n_c = max(0, target - count_c), target = round(mean) or max of counts.
std::vector<int> compute_class_quota(const std::vector<int>& class_counts, QuotaMode mode);

// Convex combination delta*x_anc + (1-delta)*x_aux.
std::vector<double> mix_features(std::span<const double> x_anc, std::span<const double> x_aux,
                                 double delta);

// Draw from the degree histogram, clamped to >= 1.
int sample_edge_count(const DegreeDistribution& pd, Rng& rng);

// min(n, support) distinct endpoints, weighted without replacement.
std::vector<int> sample_synth_neighbors(const SparseColumn& weights, int n, Rng& rng);

// Full SemiMixup batch: anchors by hardness, neighbor class and auxiliary per
// anchor, delta ~ Beta, features mixed, edge counts from the degree
// distribution, endpoints from the anchor's diffusion-weighted 1-hop
// neighborhood.
SynthesisBatch synthesize_batch(const Graph& g, const ImbalancedSplit& split,
                                const DiffusionMatrix& dm, const HardnessVector& hv,
                                const Matrix& logits, const HardnessConfig& hcfg,
                                const MixupConfig& mcfg, const DegreeDistribution& pd,
                                const std::vector<int>& quotas, Rng& rng);

// Graph with the batch appended (features stacked, synth edges added).
Graph augment_graph(const Graph& g, const SynthesisBatch& batch);

// Debug dump with provenance triples.
std::string batch_to_json(const SynthesisBatch& batch);

}  // namespace graphsha
