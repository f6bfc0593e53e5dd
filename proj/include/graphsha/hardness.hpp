#pragma once

#include <optional>
#include <vector>

#include "graphsha/data.hpp"
#include "graphsha/graph.hpp"
#include "graphsha/matrix.hpp"
#include "graphsha/rng.hpp"

namespace graphsha {

enum class HardnessMetric { Confidence, Knn };

struct HardnessConfig {
    HardnessMetric metric = HardnessMetric::Confidence;
    double temperature = 1.0;
    int knn_k = 5;
};

// Per-node hardness in [0,1]; only training-node entries are consumed by the
// samplers.
using HardnessVector = std::vector<double>;

struct SourcePair {
    int anchor;
    int neighbor_class;
    int auxiliary;  // -1 when the degenerate duplicate-anchor fallback fires
};

// H_i = 1 - softmax(Z_i / T)[label_i], max-subtracted for stability.
// Throws on non-finite logits.
HardnessVector confidence_hardness(const Matrix& logits, const std::vector<int>& labels,
                                   const HardnessConfig& cfg);

// Fraction of the k nearest training-node embeddings (Euclidean, excluding
// self) with a different label. Distance ties broken by lower node id.
// Non-training nodes get hardness 0.
HardnessVector knn_hardness(const Matrix& embeddings, const std::vector<int>& labels,
                            const std::vector<int>& train_nodes, const HardnessConfig& cfg);

// For each class c, draw quotas[c] anchors with replacement from class-c
// training nodes with probability proportional to hardness; uniform fallback
// when the class's hardness is all zero.
std::vector<int> sample_anchors(const HardnessVector& hv, const Graph& g,
                                const ImbalancedSplit& split, const std::vector<int>& quotas,
                                Rng& rng);

// Softmax(Z_anc / T) with the anchor's own class masked out, renormalized.
int sample_neighbor_class(std::span<const double> logits_anc, int anchor_label,
                          const HardnessConfig& cfg, Rng& rng);

// Draw from candidates with probability proportional to their softmax
// confidence on the anchor's class. nullopt signals NoAuxiliary (empty set).
std::optional<int> sample_auxiliary(const std::vector<int>& candidates, const Matrix& logits,
                                    int anchor_label, const HardnessConfig& cfg, Rng& rng);

}  // namespace graphsha
