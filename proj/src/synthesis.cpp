#include "graphsha/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace graphsha {

std::vector<int> compute_class_quota(const std::vector<int>& class_counts, QuotaMode mode) {
    int target;
    if (mode == QuotaMode::Max) {
        target = *std::max_element(class_counts.begin(), class_counts.end());
    } else {
        const double mean =
            std::accumulate(class_counts.begin(), class_counts.end(), 0.0) / class_counts.size();
        target = static_cast<int>(std::llround(mean));
    }
    std::vector<int> quotas(class_counts.size());
    for (size_t c = 0; c < class_counts.size(); ++c)
        quotas[c] = std::max(0, target - class_counts[c]);
    return quotas;
}

std::vector<double> mix_features(std::span<const double> x_anc, std::span<const double> x_aux,
                                 double delta) {
    if (x_anc.size() != x_aux.size())
        throw std::invalid_argument("mix_features: dimension mismatch");
    std::vector<double> out(x_anc.size());
    for (size_t j = 0; j < x_anc.size(); ++j)
        out[j] = delta * x_anc[j] + (1.0 - delta) * x_aux[j];
    return out;
}

int sample_edge_count(const DegreeDistribution& pd, Rng& rng) {
    const int idx = rng.categorical(pd.probs);
    return std::max(1, pd.degrees[idx]);
}

std::vector<int> sample_synth_neighbors(const SparseColumn& weights, int n, Rng& rng) {
    const auto picked = rng.sample_without_replacement(weights.scores, n);
    std::vector<int> nodes;
    nodes.reserve(picked.size());
    for (int i : picked) nodes.push_back(weights.nodes[i]);
    return nodes;
}

SynthesisBatch synthesize_batch(const Graph& g, const ImbalancedSplit& split,
                                const DiffusionMatrix& dm, const HardnessVector& hv,
                                const Matrix& logits, const HardnessConfig& hcfg,
                                const MixupConfig& mcfg, const DegreeDistribution& pd,
                                const std::vector<int>& quotas, Rng& rng) {
    const int total = std::accumulate(quotas.begin(), quotas.end(), 0);
    SynthesisBatch batch;
    batch.features = Matrix(total, g.feature_dim);
    if (total == 0) return batch;

    std::vector<std::vector<int>> train_by_class(g.num_classes);
    for (int v = 0; v < g.num_nodes; ++v)
        if (split.train_mask[v]) train_by_class[g.labels[v]].push_back(v);

    const auto anchors = sample_anchors(hv, g, split, quotas, rng);
    for (size_t m = 0; m < anchors.size(); ++m) {
        const int anc = anchors[m];
        const int anc_label = g.labels[anc];

        int aux = -1;
        for (int attempt = 0; attempt < g.num_classes - 1; ++attempt) {
            const int cls = sample_neighbor_class(logits.row(anc), anc_label, hcfg, rng);
            auto picked = sample_auxiliary(train_by_class[cls], logits, anc_label, hcfg, rng);
            if (picked) {
                aux = *picked;
                break;
            }
        }

        double delta;
        std::vector<double> x;
        if (aux >= 0) {
            delta = rng.beta(mcfg.beta_b1, mcfg.beta_b2);
            x = mix_features(g.features.row(anc), g.features.row(aux), delta);
        } else {
            // every neighbor class came up empty: duplicate the anchor verbatim
            delta = 1.0;
            x.assign(g.features.row(anc).begin(), g.features.row(anc).end());
        }
        std::copy(x.begin(), x.end(),
                  batch.features.data.begin() + m * static_cast<size_t>(g.feature_dim));
        batch.labels.push_back(anc_label);
        batch.provenance.push_back({anc, aux, delta});

        const int n_edges = sample_edge_count(pd, rng);
        const auto weights = one_hop_sampling_weights(dm, g, anc);
        for (int target : sample_synth_neighbors(weights, n_edges, rng))
            batch.edges.emplace_back(static_cast<int>(m), target);
    }
    return batch;
}

Graph augment_graph(const Graph& g, const SynthesisBatch& batch) {
    const int n = g.num_nodes;
    const int m = batch.size();
    Matrix x(n + m, g.feature_dim);
    std::copy(g.features.data.begin(), g.features.data.end(), x.data.begin());
    std::copy(batch.features.data.begin(), batch.features.data.end(),
              x.data.begin() + g.features.data.size());
    std::vector<int> labels = g.labels;
    labels.insert(labels.end(), batch.labels.begin(), batch.labels.end());
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.num_undirected_edges() + batch.edges.size());
    for (int u = 0; u < n; ++u)
        for (int v : g.neighbors(u))
            if (u < v) edges.emplace_back(u, v);
    for (auto [synth, target] : batch.edges) edges.emplace_back(n + synth, target);
    return build_graph(edges, std::move(x), std::move(labels), g.num_classes);
}

std::string batch_to_json(const SynthesisBatch& batch) {
    nlohmann::json doc;
    doc["num_synth"] = batch.size();
    doc["labels"] = batch.labels;
    nlohmann::json edges = nlohmann::json::array();
    for (auto [s, t] : batch.edges) edges.push_back({s, t});
    doc["edges"] = std::move(edges);
    nlohmann::json prov = nlohmann::json::array();
    for (const auto& p : batch.provenance)
        prov.push_back({{"anchor", p.anchor}, {"auxiliary", p.auxiliary}, {"delta", p.delta}});
    doc["provenance"] = std::move(prov);
    nlohmann::json feats = nlohmann::json::array();
    for (int i = 0; i < batch.features.rows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < batch.features.cols; ++j) row.push_back(batch.features(i, j));
        feats.push_back(std::move(row));
    }
    doc["features"] = std::move(feats);
    return doc.dump();
}

}  // namespace graphsha
