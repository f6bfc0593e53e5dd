#include "graphsha/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphsha {

namespace {

// softmax(z / T) with max-subtraction
std::vector<double> softmax(std::span<const double> z, double temperature) {
    const double inv_t = 1.0 / temperature;
    double mx = z[0];
    for (double v : z) mx = std::max(mx, v);
    std::vector<double> p(z.size());
    double total = 0.0;
    for (size_t i = 0; i < z.size(); ++i) {
        p[i] = std::exp((z[i] - mx) * inv_t);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

}  // namespace

HardnessVector confidence_hardness(const Matrix& logits, const std::vector<int>& labels,
                                   const HardnessConfig& cfg) {
    if (cfg.temperature <= 0.0)
        throw std::invalid_argument("confidence_hardness: temperature must be > 0");
    for (double v : logits.data)
        if (!std::isfinite(v)) throw std::invalid_argument("confidence_hardness: non-finite logit");
    HardnessVector hv(logits.rows);
    for (int i = 0; i < logits.rows; ++i) {
        const auto p = softmax(logits.row(i), cfg.temperature);
        hv[i] = 1.0 - p[labels[i]];
    }
    return hv;
}

HardnessVector knn_hardness(const Matrix& embeddings, const std::vector<int>& labels,
                            const std::vector<int>& train_nodes, const HardnessConfig& cfg) {
    const int k = cfg.knn_k;
    if (k < 1) throw std::invalid_argument("knn_hardness: knn_k must be >= 1");
    if (k > static_cast<int>(train_nodes.size()) - 1)
        throw std::invalid_argument("knn_hardness: knn_k exceeds training-node count minus one");
    HardnessVector hv(embeddings.rows, 0.0);
    std::vector<std::pair<double, int>> dist;
    for (int v : train_nodes) {
        dist.clear();
        const auto ev = embeddings.row(v);
        for (int u : train_nodes) {
            if (u == v) continue;
            double d2 = 0.0;
            const auto eu = embeddings.row(u);
            for (size_t j = 0; j < ev.size(); ++j) {
                const double diff = ev[j] - eu[j];
                d2 += diff * diff;
            }
            dist.emplace_back(d2, u);
        }
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        int other = 0;
        for (int i = 0; i < k; ++i)
            if (labels[dist[i].second] != labels[v]) ++other;
        hv[v] = static_cast<double>(other) / k;
    }
    return hv;
}

std::vector<int> sample_anchors(const HardnessVector& hv, const Graph& g,
                                const ImbalancedSplit& split, const std::vector<int>& quotas,
                                Rng& rng) {
    std::vector<std::vector<int>> train_by_class(g.num_classes);
    for (int v = 0; v < g.num_nodes; ++v)
        if (split.train_mask[v]) train_by_class[g.labels[v]].push_back(v);

    std::vector<int> anchors;
    for (int cls = 0; cls < g.num_classes; ++cls) {
        if (quotas[cls] <= 0) continue;
        const auto& pool = train_by_class[cls];
        if (pool.empty())
            throw std::invalid_argument("sample_anchors: quota for class " + std::to_string(cls) +
                                        " but no training nodes");
        std::vector<double> w(pool.size());
        double total = 0.0;
        for (size_t i = 0; i < pool.size(); ++i) total += (w[i] = hv[pool[i]]);
        if (total <= 0.0) std::fill(w.begin(), w.end(), 1.0);  // uniform fallback
        for (int n = 0; n < quotas[cls]; ++n) anchors.push_back(pool[rng.categorical(w)]);
    }
    return anchors;
}

int sample_neighbor_class(std::span<const double> logits_anc, int anchor_label,
                          const HardnessConfig& cfg, Rng& rng) {
    auto p = softmax(logits_anc, cfg.temperature);
    p[anchor_label] = 0.0;
    return rng.categorical(p);
}

std::optional<int> sample_auxiliary(const std::vector<int>& candidates, const Matrix& logits,
                                    int anchor_label, const HardnessConfig& cfg, Rng& rng) {
    if (candidates.empty()) return std::nullopt;
    std::vector<double> w(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i)
        w[i] = softmax(logits.row(candidates[i]), cfg.temperature)[anchor_label];
    return candidates[rng.categorical(w)];
}

}  // namespace graphsha
