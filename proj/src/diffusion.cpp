#include "graphsha/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphsha {

namespace {

// theta_r coefficients up to the truncation point: residual mass <
// series_tolerance or max_terms reached.
std::vector<double> series_coefficients(const DiffusionConfig& cfg) {
    std::vector<double> theta;
    double remaining = 1.0;
    if (cfg.kind == DiffusionKind::Ppr) {
        double coef = cfg.alpha;
        for (int r = 0; r < cfg.max_terms && remaining >= cfg.series_tolerance; ++r) {
            theta.push_back(coef);
            remaining -= coef;
            coef *= (1.0 - cfg.alpha);
        }
    } else {
        double coef = std::exp(-cfg.t);
        for (int r = 0; r < cfg.max_terms && remaining >= cfg.series_tolerance; ++r) {
            theta.push_back(coef);
            remaining -= coef;
            coef *= cfg.t / (r + 1);
        }
    }
    return theta;
}

// One column of S: accumulate theta_r * (T^r e_seed) by repeated application
// of T. work vectors are caller-provided to avoid per-column allocation.
void diffusion_column(const Graph& g, const std::vector<double>& theta, int seed,
                      std::vector<double>& cur, std::vector<double>& next,
                      std::vector<double>& acc) {
    const int n = g.num_nodes;
    std::fill(cur.begin(), cur.end(), 0.0);
    std::fill(acc.begin(), acc.end(), 0.0);
    cur[seed] = 1.0;
    for (size_t r = 0; r < theta.size(); ++r) {
        for (int i = 0; i < n; ++i) acc[i] += theta[r] * cur[i];
        if (r + 1 == theta.size()) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            const double mass = cur[j];
            if (mass == 0.0) continue;
            const int deg = g.degree(j);
            if (deg == 0) {
                next[j] += mass;  // isolated node: self-transition
            } else {
                const double share = mass / deg;
                for (int i : g.neighbors(j)) next[i] += share;
            }
        }
        std::swap(cur, next);
    }
}

SparseColumn top_k_renormalize(const std::vector<double>& dense, int k) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(dense.size()); ++i)
        if (dense[i] > 0.0) idx.push_back(i);
    if (static_cast<int>(idx.size()) > k) {
        std::nth_element(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
            return dense[a] != dense[b] ? dense[a] > dense[b] : a < b;
        });
        idx.resize(k);
    }
    std::sort(idx.begin(), idx.end());
    SparseColumn col;
    double total = 0.0;
    for (int i : idx) total += dense[i];
    for (int i : idx) {
        col.nodes.push_back(i);
        col.scores.push_back(dense[i] / total);
    }
    return col;
}

void validate(const DiffusionConfig& cfg) {
    if (cfg.kind == DiffusionKind::Ppr && (cfg.alpha <= 0.0 || cfg.alpha >= 1.0))
        throw std::invalid_argument("diffusion: alpha must be in (0,1)");
    if (cfg.kind == DiffusionKind::HeatKernel && cfg.t <= 0.0)
        throw std::invalid_argument("diffusion: t must be > 0");
    if (cfg.top_k < 1) throw std::invalid_argument("diffusion: top_k must be >= 1");
}

}  // namespace

double SparseColumn::sum() const {
    return std::accumulate(scores.begin(), scores.end(), 0.0);
}

DiffusionMatrix compute_diffusion(const Graph& g, const DiffusionConfig& cfg) {
    validate(cfg);
    const auto theta = series_coefficients(cfg);
    DiffusionMatrix dm;
    dm.columns.resize(g.num_nodes);
#pragma omp parallel
    {
        std::vector<double> cur(g.num_nodes), next(g.num_nodes), acc(g.num_nodes);
#pragma omp for schedule(dynamic, 16)
        for (int j = 0; j < g.num_nodes; ++j) {
            diffusion_column(g, theta, j, cur, next, acc);
            dm.columns[j] = top_k_renormalize(acc, cfg.top_k);
        }
    }
    return dm;
}

namespace serial {
DiffusionMatrix compute_diffusion(const Graph& g, const DiffusionConfig& cfg) {
    validate(cfg);
    const auto theta = series_coefficients(cfg);
    DiffusionMatrix dm;
    dm.columns.resize(g.num_nodes);
    std::vector<double> cur(g.num_nodes), next(g.num_nodes), acc(g.num_nodes);
    for (int j = 0; j < g.num_nodes; ++j) {
        diffusion_column(g, theta, j, cur, next, acc);
        dm.columns[j] = top_k_renormalize(acc, cfg.top_k);
    }
    return dm;
}
}  // namespace serial

std::vector<double> dense_diffusion_column(const Graph& g, const DiffusionConfig& cfg, int seed) {
    validate(cfg);
    const auto theta = series_coefficients(cfg);
    std::vector<double> cur(g.num_nodes), next(g.num_nodes), acc(g.num_nodes);
    diffusion_column(g, theta, seed, cur, next, acc);
    return acc;
}

SparseColumn one_hop_sampling_weights(const DiffusionMatrix& dm, const Graph& g, int anchor) {
    if (anchor < 0 || anchor >= g.num_nodes)
        throw std::invalid_argument("one_hop_sampling_weights: anchor out of range");
    std::vector<int> closed;
    closed.reserve(g.degree(anchor) + 1);
    auto nbrs = g.neighbors(anchor);
    size_t k = 0;
    while (k < nbrs.size() && nbrs[k] < anchor) closed.push_back(nbrs[k++]);
    closed.push_back(anchor);
    while (k < nbrs.size()) closed.push_back(nbrs[k++]);

    const auto& col = dm.columns[anchor];
    SparseColumn out;
    // both lists sorted: intersect
    size_t a = 0, b = 0;
    while (a < closed.size() && b < col.nodes.size()) {
        if (closed[a] < col.nodes[b]) {
            ++a;
        } else if (closed[a] > col.nodes[b]) {
            ++b;
        } else {
            if (col.scores[b] > 0.0) {
                out.nodes.push_back(closed[a]);
                out.scores.push_back(col.scores[b]);
            }
            ++a;
            ++b;
        }
    }
    const double total = out.sum();
    if (total <= 0.0) {
        out.nodes = closed;
        out.scores.assign(closed.size(), 1.0 / closed.size());
        return out;
    }
    for (double& s : out.scores) s /= total;
    return out;
}

std::string diffusion_cache_name(const Graph& g, const DiffusionConfig& cfg) {
    std::ostringstream ss;
    ss << "diffusion_" << std::hex << graph_content_hash(g) << std::dec << "_"
       << (cfg.kind == DiffusionKind::Ppr ? "ppr" : "hk") << "_"
       << (cfg.kind == DiffusionKind::Ppr ? cfg.alpha : cfg.t) << "_k" << cfg.top_k << "_tol"
       << cfg.series_tolerance << "_m" << cfg.max_terms << ".json";
    return ss.str();
}

void save_diffusion(const std::string& path, const DiffusionMatrix& dm) {
    nlohmann::json doc;
    doc["version"] = 1;
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : dm.columns) cols.push_back({{"nodes", c.nodes}, {"scores", c.scores}});
    doc["columns"] = std::move(cols);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write diffusion cache: " + path);
    out << doc.dump();
}

DiffusionMatrix load_diffusion(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open diffusion cache: " + path);
    nlohmann::json doc;
    in >> doc;
    if (!doc.contains("version") || doc["version"].get<int>() != 1)
        throw std::runtime_error("diffusion cache " + path + ": unsupported version");
    DiffusionMatrix dm;
    for (const auto& c : doc["columns"]) {
        SparseColumn col;
        col.nodes = c["nodes"].get<std::vector<int>>();
        col.scores = c["scores"].get<std::vector<double>>();
        dm.columns.push_back(std::move(col));
    }
    return dm;
}

}  // namespace graphsha
