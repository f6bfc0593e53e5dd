#include "graphsha/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphsha {

namespace {

using nlohmann::json;

std::vector<int> shuffled(std::vector<int> v, Rng& rng) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
        int j = rng.uniform_int(0, i);
        std::swap(v[i], v[j]);
    }
    return v;
}

double realized_rho(const std::vector<int>& counts) {
    int hi = 0, lo = 0;
    for (int c : counts) {
        if (c <= 0) continue;
        if (hi == 0) hi = lo = c;
        hi = std::max(hi, c);
        lo = std::min(lo, c);
    }
    return lo > 0 ? static_cast<double>(hi) / lo : 1.0;
}

// classes ordered by available node count descending, ties by index
std::vector<int> classes_by_size(const std::vector<int>& avail) {
    std::vector<int> order(avail.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return avail[a] > avail[b]; });
    return order;
}

}  // namespace

std::vector<int> ImbalancedSplit::nodes_of(const std::vector<uint8_t>& mask) const {
    std::vector<int> out;
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> ImbalancedSplit::train_nodes() const { return nodes_of(train_mask); }

Graph load_graph_container(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph container: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("graph container parse error in " + path + ": " + e.what());
    }
    if (!doc.contains("version") || doc["version"].get<int>() != 1)
        throw std::invalid_argument("graph container " + path + ": unsupported schema version");
    for (const char* key : {"num_nodes", "num_classes", "edges", "features", "labels"})
        if (!doc.contains(key))
            throw std::invalid_argument("graph container " + path + ": missing field '" + key + "'");

    const int n = doc["num_nodes"].get<int>();
    const int c = doc["num_classes"].get<int>();
    const auto& feats = doc["features"];
    const auto& labels = doc["labels"];
    if (static_cast<int>(feats.size()) != n)
        throw std::invalid_argument("graph container: features has " +
                                    std::to_string(feats.size()) + " rows, expected " +
                                    std::to_string(n));
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("graph container: labels has " +
                                    std::to_string(labels.size()) + " entries, expected " +
                                    std::to_string(n));
    const int d = n > 0 ? static_cast<int>(feats[0].size()) : 0;
    Matrix x(n, d);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(feats[i].size()) != d)
            throw std::invalid_argument("graph container: feature row " + std::to_string(i) +
                                        " has length " + std::to_string(feats[i].size()) +
                                        ", expected " + std::to_string(d));
        for (int j = 0; j < d; ++j) x(i, j) = feats[i][j].get<double>();
    }
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) y[i] = labels[i].get<int>();
    std::vector<std::pair<int, int>> edges;
    edges.reserve(doc["edges"].size());
    for (const auto& e : doc["edges"]) {
        if (e.size() != 2)
            throw std::invalid_argument("graph container: edge entry is not a pair");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return build_graph(edges, std::move(x), std::move(y), c);
}

void save_graph_container(const std::string& path, const Graph& g) {
    json doc;
    doc["version"] = 1;
    doc["num_nodes"] = g.num_nodes;
    doc["num_classes"] = g.num_classes;
    json edges = json::array();
    for (int u = 0; u < g.num_nodes; ++u)
        for (int v : g.neighbors(u))
            if (u < v) edges.push_back({u, v});
    doc["edges"] = std::move(edges);
    json feats = json::array();
    for (int i = 0; i < g.num_nodes; ++i) {
        json row = json::array();
        for (int j = 0; j < g.feature_dim; ++j) row.push_back(g.features(i, j));
        feats.push_back(std::move(row));
    }
    doc["features"] = std::move(feats);
    doc["labels"] = g.labels;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph container: " + path);
    out << doc.dump();
}

Graph load_edge_list(const std::string& edges_path, const std::string& features_csv,
                     const std::string& labels_csv) {
    std::ifstream fin(features_csv);
    if (!fin) throw std::invalid_argument("cannot open features csv: " + features_csv);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(fin, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows[0].size())
            throw std::invalid_argument("features csv: ragged row at line " +
                                        std::to_string(rows.size() + 1));
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    const int d = n > 0 ? static_cast<int>(rows[0].size()) : 0;
    Matrix x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = rows[i][j];

    std::ifstream lin(labels_csv);
    if (!lin) throw std::invalid_argument("cannot open labels csv: " + labels_csv);
    std::vector<int> y;
    while (std::getline(lin, line)) {
        if (line.empty()) continue;
        y.push_back(std::stoi(line));
    }
    int c = 0;
    for (int v : y) c = std::max(c, v + 1);

    std::ifstream ein(edges_path);
    if (!ein) throw std::invalid_argument("cannot open edge list: " + edges_path);
    std::vector<std::pair<int, int>> edges;
    int lineno = 0;
    while (std::getline(ein, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        int u, v;
        if (!(ss >> u >> v))
            throw std::invalid_argument("edge list " + edges_path + ": parse error at line " +
                                        std::to_string(lineno));
        edges.emplace_back(u, v);
    }
    return build_graph(edges, std::move(x), std::move(y), c);
}

Graph generate_sbm(const SbmSpec& spec) {
    if (spec.p_out < 0 || spec.p_in > 1 || spec.p_out > spec.p_in)
        throw std::invalid_argument("generate_sbm: require 0 <= p_out <= p_in <= 1");
    const int c = static_cast<int>(spec.block_sizes.size());
    for (int b : spec.block_sizes)
        if (b < 1) throw std::invalid_argument("generate_sbm: block sizes must be >= 1");
    if (spec.feature_dim < c)
        throw std::invalid_argument("generate_sbm: feature_dim must be >= number of blocks");

    int n = 0;
    std::vector<int> labels;
    for (int k = 0; k < c; ++k) {
        n += spec.block_sizes[k];
        labels.insert(labels.end(), spec.block_sizes[k], k);
    }
    Rng rng(spec.seed);
    Rng edge_rng = rng.fork(1);
    Rng feat_rng = rng.fork(2);

    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double p = labels[i] == labels[j] ? spec.p_in : spec.p_out;
            if (p > 0.0 && edge_rng.uniform() < p) edges.emplace_back(i, j);
        }

    // class means on orthogonal axes, pairwise distance = feature_separation
    const double scale = spec.feature_separation / std::sqrt(2.0);
    Matrix x(n, spec.feature_dim);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < spec.feature_dim; ++j)
            x(i, j) = feat_rng.normal() + (j == labels[i] ? scale : 0.0);
    }
    return build_graph(edges, std::move(x), std::move(labels), c);
}

ImbalancedSplit make_long_tailed_split(const Graph& g, double rho, int n_max,
                                       int val_per_class, uint64_t seed) {
    const int c = g.num_classes;
    const int n = g.num_nodes;
    std::vector<int> avail(c, 0);
    for (int v = 0; v < n; ++v) avail[g.labels[v]]++;
    const auto order = classes_by_size(avail);

    std::vector<int> quota(c, 0);
    for (int r = 0; r < c; ++r) {
        const double expo = c > 1 ? -static_cast<double>(r) / (c - 1) : 0.0;
        const int cls = order[r];
        quota[cls] = std::max(1, static_cast<int>(std::llround(n_max * std::pow(rho, expo))));
        if (quota[cls] > avail[cls])
            throw std::invalid_argument("make_long_tailed_split: class " + std::to_string(cls) +
                                        " has " + std::to_string(avail[cls]) +
                                        " nodes, needs " + std::to_string(quota[cls]));
    }

    Rng rng(seed);
    ImbalancedSplit sp;
    sp.train_mask.assign(n, 0);
    sp.val_mask.assign(n, 0);
    sp.test_mask.assign(n, 0);
    sp.class_counts_train.assign(c, 0);
    std::vector<std::vector<int>> by_class(c);
    for (int v = 0; v < n; ++v) by_class[g.labels[v]].push_back(v);
    for (int cls = 0; cls < c; ++cls) {
        auto nodes = shuffled(by_class[cls], rng);
        int i = 0;
        for (; i < quota[cls]; ++i) sp.train_mask[nodes[i]] = 1;
        sp.class_counts_train[cls] = quota[cls];
        const int val_end = std::min<int>(i + val_per_class, static_cast<int>(nodes.size()));
        for (; i < val_end; ++i) sp.val_mask[nodes[i]] = 1;
        for (; i < static_cast<int>(nodes.size()); ++i) sp.test_mask[nodes[i]] = 1;
    }
    sp.rho = realized_rho(sp.class_counts_train);
    return sp;
}

std::vector<int> step_class_counts(int num_classes, int n_maj, double rho) {
    const int n_major = (num_classes + 1) / 2;
    const int n_min = std::max(1, static_cast<int>(std::llround(n_maj / rho)));
    std::vector<int> counts(num_classes, n_min);
    for (int i = 0; i < n_major; ++i) counts[i] = n_maj;
    return counts;
}

ImbalancedSplit make_step_split(const Graph& g, double rho,
                                std::array<double, 3> fractions, uint64_t seed) {
    if (std::abs(fractions[0] + fractions[1] + fractions[2] - 1.0) > 1e-9)
        throw std::invalid_argument("make_step_split: fractions must sum to 1");
    const int c = g.num_classes;
    const int n = g.num_nodes;
    std::vector<int> avail(c, 0);
    for (int v = 0; v < n; ++v) avail[g.labels[v]]++;
    const auto order = classes_by_size(avail);
    const int n_major = (c + 1) / 2;
    const int train_budget = static_cast<int>(std::llround(fractions[0] * n));

    // largest feasible n_maj under per-class availability and total budget
    int n_maj = 0;
    for (int cand = avail[order[0]]; cand >= 1; --cand) {
        const auto counts = step_class_counts(c, cand, rho);
        bool ok = true;
        int total = 0;
        for (int r = 0; r < c; ++r) {
            if (counts[r] > avail[order[r]]) ok = false;
            total += counts[r];
        }
        if (ok && total <= train_budget) {
            n_maj = cand;
            break;
        }
    }
    if (n_maj == 0)
        throw std::invalid_argument("make_step_split: no feasible major-class count for the "
                                    "given fractions and class sizes");
    const auto pos_counts = step_class_counts(c, n_maj, rho);
    std::vector<int> quota(c, 0);
    for (int r = 0; r < c; ++r) quota[order[r]] = pos_counts[r];

    Rng rng(seed);
    ImbalancedSplit sp;
    sp.train_mask.assign(n, 0);
    sp.val_mask.assign(n, 0);
    sp.test_mask.assign(n, 0);
    sp.class_counts_train.assign(c, 0);
    const int val_per_class = static_cast<int>(std::llround(fractions[1] * n / c));
    std::vector<std::vector<int>> by_class(c);
    for (int v = 0; v < n; ++v) by_class[g.labels[v]].push_back(v);
    for (int cls = 0; cls < c; ++cls) {
        auto nodes = shuffled(by_class[cls], rng);
        if (quota[cls] > static_cast<int>(nodes.size()))
            throw std::invalid_argument("make_step_split: class " + std::to_string(cls) +
                                        " has too few nodes");
        int i = 0;
        for (; i < quota[cls]; ++i) sp.train_mask[nodes[i]] = 1;
        sp.class_counts_train[cls] = quota[cls];
        const int val_end = std::min<int>(i + val_per_class, static_cast<int>(nodes.size()));
        for (; i < val_end; ++i) sp.val_mask[nodes[i]] = 1;
        for (; i < static_cast<int>(nodes.size()); ++i) sp.test_mask[nodes[i]] = 1;
    }
    sp.rho = realized_rho(sp.class_counts_train);
    return sp;
}

std::pair<Graph, ImbalancedSplit> upsample_split(const Graph& g, const ImbalancedSplit& split,
                                                 QuotaMode mode) {
    const int c = g.num_classes;
    const auto& counts = split.class_counts_train;
    int target;
    if (mode == QuotaMode::Max) {
        target = *std::max_element(counts.begin(), counts.end());
    } else {
        double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / c;
        target = static_cast<int>(std::llround(mean));
    }

    std::vector<std::vector<int>> train_by_class(c);
    for (int v = 0; v < g.num_nodes; ++v)
        if (split.train_mask[v]) train_by_class[g.labels[v]].push_back(v);

    std::vector<int> dup_sources;  // original node each new node copies
    for (int cls = 0; cls < c; ++cls) {
        int have = counts[cls];
        int i = 0;
        while (have < target) {
            dup_sources.push_back(train_by_class[cls][i % train_by_class[cls].size()]);
            ++i;
            ++have;
        }
    }
    if (dup_sources.empty()) return {g, split};

    const int n_new = g.num_nodes + static_cast<int>(dup_sources.size());
    Matrix x(n_new, g.feature_dim);
    std::copy(g.features.data.begin(), g.features.data.end(), x.data.begin());
    std::vector<int> labels = g.labels;
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < g.num_nodes; ++u)
        for (int v : g.neighbors(u))
            if (u < v) edges.emplace_back(u, v);
    for (size_t k = 0; k < dup_sources.size(); ++k) {
        const int src = dup_sources[k];
        const int id = g.num_nodes + static_cast<int>(k);
        std::copy(g.features.row(src).begin(), g.features.row(src).end(),
                  x.data.begin() + static_cast<size_t>(id) * g.feature_dim);
        labels.push_back(g.labels[src]);
        for (int nbr : g.neighbors(src)) edges.emplace_back(id, nbr);
    }
    Graph g2 = build_graph(edges, std::move(x), std::move(labels), c);

    ImbalancedSplit sp2 = split;
    sp2.train_mask.resize(n_new, 1);
    sp2.val_mask.resize(n_new, 0);
    sp2.test_mask.resize(n_new, 0);
    for (int src : dup_sources) sp2.class_counts_train[g.labels[src]]++;
    sp2.rho = realized_rho(sp2.class_counts_train);
    return {std::move(g2), std::move(sp2)};
}

}  // namespace graphsha
