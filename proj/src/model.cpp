#include "graphsha/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "graphsha/kernels.hpp"
#include "graphsha/metrics.hpp"

namespace graphsha {

namespace {

Matrix glorot_matrix(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    const double s = std::sqrt(6.0 / (rows + cols));
    for (double& v : m.data) v = (rng.uniform() * 2.0 - 1.0) * s;
    return m;
}

Matrix concat_cols(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i) {
        std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
        std::copy(b.row(i).begin(), b.row(i).end(), out.row(i).begin() + a.cols);
    }
    return out;
}

void relu_inplace(Matrix& m) {
    for (double& v : m.data) v = v > 0.0 ? v : 0.0;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ModelParams ModelParams::glorot(Backbone backbone, int feature_dim, int hidden_dim,
                                int num_classes, Rng& rng) {
    const int in1 = backbone == Backbone::Sage ? 2 * feature_dim : feature_dim;
    const int in2 = backbone == Backbone::Sage ? 2 * hidden_dim : hidden_dim;
    ModelParams p;
    p.hidden_dim = hidden_dim;
    p.w1 = glorot_matrix(in1, hidden_dim, rng);
    p.w2 = glorot_matrix(in2, num_classes, rng);
    return p;
}

GraphOperators GraphOperators::build(const Graph& g, Backbone backbone) {
    GraphOperators ops;
    if (backbone == Backbone::Gcn) {
        ops.a_hat = normalized_adjacency(g);
    } else {
        ops.mean = mean_aggregator(g, false);
        ops.mean_t = mean_aggregator(g, true);
    }
    return ops;
}

Matrix forward(Backbone backbone, const GraphOperators& ops, const Matrix& features,
               const ModelParams& params, ForwardCache* cache) {
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    if (backbone == Backbone::Gcn) {
        kernels::spmm(ops.a_hat, features, c.p0);
        kernels::matmul(c.p0, params.w1, c.pre1);
        c.h1 = c.pre1;
        relu_inplace(c.h1);
        kernels::spmm(ops.a_hat, c.h1, c.p1);
        kernels::matmul(c.p1, params.w2, c.logits);
    } else {
        Matrix m0;
        kernels::spmm(ops.mean, features, m0);
        c.p0 = concat_cols(features, m0);
        kernels::matmul(c.p0, params.w1, c.pre1);
        c.h1 = c.pre1;
        relu_inplace(c.h1);
        Matrix m1;
        kernels::spmm(ops.mean, c.h1, m1);
        c.p1 = concat_cols(c.h1, m1);
        kernels::matmul(c.p1, params.w2, c.logits);
    }
    return c.logits;
}

Matrix gcn_forward(const Graph& g, const ModelParams& params) {
    const auto ops = GraphOperators::build(g, Backbone::Gcn);
    return forward(Backbone::Gcn, ops, g.features, params);
}

Matrix sage_forward(const Graph& g, const ModelParams& params) {
    const auto ops = GraphOperators::build(g, Backbone::Sage);
    return forward(Backbone::Sage, ops, g.features, params);
}

double loss_and_gradients(Backbone backbone, const GraphOperators& ops, const ForwardCache& cache,
                          const ModelParams& params, const std::vector<int>& supervised_nodes,
                          const std::vector<int>& labels, const std::vector<double>& node_weights,
                          double weight_decay, Gradients& grads) {
    if (supervised_nodes.empty())
        throw std::invalid_argument("loss_and_gradients: no supervised nodes");
    const Matrix& z = cache.logits;
    const int num_classes = z.cols;

    double weight_total = 0.0;
    for (double w : node_weights) weight_total += w;

    // dZ = weight_i / W * (softmax(Z_i) - onehot(y_i)) on supervised rows
    Matrix dz(z.rows, z.cols);
    double loss = 0.0;
    for (size_t s = 0; s < supervised_nodes.size(); ++s) {
        const int i = supervised_nodes[s];
        const auto zi = z.row(i);
        double mx = zi[0];
        for (double v : zi) mx = std::max(mx, v);
        double total = 0.0;
        for (int c = 0; c < num_classes; ++c) total += std::exp(zi[c] - mx);
        const double log_total = std::log(total) + mx;
        const double w = node_weights[s] / weight_total;
        loss += w * (log_total - zi[labels[i]]);
        for (int c = 0; c < num_classes; ++c) {
            double p = std::exp(zi[c] - mx) / total;
            dz(i, c) += w * (p - (c == labels[i] ? 1.0 : 0.0));
        }
    }
    if (!std::isfinite(loss)) throw std::runtime_error("loss_and_gradients: non-finite loss");

    kernels::matmul_at_b(cache.p1, dz, grads.w2);  // gW2 = P1^T dZ

    Matrix dp1;
    kernels::matmul_a_bt(dz, params.w2, dp1);      // dP1 = dZ W2^T

    Matrix dh1;
    if (backbone == Backbone::Gcn) {
        kernels::spmm(ops.a_hat, dp1, dh1);        // A_hat symmetric
    } else {
        // dP1 splits into the direct path and the aggregated path
        const int h = params.hidden_dim;
        Matrix direct(dp1.rows, h), via_mean(dp1.rows, h);
        for (int i = 0; i < dp1.rows; ++i)
            for (int j = 0; j < h; ++j) {
                direct(i, j) = dp1(i, j);
                via_mean(i, j) = dp1(i, h + j);
            }
        kernels::spmm(ops.mean_t, via_mean, dh1);
        for (size_t k = 0; k < dh1.data.size(); ++k) dh1.data[k] += direct.data[k];
    }
    for (size_t k = 0; k < dh1.data.size(); ++k)
        if (cache.pre1.data[k] <= 0.0) dh1.data[k] = 0.0;

    kernels::matmul_at_b(cache.p0, dh1, grads.w1);  // gW1 = P0^T dpre1

    // L2 regularization
    double reg = 0.0;
    for (size_t k = 0; k < params.w1.data.size(); ++k) {
        reg += params.w1.data[k] * params.w1.data[k];
        grads.w1.data[k] += weight_decay * params.w1.data[k];
    }
    for (size_t k = 0; k < params.w2.data.size(); ++k) {
        reg += params.w2.data[k] * params.w2.data[k];
        grads.w2.data[k] += weight_decay * params.w2.data[k];
    }
    return loss + 0.5 * weight_decay * reg;
}

AdamState::AdamState(const ModelParams& p)
    : m1(p.w1.rows, p.w1.cols),
      v1(p.w1.rows, p.w1.cols),
      m2(p.w2.rows, p.w2.cols),
      v2(p.w2.rows, p.w2.cols) {}

void AdamState::step(ModelParams& params, const Gradients& grads, double lr) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    ++step_count;
    const double bc1 = 1.0 - std::pow(beta1, step_count);
    const double bc2 = 1.0 - std::pow(beta2, step_count);
    auto update = [&](Matrix& w, Matrix& m, Matrix& v, const Matrix& g) {
        for (size_t k = 0; k < w.data.size(); ++k) {
            m.data[k] = beta1 * m.data[k] + (1.0 - beta1) * g.data[k];
            v.data[k] = beta2 * v.data[k] + (1.0 - beta2) * g.data[k] * g.data[k];
            w.data[k] -= lr * (m.data[k] / bc1) / (std::sqrt(v.data[k] / bc2) + eps);
        }
    };
    update(params.w1, m1, v1, grads.w1);
    update(params.w2, m2, v2, grads.w2);
}

std::vector<int> predict(const Matrix& logits) {
    std::vector<int> preds(logits.rows);
    for (int i = 0; i < logits.rows; ++i) {
        const auto row = logits.row(i);
        int best = 0;
        for (int c = 1; c < logits.cols; ++c)
            if (row[c] > row[best]) best = c;
        preds[i] = best;
    }
    return preds;
}

std::string EpochRecord::to_ndjson() const {
    std::ostringstream ss;
    ss << "{\"epoch\":" << epoch << ",\"loss\":" << loss << ",\"val_bacc\":" << val_bacc
       << ",\"synth_seconds\":" << synth_seconds << ",\"epoch_seconds\":" << epoch_seconds << "}";
    return ss.str();
}

TrainResult train(const Graph& g, const ImbalancedSplit& split, const TrainConfig& cfg,
                  const DiffusionMatrix* dm) {
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate must be > 0");
    if (cfg.max_epochs < 1) throw std::invalid_argument("train: max_epochs must be >= 1");

    Rng root(cfg.seed);
    Rng init_rng = root.fork(0);
    Rng synth_rng = root.fork(1);

    // mode-specific working graph and per-node loss weights
    Graph g_upsampled;
    const Graph* g_work = &g;
    const ImbalancedSplit* split_work = &split;
    ImbalancedSplit split_upsampled;
    if (cfg.mode == TrainMode::Upsample) {
        std::tie(g_upsampled, split_upsampled) = upsample_split(g, split, cfg.mixup.quota_mode);
        g_work = &g_upsampled;
        split_work = &split_upsampled;
    }
    std::vector<int> train_nodes = split_work->train_nodes();
    std::vector<double> train_weights(train_nodes.size(), 1.0);
    if (cfg.mode == TrainMode::Reweight) {
        // class weights proportional to inverse training counts, mean 1
        std::vector<double> wc(g.num_classes);
        double total = 0.0;
        for (int c = 0; c < g.num_classes; ++c) total += 1.0 / split.class_counts_train[c];
        for (int c = 0; c < g.num_classes; ++c)
            wc[c] = (1.0 / split.class_counts_train[c]) * g.num_classes / total;
        for (size_t s = 0; s < train_nodes.size(); ++s)
            train_weights[s] = wc[g.labels[train_nodes[s]]];
    }

    // GraphSHA machinery, computed once per run
    std::vector<int> quotas(g.num_classes, 0);
    int total_quota = 0;
    DiffusionMatrix dm_local;
    const DiffusionMatrix* dm_ptr = dm;
    DegreeDistribution pd;
    if (cfg.mode == TrainMode::GraphSha) {
        quotas = compute_class_quota(split.class_counts_train, cfg.mixup.quota_mode);
        total_quota = std::accumulate(quotas.begin(), quotas.end(), 0);
        if (total_quota > 0) {
            if (!dm_ptr) {
                dm_local = compute_diffusion(g, cfg.diffusion);
                dm_ptr = &dm_local;
            }
            pd = degree_distribution(g);
        }
    }
    const bool synthesizing = cfg.mode == TrainMode::GraphSha && total_quota > 0;

    const auto ops_orig = GraphOperators::build(g, cfg.backbone);
    const auto ops_work = g_work == &g ? ops_orig : GraphOperators::build(*g_work, cfg.backbone);

    TrainResult result;
    ModelParams params = ModelParams::glorot(cfg.backbone, g.feature_dim, cfg.hidden_dim,
                                             g.num_classes, init_rng);
    AdamState adam(params);
    EpochState& state = result.state;
    state.cached_logits = Matrix(g.num_nodes, g.num_classes);
    int best_epoch = -1;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const auto t_epoch = std::chrono::steady_clock::now();
        double synth_seconds = 0.0;

        ForwardCache cache;
        double loss;
        Gradients grads;
        if (synthesizing) {
            const auto t_synth = std::chrono::steady_clock::now();
            HardnessVector hv;
            if (cfg.hardness.metric == HardnessMetric::Confidence) {
                hv = epoch == 0 ? HardnessVector(g.num_nodes, 0.0)
                                : confidence_hardness(state.cached_logits, g.labels, cfg.hardness);
            } else {
                hv = epoch == 0 ? HardnessVector(g.num_nodes, 0.0)
                                : knn_hardness(state.cached_embeddings, g.labels, train_nodes,
                                               cfg.hardness);
            }
            const auto batch = synthesize_batch(g, split, *dm_ptr, hv, state.cached_logits,
                                                cfg.hardness, cfg.mixup, pd, quotas, synth_rng);
            const Graph g_aug = augment_graph(g, batch);
            synth_seconds = seconds_since(t_synth);

            const auto ops_aug = GraphOperators::build(g_aug, cfg.backbone);
            forward(cfg.backbone, ops_aug, g_aug.features, params, &cache);
            std::vector<int> supervised = train_nodes;
            std::vector<double> weights = train_weights;
            for (int s = 0; s < batch.size(); ++s) {
                supervised.push_back(g.num_nodes + s);
                weights.push_back(1.0);
            }
            loss = loss_and_gradients(cfg.backbone, ops_aug, cache, params, supervised,
                                      g_aug.labels, weights, cfg.weight_decay, grads);
        } else {
            forward(cfg.backbone, ops_work, g_work->features, params, &cache);
            loss = loss_and_gradients(cfg.backbone, ops_work, cache, params, train_nodes,
                                      g_work->labels, train_weights, cfg.weight_decay, grads);
        }
        if (!std::isfinite(loss))
            throw std::runtime_error("train: diverged at epoch " + std::to_string(epoch));
        adam.step(params, grads, cfg.learning_rate);

        // post-update forward on the ORIGINAL graph: validation score and the
        // logit/embedding cache for next epoch's hardness
        ForwardCache eval_cache;
        forward(cfg.backbone, ops_orig, g.features, params, &eval_cache);
        state.cached_logits = eval_cache.logits;
        if (cfg.hardness.metric == HardnessMetric::Knn) state.cached_embeddings = eval_cache.h1;
        state.epoch = epoch;

        const auto preds = predict(eval_cache.logits);
        const auto val_report = evaluate(preds, g.labels, split.val_mask, g.num_classes);
        const double val_bacc = val_report.balanced_accuracy;
        if (val_bacc > state.best_val) {
            state.best_val = val_bacc;
            state.best_params = params;
            best_epoch = epoch;
        }
        result.trace.push_back(
            {epoch, loss, val_bacc, synth_seconds, seconds_since(t_epoch)});
        if (epoch - best_epoch >= cfg.patience) break;
    }
    result.params = state.best_params;
    return result;
}

}  // namespace graphsha
