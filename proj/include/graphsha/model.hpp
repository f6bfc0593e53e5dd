#pragma once

#include <string>
#include <vector>

#include "graphsha/data.hpp"
#include "graphsha/diffusion.hpp"
#include "graphsha/graph.hpp"
#include "graphsha/hardness.hpp"
#include "graphsha/matrix.hpp"
#include "graphsha/rng.hpp"
#include "graphsha/synthesis.hpp"

namespace graphsha {

enum class Backbone { Gcn, Sage };
enum class TrainMode { Vanilla, Upsample, Reweight, GraphSha };

// Two-layer model weights. GCN: W1 d x h, W2 h x C. SAGE concatenates the
// node state with the neighbor mean, so W1 is 2d x h and W2 is 2h x C.
struct ModelParams {
    Matrix w1, w2;
    int hidden_dim = 0;

    static ModelParams glorot(Backbone backbone, int feature_dim, int hidden_dim,
                              int num_classes, Rng& rng);
};

struct TrainConfig {
    Backbone backbone = Backbone::Gcn;
    int hidden_dim = 64;
    double learning_rate = 0.01;
    double weight_decay = 5e-4;
    int max_epochs = 2000;
    int patience = 200;
    uint64_t seed = 0;
    TrainMode mode = TrainMode::Vanilla;
    HardnessConfig hardness;
    MixupConfig mixup;
    DiffusionConfig diffusion;
};

// Message-passing operators precomputed per graph.
struct GraphOperators {
    SparseMatrix a_hat;   // GCN normalized adjacency
    SparseMatrix mean;    // SAGE mean aggregator
    SparseMatrix mean_t;  // its transpose (backward pass)

    static GraphOperators build(const Graph& g, Backbone backbone);
};

// Intermediate activations kept for the backward pass.
struct ForwardCache {
    Matrix p0;    // GCN: A_hat X        SAGE: [X | mean(X)]
    Matrix pre1;  // first-layer pre-activation
    Matrix h1;    // ReLU(pre1)
    Matrix p1;    // GCN: A_hat H1       SAGE: [H1 | mean(H1)]
    Matrix logits;
};

Matrix forward(Backbone backbone, const GraphOperators& ops, const Matrix& features,
               const ModelParams& params, ForwardCache* cache = nullptr);

// Convenience single-graph entry points.
Matrix gcn_forward(const Graph& g, const ModelParams& params);
Matrix sage_forward(const Graph& g, const ModelParams& params);

struct Gradients {
    Matrix w1, w2;
};

// Weighted mean cross-entropy over the supervised nodes plus an L2 term
// 0.5 * weight_decay * (|W1|^2 + |W2|^2); gradients by reverse accumulation.
// node_weights must align with supervised_nodes; pass all-ones when unused.
double loss_and_gradients(Backbone backbone, const GraphOperators& ops, const ForwardCache& cache,
                          const ModelParams& params, const std::vector<int>& supervised_nodes,
                          const std::vector<int>& labels, const std::vector<double>& node_weights,
                          double weight_decay, Gradients& grads);

// Adaptive-moment gradient descent.
struct AdamState {
    Matrix m1, v1, m2, v2;
    int step_count = 0;

    explicit AdamState(const ModelParams& p);
    void step(ModelParams& params, const Gradients& grads, double lr);
};

// Argmax predictions, ties to the lowest class index.
std::vector<int> predict(const Matrix& logits);

struct EpochRecord {
    int epoch;
    double loss;
    double val_bacc;
    double synth_seconds;   // batch construction only
    double epoch_seconds;
    std::string to_ndjson() const;
};

struct EpochState {
    Matrix cached_logits;     // previous-epoch logits on the original graph
    Matrix cached_embeddings; // previous-epoch hidden layer (KNN hardness)
    int epoch = 0;
    double best_val = -1.0;
    ModelParams best_params;
};

struct TrainResult {
    ModelParams params;  // best-validation snapshot
    EpochState state;
    std::vector<EpochRecord> trace;
};

// Full training loop: per-epoch GraphSHA synthesis (in GraphSha mode),
// forward/backward, Adam update, logit caching on the original graph, early
// stop on validation bAcc. `dm` may carry a precomputed diffusion matrix;
// when null it is computed on demand in GraphSha mode.
TrainResult train(const Graph& g, const ImbalancedSplit& split, const TrainConfig& cfg,
                  const DiffusionMatrix* dm = nullptr);

}  // namespace graphsha
