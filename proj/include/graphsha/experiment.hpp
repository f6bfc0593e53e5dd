#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphsha/data.hpp"
#include "graphsha/metrics.hpp"
#include "graphsha/model.hpp"

namespace graphsha {

struct SplitSpec {
    enum class Kind { LongTailed, Step };
    Kind kind = Kind::LongTailed;
    double rho = 100.0;
    int n_max = 50;                                   // LT head-class train count
    int val_per_class = 25;                           // LT validation size per class
    std::array<double, 3> fractions = {0.1, 0.1, 0.8};  // Step train/val/test
};

struct ExperimentSpec {
    std::string dataset_path;      // graph container; empty -> SBM
    std::optional<SbmSpec> sbm;
    SplitSpec split;
    std::vector<std::string> methods;  // vanilla|upsample|reweight|graphsha|graphsha-knn
    std::vector<uint64_t> seeds;
    std::string output_dir = "out";
    TrainConfig train;             // base; mode/metric set per method
};

struct RunResult {
    std::string method;
    uint64_t seed = 0;
    MetricsReport metrics;
    double wall_seconds = 0.0;
    bool failed = false;
    std::string error;
};

struct MethodAggregate {
    std::string method;
    int runs = 0;
    double acc_mean = 0, acc_std = 0;
    double bacc_mean = 0, bacc_std = 0;
    double f1_mean = 0, f1_std = 0;
};

struct ExperimentReport {
    std::vector<RunResult> runs;
    std::vector<MethodAggregate> aggregates;  // |methods| entries
    std::map<std::string, std::string> resolved_config;
};

// Flat key=value config file; '#' comments; unknown keys are hard errors.
ExperimentSpec parse_config(const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_config_file(const std::string& path);
std::map<std::string, std::string> resolved_config(const ExperimentSpec& spec);

Graph resolve_dataset(const ExperimentSpec& spec);
ImbalancedSplit make_split(const Graph& g, const SplitSpec& split, uint64_t seed);
TrainConfig method_config(const TrainConfig& base, const std::string& method, uint64_t seed);

// Runs every (method, seed) pair; diffusion computed (or cache-loaded via
// $GRAPHSHA_CACHE_DIR) once and shared. Failures are recorded per run and do
// not abort the experiment. Writes report.json, report.csv, per-run
// trace ndjson, and the resolved config into spec.output_dir.
ExperimentReport run_experiment(const ExperimentSpec& spec);

// One run_experiment per rho; rows (rho, method, metric, mean, std).
void sweep_imbalance(const ExperimentSpec& spec, const std::vector<double>& rhos,
                     const std::string& csv_path);

// One run_experiment per (b1, b2); rows (E[delta], method, f1 mean, std).
void sweep_delta(const ExperimentSpec& spec,
                 const std::vector<std::pair<double, double>>& beta_params,
                 const std::string& csv_path);

}  // namespace graphsha
