#include "graphsha/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphsha {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "graphsha 1.0.0";

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

const std::set<std::string> kKnownKeys = {
    "dataset.path",
    "sbm.block_sizes", "sbm.p_in", "sbm.p_out", "sbm.feature_dim",
    "sbm.feature_separation", "sbm.seed",
    "split.kind", "split.rho", "split.n_max", "split.val_per_class", "split.fractions",
    "methods", "seeds", "output_dir",
    "train.backbone", "train.hidden_dim", "train.learning_rate", "train.weight_decay",
    "train.max_epochs", "train.patience",
    "hardness.temperature", "hardness.knn_k",
    "mixup.beta_b1", "mixup.beta_b2", "mixup.quota_mode",
    "diffusion.kind", "diffusion.alpha", "diffusion.t", "diffusion.top_k",
    "diffusion.series_tolerance", "diffusion.max_terms",
};

double std_dev(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / (xs.size() - 1));
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config " + path + " line " + std::to_string(lineno) +
                                        ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

ExperimentSpec parse_config(const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv)
        if (!kKnownKeys.count(k)) throw std::invalid_argument("unknown config key: " + k);

    ExperimentSpec spec;
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    if (auto v = get("dataset.path")) spec.dataset_path = *v;
    if (kv.count("sbm.block_sizes")) {
        SbmSpec sbm;
        for (const auto& b : split_list(kv.at("sbm.block_sizes")))
            sbm.block_sizes.push_back(std::stoi(b));
        if (auto v = get("sbm.p_in")) sbm.p_in = std::stod(*v);
        if (auto v = get("sbm.p_out")) sbm.p_out = std::stod(*v);
        if (auto v = get("sbm.feature_dim")) sbm.feature_dim = std::stoi(*v);
        if (auto v = get("sbm.feature_separation")) sbm.feature_separation = std::stod(*v);
        if (auto v = get("sbm.seed")) sbm.seed = std::stoull(*v);
        spec.sbm = sbm;
    }
    if (auto v = get("split.kind")) {
        if (*v == "lt") spec.split.kind = SplitSpec::Kind::LongTailed;
        else if (*v == "step") spec.split.kind = SplitSpec::Kind::Step;
        else throw std::invalid_argument("split.kind must be lt or step");
    }
    if (auto v = get("split.rho")) spec.split.rho = std::stod(*v);
    if (auto v = get("split.n_max")) spec.split.n_max = std::stoi(*v);
    if (auto v = get("split.val_per_class")) spec.split.val_per_class = std::stoi(*v);
    if (auto v = get("split.fractions")) {
        const auto parts = split_list(*v);
        if (parts.size() != 3)
            throw std::invalid_argument("split.fractions must have 3 comma-separated values");
        for (int i = 0; i < 3; ++i) spec.split.fractions[i] = std::stod(parts[i]);
    }
    if (auto v = get("methods")) spec.methods = split_list(*v);
    if (auto v = get("seeds"))
        for (const auto& s : split_list(*v)) spec.seeds.push_back(std::stoull(s));
    if (auto v = get("output_dir")) spec.output_dir = *v;
    if (auto v = get("train.backbone")) {
        if (*v == "gcn") spec.train.backbone = Backbone::Gcn;
        else if (*v == "sage") spec.train.backbone = Backbone::Sage;
        else throw std::invalid_argument("train.backbone must be gcn or sage");
    }
    if (auto v = get("train.hidden_dim")) spec.train.hidden_dim = std::stoi(*v);
    if (auto v = get("train.learning_rate")) spec.train.learning_rate = std::stod(*v);
    if (auto v = get("train.weight_decay")) spec.train.weight_decay = std::stod(*v);
    if (auto v = get("train.max_epochs")) spec.train.max_epochs = std::stoi(*v);
    if (auto v = get("train.patience")) spec.train.patience = std::stoi(*v);
    if (auto v = get("hardness.temperature")) spec.train.hardness.temperature = std::stod(*v);
    if (auto v = get("hardness.knn_k")) spec.train.hardness.knn_k = std::stoi(*v);
    if (auto v = get("mixup.beta_b1")) spec.train.mixup.beta_b1 = std::stod(*v);
    if (auto v = get("mixup.beta_b2")) spec.train.mixup.beta_b2 = std::stod(*v);
    if (auto v = get("mixup.quota_mode")) {
        if (*v == "mean") spec.train.mixup.quota_mode = QuotaMode::Mean;
        else if (*v == "max") spec.train.mixup.quota_mode = QuotaMode::Max;
        else throw std::invalid_argument("mixup.quota_mode must be mean or max");
    }
    if (auto v = get("diffusion.kind")) {
        if (*v == "ppr") spec.train.diffusion.kind = DiffusionKind::Ppr;
        else if (*v == "hk") spec.train.diffusion.kind = DiffusionKind::HeatKernel;
        else throw std::invalid_argument("diffusion.kind must be ppr or hk");
    }
    if (auto v = get("diffusion.alpha")) spec.train.diffusion.alpha = std::stod(*v);
    if (auto v = get("diffusion.t")) spec.train.diffusion.t = std::stod(*v);
    if (auto v = get("diffusion.top_k")) spec.train.diffusion.top_k = std::stoi(*v);
    if (auto v = get("diffusion.series_tolerance"))
        spec.train.diffusion.series_tolerance = std::stod(*v);
    if (auto v = get("diffusion.max_terms")) spec.train.diffusion.max_terms = std::stoi(*v);

    if (spec.dataset_path.empty() && !spec.sbm)
        throw std::invalid_argument("config: need dataset.path or sbm.block_sizes");
    if (spec.methods.empty()) throw std::invalid_argument("config: methods must be nonempty");
    if (spec.seeds.empty()) throw std::invalid_argument("config: seeds must be nonempty");
    return spec;
}

std::map<std::string, std::string> resolved_config(const ExperimentSpec& spec) {
    std::map<std::string, std::string> kv;
    auto num = [](double v) {
        std::ostringstream ss;
        ss << v;
        return ss.str();
    };
    if (!spec.dataset_path.empty()) kv["dataset.path"] = spec.dataset_path;
    if (spec.sbm) {
        std::ostringstream bs;
        for (size_t i = 0; i < spec.sbm->block_sizes.size(); ++i)
            bs << (i ? "," : "") << spec.sbm->block_sizes[i];
        kv["sbm.block_sizes"] = bs.str();
        kv["sbm.p_in"] = num(spec.sbm->p_in);
        kv["sbm.p_out"] = num(spec.sbm->p_out);
        kv["sbm.feature_dim"] = std::to_string(spec.sbm->feature_dim);
        kv["sbm.feature_separation"] = num(spec.sbm->feature_separation);
        kv["sbm.seed"] = std::to_string(spec.sbm->seed);
    }
    kv["split.kind"] = spec.split.kind == SplitSpec::Kind::LongTailed ? "lt" : "step";
    kv["split.rho"] = num(spec.split.rho);
    kv["split.n_max"] = std::to_string(spec.split.n_max);
    kv["split.val_per_class"] = std::to_string(spec.split.val_per_class);
    kv["split.fractions"] = num(spec.split.fractions[0]) + "," + num(spec.split.fractions[1]) +
                            "," + num(spec.split.fractions[2]);
    std::ostringstream ms, ss;
    for (size_t i = 0; i < spec.methods.size(); ++i) ms << (i ? "," : "") << spec.methods[i];
    for (size_t i = 0; i < spec.seeds.size(); ++i) ss << (i ? "," : "") << spec.seeds[i];
    kv["methods"] = ms.str();
    kv["seeds"] = ss.str();
    kv["output_dir"] = spec.output_dir;
    kv["train.backbone"] = spec.train.backbone == Backbone::Gcn ? "gcn" : "sage";
    kv["train.hidden_dim"] = std::to_string(spec.train.hidden_dim);
    kv["train.learning_rate"] = num(spec.train.learning_rate);
    kv["train.weight_decay"] = num(spec.train.weight_decay);
    kv["train.max_epochs"] = std::to_string(spec.train.max_epochs);
    kv["train.patience"] = std::to_string(spec.train.patience);
    kv["hardness.temperature"] = num(spec.train.hardness.temperature);
    kv["hardness.knn_k"] = std::to_string(spec.train.hardness.knn_k);
    kv["mixup.beta_b1"] = num(spec.train.mixup.beta_b1);
    kv["mixup.beta_b2"] = num(spec.train.mixup.beta_b2);
    kv["mixup.quota_mode"] = spec.train.mixup.quota_mode == QuotaMode::Mean ? "mean" : "max";
    kv["diffusion.kind"] = spec.train.diffusion.kind == DiffusionKind::Ppr ? "ppr" : "hk";
    kv["diffusion.alpha"] = num(spec.train.diffusion.alpha);
    kv["diffusion.t"] = num(spec.train.diffusion.t);
    kv["diffusion.top_k"] = std::to_string(spec.train.diffusion.top_k);
    kv["diffusion.series_tolerance"] = num(spec.train.diffusion.series_tolerance);
    kv["diffusion.max_terms"] = std::to_string(spec.train.diffusion.max_terms);
    return kv;
}

Graph resolve_dataset(const ExperimentSpec& spec) {
    if (!spec.dataset_path.empty()) return load_graph_container(spec.dataset_path);
    return generate_sbm(*spec.sbm);
}

ImbalancedSplit make_split(const Graph& g, const SplitSpec& split, uint64_t seed) {
    if (split.kind == SplitSpec::Kind::LongTailed)
        return make_long_tailed_split(g, split.rho, split.n_max, split.val_per_class, seed);
    return make_step_split(g, split.rho, split.fractions, seed);
}

TrainConfig method_config(const TrainConfig& base, const std::string& method, uint64_t seed) {
    TrainConfig cfg = base;
    cfg.seed = seed;
    if (method == "vanilla") {
        cfg.mode = TrainMode::Vanilla;
    } else if (method == "upsample") {
        cfg.mode = TrainMode::Upsample;
    } else if (method == "reweight") {
        cfg.mode = TrainMode::Reweight;
    } else if (method == "graphsha") {
        cfg.mode = TrainMode::GraphSha;
        cfg.hardness.metric = HardnessMetric::Confidence;
    } else if (method == "graphsha-knn") {
        cfg.mode = TrainMode::GraphSha;
        cfg.hardness.metric = HardnessMetric::Knn;
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }
    return cfg;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    const Graph g = resolve_dataset(spec);

    bool needs_diffusion = false;
    for (const auto& m : spec.methods)
        if (m.rfind("graphsha", 0) == 0) needs_diffusion = true;
    DiffusionMatrix dm;
    if (needs_diffusion) {
        const char* cache_dir = std::getenv("GRAPHSHA_CACHE_DIR");
        if (cache_dir && *cache_dir) {
            fs::create_directories(cache_dir);
            const fs::path cache_path =
                fs::path(cache_dir) / diffusion_cache_name(g, spec.train.diffusion);
            if (fs::exists(cache_path)) {
                dm = load_diffusion(cache_path.string());
            } else {
                dm = compute_diffusion(g, spec.train.diffusion);
                save_diffusion(cache_path.string(), dm);
            }
        } else {
            dm = compute_diffusion(g, spec.train.diffusion);
        }
    }

    struct Task {
        std::string method;
        uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto& m : spec.methods)
        for (uint64_t s : spec.seeds) tasks.push_back({m, s});

    ExperimentReport report;
    report.runs.resize(tasks.size());
    report.resolved_config = resolved_config(spec);
    fs::create_directories(spec.output_dir);

#pragma omp parallel for schedule(dynamic, 1)
    for (size_t t = 0; t < tasks.size(); ++t) {
        RunResult& rr = report.runs[t];
        rr.method = tasks[t].method;
        rr.seed = tasks[t].seed;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const auto split = make_split(g, spec.split, tasks[t].seed);
            const auto cfg = method_config(spec.train, tasks[t].method, tasks[t].seed);
            const auto result = train(g, split, cfg, needs_diffusion ? &dm : nullptr);

            Matrix logits = cfg.backbone == Backbone::Gcn ? gcn_forward(g, result.params)
                                                          : sage_forward(g, result.params);
            const auto preds = predict(logits);
            rr.metrics = evaluate(preds, g.labels, split.test_mask, g.num_classes);
            rr.metrics.misclassified_minor_prob = misclassified_minor_probability(
                preds, g.labels, split.test_mask, minor_class_set(split.class_counts_train));

            std::ofstream trace(fs::path(spec.output_dir) /
                                ("trace_" + rr.method + "_" + std::to_string(rr.seed) + ".ndjson"));
            for (const auto& rec : result.trace) trace << rec.to_ndjson() << "\n";
        } catch (const std::exception& e) {
            rr.failed = true;
            rr.error = std::string("(") + rr.method + ", seed " + std::to_string(rr.seed) +
                       "): " + e.what();
        }
        rr.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    for (const auto& m : spec.methods) {
        MethodAggregate agg;
        agg.method = m;
        std::vector<double> acc, bacc, f1;
        for (const auto& rr : report.runs) {
            if (rr.method != m || rr.failed) continue;
            acc.push_back(rr.metrics.accuracy);
            bacc.push_back(rr.metrics.balanced_accuracy);
            f1.push_back(rr.metrics.macro_f1);
        }
        agg.runs = static_cast<int>(acc.size());
        if (agg.runs > 0) {
            auto mean = [](const std::vector<double>& xs) {
                double s = 0;
                for (double x : xs) s += x;
                return s / xs.size();
            };
            agg.acc_mean = mean(acc);
            agg.bacc_mean = mean(bacc);
            agg.f1_mean = mean(f1);
            agg.acc_std = std_dev(acc, agg.acc_mean);
            agg.bacc_std = std_dev(bacc, agg.bacc_mean);
            agg.f1_std = std_dev(f1, agg.f1_mean);
        }
        report.aggregates.push_back(agg);
    }

    // report.json / report.csv / resolved config
    nlohmann::json doc;
    doc["version"] = kVersion;
    nlohmann::json cfg_json;
    for (const auto& [k, v] : report.resolved_config) cfg_json[k] = v;
    doc["config"] = cfg_json;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& rr : report.runs) {
        nlohmann::json r;
        r["method"] = rr.method;
        r["seed"] = rr.seed;
        r["wall_seconds"] = rr.wall_seconds;
        if (rr.failed) {
            r["error"] = rr.error;
        } else {
            r["metrics"] = nlohmann::json::parse(rr.metrics.to_json());
        }
        runs.push_back(std::move(r));
    }
    doc["runs"] = std::move(runs);
    nlohmann::json aggs = nlohmann::json::array();
    for (const auto& a : report.aggregates)
        aggs.push_back({{"method", a.method},
                        {"runs", a.runs},
                        {"accuracy", {{"mean", a.acc_mean}, {"std", a.acc_std}}},
                        {"balanced_accuracy", {{"mean", a.bacc_mean}, {"std", a.bacc_std}}},
                        {"macro_f1", {{"mean", a.f1_mean}, {"std", a.f1_std}}}});
    doc["aggregates"] = std::move(aggs);
    std::ofstream(fs::path(spec.output_dir) / "report.json") << doc.dump(2);

    std::ofstream csv(fs::path(spec.output_dir) / "report.csv");
    csv << MetricsReport::csv_header() << "\n";
    for (const auto& rr : report.runs)
        if (!rr.failed) csv << rr.metrics.to_csv_row(rr.method, rr.seed) << "\n";

    std::ofstream cfg_out(fs::path(spec.output_dir) / "config.resolved");
    for (const auto& [k, v] : report.resolved_config) cfg_out << k << " = " << v << "\n";

    return report;
}

void sweep_imbalance(const ExperimentSpec& spec, const std::vector<double>& rhos,
                     const std::string& csv_path) {
    std::ofstream csv(csv_path);
    csv << "rho,method,metric,mean,std\n";
    for (double rho : rhos) {
        ExperimentSpec s = spec;
        s.split.rho = rho;
        s.output_dir = spec.output_dir + "/rho_" + std::to_string(rho);
        try {
            const auto report = run_experiment(s);
            for (const auto& a : report.aggregates) {
                csv << rho << ',' << a.method << ",balanced_accuracy," << a.bacc_mean << ','
                    << a.bacc_std << "\n";
                csv << rho << ',' << a.method << ",macro_f1," << a.f1_mean << ',' << a.f1_std
                    << "\n";
            }
        } catch (const std::exception& e) {
            csv << rho << ",ERROR,," << "," << "\n";
        }
        csv.flush();
    }
}

void sweep_delta(const ExperimentSpec& spec,
                 const std::vector<std::pair<double, double>>& beta_params,
                 const std::string& csv_path) {
    std::ofstream csv(csv_path);
    csv << "expected_delta,beta_b1,beta_b2,method,f1_mean,f1_std\n";
    for (auto [b1, b2] : beta_params) {
        ExperimentSpec s = spec;
        s.train.mixup.beta_b1 = b1;
        s.train.mixup.beta_b2 = b2;
        std::ostringstream dir;
        dir << spec.output_dir << "/delta_" << b1 << "_" << b2;
        s.output_dir = dir.str();
        const double e_delta = b1 / (b1 + b2);
        try {
            const auto report = run_experiment(s);
            for (const auto& a : report.aggregates)
                csv << e_delta << ',' << b1 << ',' << b2 << ',' << a.method << ',' << a.f1_mean
                    << ',' << a.f1_std << "\n";
        } catch (const std::exception& e) {
            csv << e_delta << ',' << b1 << ',' << b2 << ",ERROR,," << "\n";
        }
        csv.flush();
    }
}

}  // namespace graphsha
