#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphsha/experiment.hpp"

namespace {

using namespace graphsha;

// --set key=value overrides on top of the config file
std::map<std::string, std::string> merged_config(const std::string& config_path,
                                                 const std::vector<std::string>& overrides) {
    std::map<std::string, std::string> kv;
    if (!config_path.empty()) kv = read_config_file(config_path);
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got: " + o);
        kv[o.substr(0, eq)] = o.substr(eq + 1);
    }
    return kv;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

void print_aggregates(const ExperimentReport& report) {
    for (const auto& a : report.aggregates)
        std::cout << a.method << ": acc " << a.acc_mean << " +- " << a.acc_std << ", bAcc "
                  << a.bacc_mean << " +- " << a.bacc_std << ", macro-F1 " << a.f1_mean << " +- "
                  << a.f1_std << " (" << a.runs << " runs)\n";
    for (const auto& rr : report.runs)
        if (rr.failed) std::cerr << "run failed " << rr.error << "\n";
}

bool any_failed(const ExperimentReport& report) {
    for (const auto& rr : report.runs)
        if (rr.failed) return true;
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GraphSHA: hardness-guided synthesis for class-imbalanced node classification"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key=value config file");
        cmd->add_option("--set", overrides, "override a config key (key=value), repeatable");
    };

    auto* gen = app.add_subcommand("gen", "generate an SBM dataset into a graph container file");
    std::string gen_out;
    add_common(gen);
    gen->add_option("--out", gen_out, "output container path")->required();

    auto* diffuse = app.add_subcommand("diffuse", "precompute and cache the diffusion matrix");
    add_common(diffuse);

    auto* run = app.add_subcommand("run", "run an experiment (methods x seeds)");
    add_common(run);

    auto* sweep_rho = app.add_subcommand("sweep-rho", "run the experiment across imbalance ratios");
    std::string rhos_arg = "5,20,50,100";
    add_common(sweep_rho);
    sweep_rho->add_option("--rhos", rhos_arg, "comma-separated imbalance ratios");
    sweep_rho->add_option("--out", out_path, "output csv path");

    auto* sweep_d = app.add_subcommand("sweep-delta", "run the experiment across Beta(b1,b2) choices");
    std::string betas_arg = "1:4,1:1,4:1";
    add_common(sweep_d);
    sweep_d->add_option("--betas", betas_arg, "comma-separated b1:b2 pairs");
    sweep_d->add_option("--out", out_path, "output csv path");

    CLI11_PARSE(app, argc, argv);

    ExperimentSpec spec;
    try {
        spec = parse_config(merged_config(config_path, overrides));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) {
            if (!spec.sbm) {
                std::cerr << "config error: gen requires sbm.* keys\n";
                return 1;
            }
            save_graph_container(gen_out, generate_sbm(*spec.sbm));
            std::cout << "wrote " << gen_out << "\n";
        } else if (diffuse->parsed()) {
            const char* cache_dir = std::getenv("GRAPHSHA_CACHE_DIR");
            if (!cache_dir || !*cache_dir) {
                std::cerr << "config error: diffuse requires GRAPHSHA_CACHE_DIR\n";
                return 1;
            }
            const Graph g = resolve_dataset(spec);
            const auto dm = compute_diffusion(g, spec.train.diffusion);
            std::filesystem::create_directories(cache_dir);
            const auto path = std::filesystem::path(cache_dir) /
                              diffusion_cache_name(g, spec.train.diffusion);
            save_diffusion(path.string(), dm);
            std::cout << "cached " << path.string() << "\n";
        } else if (run->parsed()) {
            const auto report = run_experiment(spec);
            print_aggregates(report);
            if (any_failed(report)) return 2;
        } else if (sweep_rho->parsed()) {
            if (out_path.empty()) out_path = spec.output_dir + "/sweep_rho.csv";
            std::filesystem::create_directories(spec.output_dir);
            sweep_imbalance(spec, parse_doubles(rhos_arg), out_path);
            std::cout << "wrote " << out_path << "\n";
        } else if (sweep_d->parsed()) {
            std::vector<std::pair<double, double>> betas;
            std::stringstream ss(betas_arg);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) {
                    std::cerr << "config error: --betas expects b1:b2 pairs\n";
                    return 1;
                }
                betas.emplace_back(std::stod(item.substr(0, colon)),
                                   std::stod(item.substr(colon + 1)));
            }
            if (out_path.empty()) out_path = spec.output_dir + "/sweep_delta.csv";
            std::filesystem::create_directories(spec.output_dir);
            sweep_delta(spec, betas, out_path);
            std::cout << "wrote " << out_path << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
