// Benchmarks the OpenMP kernels against their serial references:
// dense matmul, sparse*dense spmm, and full diffusion computation.

#include <chrono>
#include <cstdio>
#include <functional>
#include <omp.h>

#include "graphsha/data.hpp"
#include "graphsha/diffusion.hpp"
#include "graphsha/kernels.hpp"

using namespace graphsha;
using clk = std::chrono::steady_clock;

namespace {

double time_of(const std::function<void()>& fn, int reps = 3) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clk::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(clk::now() - t0).count());
    }
    return best;
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());

    SbmSpec spec;
    spec.block_sizes = {400, 400, 400, 400, 400};
    spec.p_in = 0.02;
    spec.p_out = 0.002;
    spec.feature_dim = 64;
    spec.seed = 7;
    const Graph g = generate_sbm(spec);
    std::printf("graph: %d nodes, %zu edges\n", g.num_nodes, g.num_undirected_edges());

    Rng rng(1);
    Matrix a(g.num_nodes, 64), b(64, 64), out;
    for (double& v : a.data) v = rng.normal();
    for (double& v : b.data) v = rng.normal();
    const auto a_hat = normalized_adjacency(g);

    const double t_mm_s = time_of([&] { kernels::serial::matmul(a, b, out); });
    const double t_mm_p = time_of([&] { kernels::matmul(a, b, out); });
    std::printf("matmul   %dx%dx%d: serial %.4fs, omp %.4fs, speedup %.2fx\n", a.rows, a.cols,
                b.cols, t_mm_s, t_mm_p, t_mm_s / t_mm_p);

    const double t_sp_s = time_of([&] { kernels::serial::spmm(a_hat, a, out); });
    const double t_sp_p = time_of([&] { kernels::spmm(a_hat, a, out); });
    std::printf("spmm  nnz=%zu x %d: serial %.4fs, omp %.4fs, speedup %.2fx\n",
                a_hat.targets.size(), a.cols, t_sp_s, t_sp_p, t_sp_s / t_sp_p);

    DiffusionConfig cfg;
    const double t_df_s = time_of([&] { serial::compute_diffusion(g, cfg); }, 1);
    const double t_df_p = time_of([&] { compute_diffusion(g, cfg); }, 1);
    std::printf("diffusion N=%d: serial %.4fs, omp %.4fs, speedup %.2fx\n", g.num_nodes, t_df_s,
                t_df_p, t_df_s / t_df_p);
    return 0;
}
