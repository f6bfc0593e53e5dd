#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace graphsha {

// Deterministic RNG stream. Every sampler draws through this wrapper so a
// run is reproducible from its seed; independent streams are obtained via
// fork() with distinct tags.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed), eng_(seed) {}

    Rng fork(uint64_t tag) const {
        // splitmix64 over (seed, tag)
        uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (tag + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

    double normal(double mean = 0.0, double stddev = 1.0) {
        return std::normal_distribution<double>(mean, stddev)(eng_);
    }

    double beta(double b1, double b2) {
        double x = std::gamma_distribution<double>(b1, 1.0)(eng_);
        double y = std::gamma_distribution<double>(b2, 1.0)(eng_);
        return x / (x + y);
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return std::uniform_int_distribution<int>(lo, hi)(eng_);
    }

    // Draw an index with probability proportional to weights (CDF inversion).
    // Weights need not be normalized; at least one must be positive.
    int categorical(std::span<const double> weights);

    // Draw min(n, |support|) distinct indices without replacement,
    // sequentially with renormalization.
    std::vector<int> sample_without_replacement(std::span<const double> weights, int n);

private:
    uint64_t seed_;
    std::mt19937_64 eng_;
};

}  // namespace graphsha
