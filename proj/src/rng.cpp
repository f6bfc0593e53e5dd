#include "graphsha/rng.hpp"

#include <stdexcept>

namespace graphsha {

int Rng::categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw std::invalid_argument("categorical: no positive weight");
    double u = uniform() * total;
    double acc = 0.0;
    int last_positive = -1;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        last_positive = static_cast<int>(i);
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return last_positive;  // u landed on the rounding tail
}

std::vector<int> Rng::sample_without_replacement(std::span<const double> weights, int n) {
    std::vector<double> w(weights.begin(), weights.end());
    int support = 0;
    for (double x : w)
        if (x > 0.0) ++support;
    const int take = std::min(n, support);
    std::vector<int> picked;
    picked.reserve(take);
    for (int k = 0; k < take; ++k) {
        int idx = categorical(w);
        picked.push_back(idx);
        w[idx] = 0.0;
    }
    return picked;
}

}  // namespace graphsha
