#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace graphsha {

// Dense row-major matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    std::span<double> row(int i) { return {data.data() + static_cast<size_t>(i) * cols, static_cast<size_t>(cols)}; }
    std::span<const double> row(int i) const {
        return {data.data() + static_cast<size_t>(i) * cols, static_cast<size_t>(cols)};
    }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

// Sparse CSR matrix with explicit values (normalized adjacency, aggregators).
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> offsets;  // size rows+1
    std::vector<int> targets;  // column indices, sorted per row
    std::vector<double> values;
};

}  // namespace graphsha
