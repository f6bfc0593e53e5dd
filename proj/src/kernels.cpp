#include "graphsha/kernels.hpp"

#include <cassert>

namespace graphsha::kernels {

namespace {

inline void matmul_row(const Matrix& a, const Matrix& b, Matrix& out, int i) {
    const double* arow = a.data.data() + static_cast<size_t>(i) * a.cols;
    double* orow = out.data.data() + static_cast<size_t>(i) * b.cols;
    for (int j = 0; j < b.cols; ++j) orow[j] = 0.0;
    for (int k = 0; k < a.cols; ++k) {
        const double aik = arow[k];
        if (aik == 0.0) continue;
        const double* brow = b.data.data() + static_cast<size_t>(k) * b.cols;
        for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
    }
}

inline void spmm_row(const SparseMatrix& s, const Matrix& x, Matrix& out, int i) {
    double* orow = out.data.data() + static_cast<size_t>(i) * x.cols;
    for (int j = 0; j < x.cols; ++j) orow[j] = 0.0;
    for (int e = s.offsets[i]; e < s.offsets[i + 1]; ++e) {
        const double v = s.values[e];
        const double* xrow = x.data.data() + static_cast<size_t>(s.targets[e]) * x.cols;
        for (int j = 0; j < x.cols; ++j) orow[j] += v * xrow[j];
    }
}

// out(k,j) = sum_i a(i,k) * b(i,j), accumulated column-by-column of a^T.
inline void matmul_at_b_row(const Matrix& a, const Matrix& b, Matrix& out, int k) {
    double* orow = out.data.data() + static_cast<size_t>(k) * b.cols;
    for (int j = 0; j < b.cols; ++j) orow[j] = 0.0;
    for (int i = 0; i < a.rows; ++i) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        const double* brow = b.data.data() + static_cast<size_t>(i) * b.cols;
        for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
    }
}


inline void matmul_a_bt_row(const Matrix& a, const Matrix& b, Matrix& out, int i) {
    const double* arow = a.data.data() + static_cast<size_t>(i) * a.cols;
    double* orow = out.data.data() + static_cast<size_t>(i) * b.rows;
    for (int j = 0; j < b.rows; ++j) {
        const double* brow = b.data.data() + static_cast<size_t>(j) * b.cols;
        double acc = 0.0;
        for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
        orow[j] = acc;
    }
}

}  // namespace

namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.cols == b.rows);
    out = Matrix(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) matmul_row(a, b, out, i);
}

void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.rows == b.rows);
    out = Matrix(a.cols, b.cols);
    for (int k = 0; k < a.cols; ++k) matmul_at_b_row(a, b, out, k);
}

void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.cols == b.cols);
    out = Matrix(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) matmul_a_bt_row(a, b, out, i);
}

void spmm(const SparseMatrix& s, const Matrix& x, Matrix& out) {
    assert(s.cols == x.rows);
    out = Matrix(s.rows, x.cols);
    for (int i = 0; i < s.rows; ++i) spmm_row(s, x, out, i);
}

}  // namespace serial

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.cols == b.rows);
    out = Matrix(a.rows, b.cols);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < a.rows; ++i) matmul_row(a, b, out, i);
}

void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.rows == b.rows);
    out = Matrix(a.cols, b.cols);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < a.cols; ++k) matmul_at_b_row(a, b, out, k);
}

void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.cols == b.cols);
    out = Matrix(a.rows, b.rows);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < a.rows; ++i) matmul_a_bt_row(a, b, out, i);
}

void spmm(const SparseMatrix& s, const Matrix& x, Matrix& out) {
    assert(s.cols == x.rows);
    out = Matrix(s.rows, x.cols);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < s.rows; ++i) spmm_row(s, x, out, i);
}

}  // namespace graphsha::kernels
