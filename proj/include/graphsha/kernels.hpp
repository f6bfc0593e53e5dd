#pragma once

#include "graphsha/matrix.hpp"

namespace graphsha::kernels {

// Serial reference implementations. Kept as the oracle for the OpenMP
// kernels below; identical loop order per output row, so results are
// bitwise equal.
namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out);  // out = a^T * b
void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out);  // out = a * b^T
void spmm(const SparseMatrix& s, const Matrix& x, Matrix& out);   // out = s * x

}  // namespace serial

// OpenMP-parallel kernels (row-partitioned, deterministic).
void matmul(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out);
void spmm(const SparseMatrix& s, const Matrix& x, Matrix& out);

}  // namespace graphsha::kernels
