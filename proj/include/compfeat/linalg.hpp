#pragma once

#include <cstddef>
#include <vector>

namespace compfeat {

// Dense helpers for the ridge solve; matrices are row-major.

/// G = X^T X / m for X of shape m x d. Returns d x d (full, symmetric).
std::vector<double> gram_matrix(const double* x, std::size_t m, std::size_t d);

/// B = X^T Y / m for X m x d, Y m x t. Returns d x t.
std::vector<double> cross_matrix(const double* x, const double* y, std::size_t m, std::size_t d,
                                 std::size_t t);

/// Solves (A) W = B in place for SPD A (d x d), B d x t; A is overwritten
/// by its Cholesky factor, B by the solution. Throws ConvergenceError if a
/// pivot is not positive.
void cholesky_solve_inplace(std::vector<double>& a, std::vector<double>& b, std::size_t d,
                            std::size_t t);

/// y = M x for M (rows x cols), x (cols).
void matvec(const double* m_data, std::size_t rows, std::size_t cols, const double* x, double* y);

} // namespace compfeat
