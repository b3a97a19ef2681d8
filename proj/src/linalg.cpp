#include "compfeat/linalg.hpp"

#include "compfeat/error.hpp"
#include "compfeat/simd.hpp"

#include <cmath>
#include <string>

namespace compfeat {

std::vector<double> gram_matrix(const double* x, std::size_t m, std::size_t d) {
    std::vector<double> g(d * d, 0.0);
    // Rank-1 accumulation over rows; lower triangle only, then mirror.
    for (std::size_t r = 0; r < m; ++r) {
        const double* row = x + r * d;
        for (std::size_t j = 0; j < d; ++j) {
            if (row[j] != 0.0) simd::axpy(row[j], row, g.data() + j * d, j + 1);
        }
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            double v = g[j * d + i] * inv_m;
            g[j * d + i] = v;
            g[i * d + j] = v;
        }
    }
    return g;
}

std::vector<double> cross_matrix(const double* x, const double* y, std::size_t m, std::size_t d,
                                 std::size_t t) {
    std::vector<double> b(d * t, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        const double* xr = x + r * d;
        const double* yr = y + r * t;
        for (std::size_t k = 0; k < t; ++k) {
            if (yr[k] != 0.0) {
                // column k of B accumulates y_rk * x_r; strided, do it scalar
                for (std::size_t j = 0; j < d; ++j) b[j * t + k] += yr[k] * xr[j];
            }
        }
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    for (double& v : b) v *= inv_m;
    return b;
}

void cholesky_solve_inplace(std::vector<double>& a, std::vector<double>& b, std::size_t d,
                            std::size_t t) {
    // Factor A = L L^T, storing L in the lower triangle.
    for (std::size_t j = 0; j < d; ++j) {
        double diag = a[j * d + j] - simd::dot(a.data() + j * d, a.data() + j * d, j);
        if (!(diag > 0.0))
            throw ConvergenceError("cholesky: non-positive pivot at column " + std::to_string(j) +
                                   " (" + std::to_string(diag) + ")");
        diag = std::sqrt(diag);
        a[j * d + j] = diag;
        const double inv = 1.0 / diag;
        for (std::size_t i = j + 1; i < d; ++i) {
            double v = a[i * d + j] - simd::dot(a.data() + i * d, a.data() + j * d, j);
            a[i * d + j] = v * inv;
        }
    }
    // Forward solve L Z = B, then back solve L^T W = Z, per column of B.
    for (std::size_t k = 0; k < t; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            double v = b[i * t + k];
            for (std::size_t j = 0; j < i; ++j) v -= a[i * d + j] * b[j * t + k];
            b[i * t + k] = v / a[i * d + i];
        }
        for (std::size_t ii = d; ii-- > 0;) {
            double v = b[ii * t + k];
            for (std::size_t j = ii + 1; j < d; ++j) v -= a[j * d + ii] * b[j * t + k];
            b[ii * t + k] = v / a[ii * d + ii];
        }
    }
}

void matvec(const double* m_data, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = simd::dot(m_data + r * cols, x, cols);
}

} // namespace compfeat
