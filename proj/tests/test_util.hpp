#pragma once

// Shared oracle helpers for the test suites. Everything here is independent
// of the library's computation paths on purpose: these routines are the
// reference side of the comparisons.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace testutil {

/// Chi-square critical value via the Wilson-Hilferty cube approximation.
/// z is the standard normal quantile of the target one-sided level.
inline double chi_square_critical(double df, double z) {
    double a = 2.0 / (9.0 * df);
    double c = 1.0 - a + z * std::sqrt(a);
    return df * c * c * c;
}

constexpr double kZ999 = 3.090232306167813;   // Phi^{-1}(0.999)
constexpr double kZ9999 = 3.719016485455709;  // Phi^{-1}(0.9999)

/// Dense Gaussian elimination with partial pivoting; a is n x n row-major,
/// b length n. Returns the solution. Oracle-side only (small systems).
inline std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b,
                                        std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (a[pivot * n + col] == 0.0) throw std::runtime_error("singular oracle system");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double v = b[i];
        for (std::size_t c = i + 1; c < n; ++c) v -= a[i * n + c] * x[c];
        x[i] = v / a[i * n + i];
    }
    return x;
}

/// Fits sum_k c_k t^k (degree terms-1) through samples of f at Chebyshev
/// nodes on [-radius, radius]; the square Vandermonde system is solved by
/// elimination. Good for recovering low-order series coefficients.
template <typename Fn>
std::vector<double> fit_series(Fn&& f, std::size_t terms, double radius) {
    std::vector<double> nodes(terms);
    for (std::size_t i = 0; i < terms; ++i) {
        double theta = (2.0 * static_cast<double>(i) + 1.0) /
                       (2.0 * static_cast<double>(terms)) * 3.14159265358979323846;
        nodes[i] = radius * std::cos(theta);
    }
    std::vector<double> vand(terms * terms);
    std::vector<double> rhs(terms);
    for (std::size_t i = 0; i < terms; ++i) {
        double p = 1.0;
        for (std::size_t k = 0; k < terms; ++k) {
            vand[i * terms + k] = p;
            p *= nodes[i];
        }
        rhs[i] = f(nodes[i]);
    }
    return solve_linear(std::move(vand), std::move(rhs), terms);
}

/// Poisson pmf e^{-c} c^i / i!, the reference law for exp-scaled degrees.
inline double poisson_pmf(double c, unsigned i) {
    double p = std::exp(-c);
    for (unsigned k = 1; k <= i; ++k) p *= c / static_cast<double>(k);
    return p;
}

/// Reference ReLU-conjugate coefficients a_0..a_T, computed from the
/// binomial-series recurrence (the route is independent of the library's).
inline std::vector<double> relu_series_reference(std::size_t max_degree) {
    const double pi = 3.14159265358979323846;
    std::vector<double> a(max_degree + 1, 0.0);
    a[0] = 1.0 / pi;
    if (max_degree >= 1) a[1] = 0.5;
    // sqrt(1-x): s_k = -b_k/(2k-1); x*arcsin-ish term: b_{k-1}/(2k-1);
    // b_k = C(2k,k)/4^k tracked incrementally.
    double b_prev = 1.0; // b_0
    for (std::size_t k = 1; 2 * k <= max_degree; ++k) {
        double b_k = b_prev * (2.0 * k - 1.0) / (2.0 * k);
        a[2 * k] = (b_prev - b_k) / (pi * (2.0 * k - 1.0));
        b_prev = b_k;
    }
    return a;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Least-squares slope of y against x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = mean(x), my = mean(y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

} // namespace testutil
