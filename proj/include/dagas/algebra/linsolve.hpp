#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dagas/algebra/matrix.hpp"

namespace dagas {

namespace detail {

template <class S>
bool negligible(const S& v, double tol) {
    if constexpr (is_exact_v<S>)
        return is_zero(v);
    else
        return magnitude(v) <= tol;
}

// In-place reduced row echelon form; returns pivot columns.
template <class S>
std::vector<std::size_t> rref(Matrix<S>& a, double tol) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t best = a.rows();
        double best_mag = 0;
        for (std::size_t i = r; i < a.rows(); ++i) {
            if (negligible(a(i, c), tol)) continue;
            if constexpr (is_exact_v<S>) {
                best = i;
                break;
            } else {
                double m = magnitude(a(i, c));
                if (m > best_mag) best_mag = m, best = i;
            }
        }
        if (best == a.rows()) continue;
        if (best != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(best, j));
        S inv = S(1) / a(r, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || negligible(a(i, c), 0)) continue;
            S f = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j)
                if (!negligible(a(r, j), 0)) a(i, j) -= f * a(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace detail

template <class S>
std::size_t rank(Matrix<S> a, double tol = 1e-10) {
    return detail::rref(a, tol).size();
}

// Basis of the right kernel {x : A x = 0}, one column vector per element.
template <class S>
std::vector<std::vector<S>> kernel(Matrix<S> a, double tol = 1e-10) {
    auto pivots = detail::rref(a, tol);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<S>> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<S> v(a.cols(), S{});
        v[f] = S(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class S>
S determinant(Matrix<S> a) {
    if (!a.square()) throw DimensionError("determinant of non-square " + a.shape());
    const std::size_t n = a.rows();
    S det = S(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = n;
        double best = -1;
        for (std::size_t i = c; i < n; ++i) {
            if (is_zero(a(i, c))) continue;
            if constexpr (is_exact_v<S>) {
                p = i;
                break;
            } else if (magnitude(a(i, c)) > best) {
                best = magnitude(a(i, c));
                p = i;
            }
        }
        if (p == n) return S{};
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(p, j));
            det = -det;
        }
        det *= a(c, c);
        S inv = S(1) / a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (is_zero(a(i, c))) continue;
            S f = a(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

enum class StationaryMethod { exact, power };

struct StationaryReport {
    std::string method;
    int iterations = 0;
    double residual = 0;
};

template <class S>
struct StationaryResult {
    Matrix<S> vector;  // 1 x N, entries sum to 1
    StationaryReport report;
};

template <class S>
void check_stochastic(const Matrix<S>& t, double tol) {
    if (!t.square()) throw NotStochastic("transfer matrix not square: " + t.shape());
    for (std::size_t i = 0; i < t.rows(); ++i) {
        S s{};
        for (std::size_t j = 0; j < t.cols(); ++j) s += t(i, j);
        if (!approx_equal(s, S(1), tol))
            throw NotStochastic("row " + std::to_string(i) + " does not sum to 1");
    }
}

// Row vector v with v T = v and sum(v) = 1.
template <class S>
StationaryResult<S> stationary_vector(const Matrix<S>& t, StationaryMethod method = StationaryMethod::exact,
                                      double tol = 1e-12, int max_iter = 100000) {
    check_stochastic(t, tol);
    const std::size_t n = t.rows();
    StationaryResult<S> out;
    if (method == StationaryMethod::exact) {
        Matrix<S> a = t.transpose() - Matrix<S>::identity(n);
        auto basis = kernel(a, 1e-10);
        if (basis.size() != 1) throw KernelDimension(static_cast<int>(basis.size()));
        S total{};
        for (auto& v : basis[0]) total += v;
        if (is_zero(total, 1e-300)) throw DomainError("stationary vector has zero mass");
        S inv = S(1) / total;
        for (auto& v : basis[0]) v *= inv;
        out.vector = Matrix<S>::row_vector(basis[0]);
        out.report.method = "exact";
    } else {
        std::vector<S> v(n, S(1) / S(static_cast<int>(n)));
        Matrix<S> nu = Matrix<S>::row_vector(v);
        int it = 0;
        for (; it < max_iter; ++it) {
            Matrix<S> next = nu * t;
            double d = max_abs_diff(next, nu);
            nu = std::move(next);
            if (d < tol) break;
        }
        if (it == max_iter) throw NoConvergence("power iteration did not converge in " + std::to_string(max_iter));
        out.vector = nu;
        out.report.method = "power";
        out.report.iterations = it + 1;
    }
    out.report.residual = max_abs_diff(Matrix<S>(out.vector * t), out.vector);
    return out;
}

template <class S>
struct Stabilization {
    std::optional<int> index;  // smallest m with A^{m+1} = A^m
    Matrix<S> power;           // A^m at that index (or A^{m_max} if none)
};

template <class S>
Stabilization<S> matrix_power_stabilize(const Matrix<S>& a, int m_max, double tol = 1e-9) {
    if (!a.square()) throw DimensionError("stabilization of non-square " + a.shape());
    Matrix<S> cur = Matrix<S>::identity(a.rows());
    for (int m = 0; m <= m_max; ++m) {
        Matrix<S> next = cur * a;
        if (approx_equal(next, cur, tol)) return {m, cur};
        cur = std::move(next);
    }
    return {std::nullopt, cur};
}

} // namespace dagas
