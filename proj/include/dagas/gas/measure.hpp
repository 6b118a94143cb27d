#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dagas/algebra/json.hpp"
#include "dagas/gas/transfer.hpp"

namespace dagas {

// w(x) = trace(Q^{x_0} ... Q^{x_{n-1}}), unnormalized.
template <class S>
RowMeasure<S> trace_measure(const std::vector<Matrix<S>>& Q, int n) {
    if (Q.empty()) throw DimensionError("empty family");
    for (auto& q : Q)
        if (!q.square() || q.rows() != Q.front().rows()) throw DimensionError("family matrices must be square and equal-sized");
    const int s = static_cast<int>(Q.size());
    RowMeasure<S> m{n, s, std::vector<S>(Cylinder::square(n, s).state_count(), S{}), false};
    // depth-first over digits with prefix products; code accumulates little-endian
    std::vector<Matrix<S>> prefix(static_cast<std::size_t>(n) + 1);
    prefix[0] = Matrix<S>::identity(Q.front().rows());
    std::vector<std::uint64_t> place(static_cast<std::size_t>(n), 1);
    for (int i = 1; i < n; ++i) place[static_cast<std::size_t>(i)] = place[static_cast<std::size_t>(i - 1)] * static_cast<std::uint64_t>(s);
    auto rec = [&](auto&& self, int depth, std::uint64_t code) -> void {
        if (depth == n) {
            m.weights[code] = trace(prefix[static_cast<std::size_t>(n)]);
            return;
        }
        for (int x = 0; x < s; ++x) {
            prefix[static_cast<std::size_t>(depth) + 1] = prefix[static_cast<std::size_t>(depth)] * Q[static_cast<std::size_t>(x)];
            self(self, depth + 1, code + place[static_cast<std::size_t>(depth)] * static_cast<std::uint64_t>(x));
        }
    };
    rec(rec, 0, 0);
    return m;
}

// Matrices of the rotation-class construction: trace_measure of the result is
// uniform on the rotation class of alpha. Entries are #R^{-1/n}, hence float.
inline std::vector<Matrix<ComplexFloat>> rotation_class_matrices(std::uint64_t alpha, int n, int s = 2) {
    const std::uint64_t N = Cylinder::square(n, s).state_count();
    std::set<std::uint64_t> cls;
    for (int i = 0; i < n; ++i) cls.insert(rotate(alpha, n, s, i));
    const double w = std::pow(static_cast<double>(cls.size()), -1.0 / n);
    std::vector<Matrix<ComplexFloat>> Q(static_cast<std::size_t>(s), Matrix<ComplexFloat>(N, N));
    auto a = decode(alpha, n, s);
    for (int i = 0; i < n; ++i) {
        std::uint64_t zi = rotate(alpha, n, s, i), zj = rotate(alpha, n, s, i + 1);
        Q[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])](zi, zj) = ComplexFloat(w, 0);
    }
    return Q;
}

// Block-diagonal embedding realizing the mixture sum_k weight_k mu_k.
inline std::vector<Matrix<ComplexFloat>> mixture_matrices(const std::vector<std::vector<Matrix<ComplexFloat>>>& parts,
                                                          const std::vector<double>& weights, int n) {
    if (parts.size() != weights.size() || parts.empty()) throw DimensionError("mixture parts/weights mismatch");
    std::size_t total = 0;
    for (auto& p : parts) total += p.front().rows();
    const std::size_t s = parts.front().size();
    std::vector<Matrix<ComplexFloat>> out(s, Matrix<ComplexFloat>(total, total));
    std::size_t off = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        double f = std::pow(weights[k], 1.0 / n);
        for (std::size_t x = 0; x < s; ++x) {
            const auto& q = parts[k][x];
            for (std::size_t i = 0; i < q.rows(); ++i)
                for (std::size_t j = 0; j < q.cols(); ++j) out[x](off + i, off + j) = f * q(i, j);
        }
        off += parts[k].front().rows();
    }
    return out;
}

// Factorization Q^x = V^x H^x with V^x H^y = 0 for x != y.
template <class S>
struct SplitSolution {
    std::vector<Matrix<S>> V, H;
    GasKind gas = GasKind::X;
    std::vector<S> params;

    std::vector<Matrix<S>> Q() const {
        std::vector<Matrix<S>> q;
        for (std::size_t x = 0; x < V.size(); ++x) q.push_back(V[x] * H[x]);
        return q;
    }
    Matrix<S> Qstar() const { return sum(Q()); }
    // max over x != y of |V^x H^y|
    double cross_defect() const {
        double d = 0;
        for (std::size_t x = 0; x < V.size(); ++x)
            for (std::size_t y = 0; y < H.size(); ++y)
                if (x != y) d = std::max(d, max_abs(Matrix<S>(V[x] * H[y])));
        return d;
    }
};

struct SplitReport {
    double residual_max = 0;
    bool nonzero = false;
    bool matches_invariant = false;
    int n = 0;
    json params;

    json to_json() const {
        return json{{"residual_max", residual_max}, {"nonzero", nonzero}, {"matches_invariant", matches_invariant},
                    {"n", n}, {"params", params}};
    }
};

template <class S>
SplitReport split_measure_check(const SplitSolution<S>& sol, int n, double tol = 1e-9) {
    SplitReport r;
    r.n = n;
    r.params = json::array();
    for (auto& p : sol.params) r.params.push_back(to_json_value(p));
    auto local = local_transition(sol.gas, sol.params);
    auto T = transfer_matrix(local, n);
    auto w = trace_measure(sol.Q(), n);
    Matrix<S> row = w.as_row();
    r.residual_max = max_abs_diff(Matrix<S>(row * T), row);
    r.nonzero = !all_zero(row, is_exact_v<S> ? 0.0 : tol);
    if (r.nonzero && (r.residual_max == 0 || (!is_exact_v<S> && r.residual_max <= tol)) &&
        !is_zero(w.total(), is_exact_v<S> ? 0.0 : tol)) {
        auto inv = invariant_measure(local, n);
        auto wn = w.normalize();
        r.matches_invariant = approx_equal(wn.as_row(), inv.as_row(), tol);
    }
    return r;
}

} // namespace dagas
