#pragma once

#include <Eigen/Eigenvalues>
#include <string>
#include <vector>

#include "dagas/algebra/linsolve.hpp"
#include "dagas/systems/catalog.hpp"

namespace dagas {

struct CntReport {
    bool eigenvalue_one = false;
    std::string det;        // det(Q - I), exact modes only
    double min_distance = 0;  // min |lambda - 1| over the eigenvalues
    std::vector<ComplexFloat> eigenvalues;
    std::string note;

    json to_json() const {
        json ev = json::array();
        for (auto& e : eigenvalues) ev.push_back(to_json_value(e));
        json j{{"eigenvalue_one", eigenvalue_one}, {"min_distance", min_distance}, {"eigenvalues", ev}, {"note", note}};
        if (!det.empty()) j["det"] = det;
        return j;
    }
};

namespace detail {
inline std::string scalar_string(const Rational& r) { return to_string(r); }
inline std::string scalar_string(const Gaussian& g) {
    std::ostringstream os;
    os << g;
    return os.str();
}
inline std::string scalar_string(const ComplexFloat& c) {
    std::ostringstream os;
    os << c;
    return os.str();
}
} // namespace detail

// Whether 1 is an eigenvalue of a square matrix: det(Q - I) = 0 exactly in
// exact modes, min |lambda - 1| <= tol otherwise. Informative only: a solution
// may need a rescaling by a constant depending on n before the condition applies.
template <class S>
CntReport cnt_check(const Matrix<S>& Q, double tol = 1e-9) {
    if (!Q.square()) throw DimensionError("cnt_check needs a square matrix");
    CntReport r;
    auto C = to_complex(Q);
    Eigen::MatrixXcd E(static_cast<Eigen::Index>(C.rows()), static_cast<Eigen::Index>(C.cols()));
    for (std::size_t i = 0; i < C.rows(); ++i)
        for (std::size_t j = 0; j < C.cols(); ++j) E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = C(i, j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(E, false);
    r.min_distance = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        r.eigenvalues.push_back(es.eigenvalues()(i));
        r.min_distance = std::min(r.min_distance, std::abs(es.eigenvalues()(i) - ComplexFloat(1, 0)));
    }
    if constexpr (is_exact_v<S>) {
        S d = determinant(Matrix<S>(Q - Matrix<S>::identity(Q.rows())));
        r.det = detail::scalar_string(d);
        r.eigenvalue_one = d == S{};
    } else {
        r.eigenvalue_one = r.min_distance <= tol;
    }
    r.note = r.eigenvalue_one ? "1 is an eigenvalue"
                              : "1 is not an eigenvalue; a rescaling by a constant (which may depend on n) can still "
                                "make the trace representation valid";
    return r;
}

// Unnormalized zigzag measure w(u, d) = trace(prod_i D^{u_i d_i} U^{d_i u_{i+1}}),
// indexed like zigzag_transfer states.
template <class S>
RowMeasure<S> zigzag_measure(const ZigzagSolution<S>& sol, int n) {
    const std::uint64_t N = Cylinder::zigzag(n, 2).state_count();
    RowMeasure<S> m{n, 2, std::vector<S>(N, S{}), false};
    for (std::uint64_t code = 0; code < N; ++code) {
        auto z = decode_zigzag(code, n, 2);
        Matrix<S> prod = Matrix<S>::identity(sol.size());
        for (int i = 0; i < n; ++i) {
            auto ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>((i + 1) % n);
            prod = prod * sol.d(z.up[ii], z.down[ii]);
            prod = prod * sol.u(z.down[ii], z.up[jj]);
        }
        m.weights[code] = trace(prod);
    }
    return m;
}

struct ZigzagReport {
    int n = 0;
    double equations_residual = 0;
    bool equations_exact = false;  // exact modes: every residual is exactly 0
    double stationarity_residual = 0;  // max |wT - w| relative to max |w|
    bool stationary = false;
    bool nonzero = false;
    CntReport cnt;

    bool pass() const { return stationary && nonzero; }
    json to_json() const {
        return json{{"n", n}, {"equations_residual", equations_residual}, {"equations_exact", equations_exact},
                    {"stationarity_residual", stationarity_residual}, {"stationary", stationary},
                    {"nonzero", nonzero}, {"cnt", cnt.to_json()}};
    }
};

template <class S>
ZigzagReport zigzag_check(const ZigzagSolution<S>& sol, const LocalTransition<S>& local, int n, double tol = 1e-9) {
    if (local.states != 2) throw DomainError("zigzag checks are binary");
    if (local.arity != (sol.triangular ? 3 : 2)) throw DomainError("local transition arity does not match the lattice");
    ZigzagReport r;
    r.n = n;
    auto res = sol.system().residual(sol.assignment());
    r.equations_residual = res.max_abs;
    r.equations_exact = is_exact_v<S> && res.exact_zero();
    auto w = zigzag_measure(sol, n);
    auto T = zigzag_transfer(local, n);
    Matrix<S> row = w.as_row();
    Matrix<S> next = row * T;
    double scale = max_abs(row);
    r.nonzero = is_exact_v<S> ? scale > 0 : scale > tol;
    if constexpr (is_exact_v<S>) {
        r.stationary = next == row;
        r.stationarity_residual = r.nonzero ? max_abs_diff(next, row) / scale : 0;
    } else {
        r.stationarity_residual = r.nonzero ? max_abs_diff(next, row) / scale : 0;
        r.stationary = r.stationarity_residual <= tol;
    }
    r.cnt = cnt_check(sol.M(), tol);
    return r;
}

// Residual of the conjugated finite system
// V^x H^x = P (sum_{y,y'} H^y V^{y'} T(y,y',x)) P^{-1}, tested as
// max_x |V^x H^x P - P sum(...)|.
template <class S>
double finite2_residual(const SplitSolution<S>& sol, const Matrix<S>& P) {
    auto T = local_transition<S>(sol.gas, sol.params);
    const int st = T.states;
    if (static_cast<int>(sol.V.size()) != st) throw DimensionError("split family size does not match the gas");
    double r = 0;
    for (int x = 0; x < st; ++x) {
        auto ux = static_cast<std::size_t>(x);
        Matrix<S> rhs(sol.H[0].rows(), sol.V[0].cols());
        for (int y = 0; y < st; ++y)
            for (int y2 = 0; y2 < st; ++y2)
                rhs += Matrix<S>(sol.H[static_cast<std::size_t>(y)] * sol.V[static_cast<std::size_t>(y2)]) * T({y, y2}, x);
        r = std::max(r, max_abs_diff(Matrix<S>(sol.V[ux] * sol.H[ux] * P), Matrix<S>(P * rhs)));
    }
    return r;
}

} // namespace dagas
