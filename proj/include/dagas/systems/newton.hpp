#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dagas/systems/system.hpp"

namespace dagas {

struct NewtonOptions {
    int starts = 200;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    int max_iter = 300;
    double scale = 1.0;        // standard deviation of the random complex starts
    double dedup_dist = 1e-6;  // solutions closer than this are merged
};

struct NewtonResult {
    std::vector<std::string> names;
    std::vector<std::vector<ComplexFloat>> solutions;
    std::vector<double> residuals;
    double best_residual = 0;  // smallest max-abs residual reached over all starts
    int starts = 0;

    Assignment assignment(std::size_t i) const {
        Assignment a;
        for (std::size_t k = 0; k < names.size(); ++k) a[names[k]] = solutions[i][k];
        return a;
    }
    // Absence of solutions is evidence only: a finite search certifies nothing.
    std::string verdict() const {
        return solutions.empty() ? "no solution found (evidence)" : std::to_string(solutions.size()) + " solution(s) found";
    }
    json to_json() const {
        json sols = json::array();
        for (std::size_t i = 0; i < solutions.size(); ++i) {
            json entries = json::object();
            for (std::size_t k = 0; k < names.size(); ++k) entries[names[k]] = to_json_value(solutions[i][k]);
            sols.push_back(json{{"residual", residuals[i]}, {"values", entries}});
        }
        return json{{"starts", starts}, {"best_residual", best_residual}, {"verdict", verdict()}, {"solutions", sols}};
    }
};

namespace detail {

struct CompiledPoly {
    struct Term {
        ComplexFloat c;
        std::vector<std::pair<int, int>> mono;
    };
    std::vector<Term> terms;

    template <class S>
    static CompiledPoly from(const Poly<S>& p) {
        CompiledPoly out;
        for (auto& [m, c] : p.terms()) out.terms.push_back({to_complex(c), m});
        return out;
    }
    ComplexFloat operator()(const Eigen::VectorXcd& x) const {
        ComplexFloat s = 0;
        for (auto& t : terms) {
            ComplexFloat v = t.c;
            for (auto& [var, e] : t.mono)
                for (int k = 0; k < e; ++k) v *= x(var);
            s += v;
        }
        return s;
    }
};

} // namespace detail

// Levenberg-Marquardt from random complex starts. Every reported solution has
// max-abs residual <= tol; results depend only on the seed.
template <class S>
NewtonResult newton_search(const PolySystem<S>& sys, const NewtonOptions& opt = {}) {
    using Eigen::VectorXcd;
    using Eigen::MatrixXcd;
    const auto nv = static_cast<Eigen::Index>(sys.names.size());
    const auto ne = static_cast<Eigen::Index>(sys.equations.size());
    std::vector<detail::CompiledPoly> F;
    std::vector<std::vector<std::pair<int, detail::CompiledPoly>>> J(sys.equations.size());
    for (std::size_t e = 0; e < sys.equations.size(); ++e) {
        F.push_back(detail::CompiledPoly::from(sys.equations[e]));
        for (int v : sys.equations[e].variables())
            J[e].push_back({v, detail::CompiledPoly::from(sys.equations[e].derivative(v))});
    }
    auto eval = [&](const VectorXcd& x) {
        VectorXcd f(ne);
        for (Eigen::Index e = 0; e < ne; ++e) f(e) = F[static_cast<std::size_t>(e)](x);
        return f;
    };
    auto jac = [&](const VectorXcd& x) {
        MatrixXcd m = MatrixXcd::Zero(ne, nv);
        for (Eigen::Index e = 0; e < ne; ++e)
            for (auto& [v, d] : J[static_cast<std::size_t>(e)]) m(e, v) = d(x);
        return m;
    };

    NewtonResult res;
    res.names = sys.names;
    res.starts = opt.starts;
    res.best_residual = std::numeric_limits<double>::infinity();
    if (ne == 0) return res;
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal(0.0, opt.scale);
    for (int s = 0; s < opt.starts; ++s) {
        VectorXcd x(nv);
        for (Eigen::Index k = 0; k < nv; ++k) {
            double re = normal(rng), im = normal(rng);
            x(k) = ComplexFloat(re, im);
        }
        VectorXcd f = eval(x);
        double cost = f.squaredNorm();
        double lambda = 1e-3;
        for (int it = 0; it < opt.max_iter && f.cwiseAbs().maxCoeff() > opt.tol * 1e-2; ++it) {
            MatrixXcd Jx = jac(x);
            MatrixXcd A = Jx.adjoint() * Jx;
            VectorXcd g = Jx.adjoint() * f;
            bool improved = false;
            for (int tries = 0; tries < 30 && !improved; ++tries) {
                MatrixXcd Al = A;
                for (Eigen::Index k = 0; k < nv; ++k) Al(k, k) += lambda * (1.0 + std::abs(A(k, k)));
                VectorXcd step = Al.ldlt().solve(-g);
                VectorXcd xn = x + step;
                VectorXcd fn = eval(xn);
                double cn = fn.squaredNorm();
                if (std::isfinite(cn) && cn < cost) {
                    x = xn;
                    f = fn;
                    cost = cn;
                    lambda = std::max(lambda / 5, 1e-12);
                    improved = true;
                } else {
                    lambda *= 4;
                }
            }
            if (!improved) break;
        }
        double r = f.cwiseAbs().maxCoeff();
        if (std::isfinite(r)) res.best_residual = std::min(res.best_residual, r);
        if (!(r <= opt.tol)) continue;
        std::vector<ComplexFloat> sol(x.data(), x.data() + nv);
        bool dup = false;
        for (auto& other : res.solutions) {
            double d = 0;
            for (std::size_t k = 0; k < sol.size(); ++k) d = std::max(d, std::abs(sol[k] - other[k]));
            if (d < opt.dedup_dist) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            res.solutions.push_back(sol);
            res.residuals.push_back(r);
        }
    }
    return res;
}

} // namespace dagas
