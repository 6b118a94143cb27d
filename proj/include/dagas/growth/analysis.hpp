#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dagas/algebra/linsolve.hpp"
#include "dagas/growth/grow.hpp"

namespace dagas {

enum class PowerBehaviour { idempotent, zero_limit, convergent, divergent };

inline std::string behaviour_name(PowerBehaviour b) {
    switch (b) {
        case PowerBehaviour::idempotent: return "idempotent";
        case PowerBehaviour::zero_limit: return "trivial limit";
        case PowerBehaviour::convergent: return "convergent";
        default: return "divergent";
    }
}

// Behaviour of M^l as l grows, for a 2x2 corner matrix.
template <class S>
PowerBehaviour classify_powers(const Matrix<S>& M, double tol = 1e-9, int max_power = 200) {
    Matrix<S> sq = M * M;
    if (approx_equal(sq, M, tol) && max_abs(M) > tol) return PowerBehaviour::idempotent;
    Matrix<S> cur = M;
    for (int l = 1; l <= max_power; ++l) {
        Matrix<S> next = cur * M;
        if (max_abs(next) <= tol) return PowerBehaviour::zero_limit;
        if (approx_equal(next, cur, tol)) return PowerBehaviour::convergent;
        if (max_abs(next) > 1e12) return PowerBehaviour::divergent;
        cur = std::move(next);
    }
    return PowerBehaviour::divergent;
}

template <class S>
struct CornerReport {
    Matrix<S> Mv, Mh, Mq;
    PowerBehaviour v = PowerBehaviour::divergent, h = PowerBehaviour::divergent, q = PowerBehaviour::divergent;
    Matrix<S> rho_Q;  // rho M_q(0,0) for rho = [0, 1]
    // d1 = 1 (V-convergence); gas X: c1^2 = 1, gas Y: (p - pq + q) d1^2 + (1-p)(1-q) c1^2 = 1 (Q-convergence)
    bool v_condition = false, q_condition = false;
    double v_condition_residual = 0, q_condition_residual = 0;

    bool stabilizing() const {
        auto ok = [](PowerBehaviour b) { return b == PowerBehaviour::idempotent || b == PowerBehaviour::convergent; };
        return ok(q);
    }
    json to_json() const {
        return json{{"M_v", to_json_value(Mv)}, {"M_h", to_json_value(Mh)}, {"M_q", to_json_value(Mq)},
                    {"v", behaviour_name(v)}, {"h", behaviour_name(h)}, {"q", behaviour_name(q)},
                    {"rho_Q_limit", to_json_value(rho_Q)}, {"v_condition", v_condition},
                    {"q_condition", q_condition}, {"v_condition_residual", v_condition_residual},
                    {"q_condition_residual", q_condition_residual}};
    }
};

template <class S>
CornerReport<S> corner_analysis(const FactorSolution<S>& f, double tol = 1e-9) {
    LazyGrowth<S> lazy(f);
    CornerReport<S> r;
    r.Mv = lazy.block('V', 0, 0);
    r.Mh = lazy.block('H', 0, 0);
    r.Mq = lazy.block('Q', 0, 0);
    r.v = classify_powers(r.Mv, tol);
    r.h = classify_powers(r.Mh, tol);
    r.q = classify_powers(r.Mq, tol);
    r.rho_Q = Matrix<S>{{S{}, S(1)}} * r.Mq;
    // h_{0,1}[0] = c1, h_{1,1}[0] = d1 under the alternating pattern
    const S c1 = f.entry(0, 1)[0], d1 = f.entry(1, 1)[0];
    const S one(1);
    r.v_condition_residual = magnitude(S(d1 - one));
    if (f.gas == GasKind::Y) {
        const S &p = f.params[0], &q = f.params[1];
        r.q_condition_residual = magnitude(S((p - p * q + q) * d1 * d1 + (one - p) * (one - q) * c1 * c1 - one));
    } else {
        r.q_condition_residual = magnitude(S(c1 * c1 - one));
    }
    const double lim = is_exact_v<S> ? 0.0 : tol;
    r.v_condition = r.v_condition_residual <= lim;
    r.q_condition = r.q_condition_residual <= lim;
    return r;
}

// Rank-one power R L of a matrix whose powers stabilize, normalized so that
// L R = 1 and the first nonzero entry of L is 1.
template <class S>
std::pair<Matrix<S>, Matrix<S>> rank_one_factors(const Matrix<S>& A, double tol) {
    std::size_t bi = 0, bj = 0;
    double best = -1;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (magnitude(A(i, j)) > best) {
                best = magnitude(A(i, j));
                bi = i;
                bj = j;
            }
    if (best <= (is_exact_v<S> ? 0.0 : tol)) throw DomainError("zero matrix has no rank-one factors");
    Matrix<S> R = A.block(0, bj, A.rows(), 1);
    Matrix<S> L = A.block(bi, 0, 1, A.cols());
    S inv = S(1) / A(bi, bj);
    L *= inv;
    for (std::size_t k = 0; k < L.cols(); ++k)
        if (magnitude(L(0, k)) > (is_exact_v<S> ? 0.0 : tol)) {
            S lead = L(0, k);
            L *= S(S(1) / lead);
            R *= lead;
            break;
        }
    return {R, L};
}

// Columns of V_(k) (x) slot pattern that carry state 1.
template <class S>
std::vector<bool> state_one_mask(const FactorSolution<S>& f, std::size_t cols) {
    std::vector<bool> support(static_cast<std::size_t>(f.m()), false);
    for (int j = 1; j <= f.k; ++j) support[static_cast<std::size_t>(factor_slot(f.gas, 1, j))] = true;
    std::vector<bool> mask(cols);
    for (std::size_t c = 0; c < cols; ++c) mask[c] = support[c % support.size()];
    return mask;
}

// sum over masked k of l[k] r[k] / sum_k l[k] r[k], with l = L V*, r = H* R.
template <class S>
S density_from_eigenvectors(const Matrix<S>& l, const Matrix<S>& r, const std::vector<bool>& mask) {
    if (l.cols() != r.rows() || mask.size() != l.cols()) throw DimensionError("density vectors disagree in size");
    S num{}, den{};
    for (std::size_t k = 0; k < l.cols(); ++k) {
        S t = l(0, k) * r(k, 0);
        den += t;
        if (mask[k]) num += t;
    }
    if (is_zero(den, 0)) throw DomainError("zero denominator in the density formula");
    return num / den;
}

// trace(Q^1 (Q*)^{n-1}) / trace((Q*)^n)
template <class S>
S density_by_trace(const GrowthLevel<S>& level, int n) {
    Matrix<S> Qs = level.Qstar();
    Matrix<S> p = matrix_power(Qs, static_cast<unsigned>(n - 1));
    S den = trace(Matrix<S>(p * Qs));
    if (is_zero(den, 0)) throw DomainError("zero denominator in the trace ratio");
    return trace(Matrix<S>(level.Q[1] * p)) / den;
}

struct SpectralLevel {
    int kappa = 0;
    std::size_t size = 0;
    double trace_defect = 0;           // |trace(Q*) - 1|
    std::optional<int> stabilization;  // smallest m with (Q*)^{m+1} = (Q*)^m
    std::size_t rank = 0;              // rank of the stabilized power
    double qp_defect = 0;              // |Q*_(k) - H*_(k-1) V*_(k-1)|
    double link_defect = 0;            // |R_k L_k - H*_{k-1} R_{k-1} L_{k-1} V*_{k-1}|
    double link_colinearity = 0;       // |L_k - L_{k-1} V*_{k-1}| after matching the scale
    double density_defect = 0;         // eigenvector formula vs trace ratio at n = stabilization + 1
    std::optional<ComplexFloat> density;  // levels >= 1

    json to_json() const {
        json j{{"kappa", kappa}, {"size", size}, {"trace_defect", trace_defect}, {"rank", rank},
               {"qp_defect", qp_defect}, {"link_defect", link_defect}, {"link_colinearity", link_colinearity},
               {"density_defect", density_defect}};
        j["density"] = density ? to_json_value(*density) : json(nullptr);
        j["stabilization_index"] = stabilization ? json(*stabilization) : json(nullptr);
        return j;
    }
};

struct SpectralReport {
    std::vector<SpectralLevel> levels;
    bool pass(double tol = 1e-9) const {
        for (auto& l : levels) {
            if (l.trace_defect > tol || !l.stabilization || *l.stabilization > std::max(1, l.kappa) * 2 ||
                l.rank != 1 || l.qp_defect > tol || l.link_defect > tol || l.link_colinearity > tol ||
                l.density_defect > tol)
                return false;
        }
        return true;
    }
    json to_json() const {
        json a = json::array();
        for (auto& l : levels) a.push_back(l.to_json());
        return json{{"levels", a}, {"pass", pass()}};
    }
};

// Spectral diagnostics for every level 0..kappa of an eager growth.
template <class S>
SpectralReport spectral_check(const GrowthState<S>& g, double tol = 1e-9) {
    SpectralReport rep;
    Matrix<S> prevR, prevL;
    for (int k = 0; k <= g.kappa(); ++k) {
        const auto& lvl = g.level(k);
        SpectralLevel s;
        s.kappa = k;
        Matrix<S> Qs = lvl.Qstar();
        s.size = Qs.rows();
        s.trace_defect = magnitude(S(trace(Qs) - S(1)));
        auto st = matrix_power_stabilize(Qs, 2 * std::max(1, k) + 4, tol);
        s.stabilization = st.index;
        s.rank = rank(st.power, std::max(tol, 1e-12));
        auto [R, L] = rank_one_factors(st.power, tol);
        if (k >= 1) {
            const auto& pl = g.level(k - 1);
            s.qp_defect = max_abs_diff(Qs, Matrix<S>(pl.Hstar() * pl.Vstar()));
            Matrix<S> rhs = pl.Hstar() * prevR * prevL * pl.Vstar();
            s.link_defect = max_abs_diff(Matrix<S>(R * L), rhs);
            Matrix<S> lp = prevL * pl.Vstar();
            // scale lp to L on the normalizing entry
            for (std::size_t c = 0; c < L.cols(); ++c)
                if (magnitude(L(0, c)) > tol) {
                    if (magnitude(lp(0, c)) <= tol) {
                        s.link_colinearity = std::numeric_limits<double>::infinity();
                    } else {
                        lp *= S(L(0, c) / lp(0, c));
                        s.link_colinearity = max_abs_diff(L, lp);
                    }
                    break;
                }
            // columns of V_(k) are (column of H_(k-1), factor slot) pairs
            Matrix<S> l = L * lvl.Vstar(), r = lvl.Hstar() * R;
            auto mask = state_one_mask(g.factor, l.cols());
            S d = density_from_eigenvectors(l, r, mask);
            int n = (st.index ? *st.index : 0) + 1;
            S t = density_by_trace(lvl, n);
            s.density = to_complex(d);
            s.density_defect = magnitude(S(d - t));
        }
        prevR = R;
        prevL = L;
        rep.levels.push_back(s);
    }
    return rep;
}

template <class S>
struct LimitReport {
    std::size_t size = 0;
    int kappa = 0;                    // even step whose top-left block is reported
    std::vector<Matrix<S>> Q;         // top-left size x size block of Q_inf^x
    double stabilization_defect = 0;  // block at kappa vs kappa + 2
    double rewriting_residual = 0;    // |Q^x - sum_w Q^w (x) q_{w,x}| on the block
    double corner_defect = 0;         // |Q^x[0,0] - rho M_q(0,0) e_x|
    double max_entry = 0;             // observed only; no claim about decay
    bool exact_zero = false;

    json to_json() const {
        json q = json::array();
        for (auto& m : Q) q.push_back(to_json_value(m));
        return json{{"size", size}, {"kappa", kappa}, {"stabilization_defect", stabilization_defect},
                    {"rewriting_residual", rewriting_residual}, {"corner_defect", corner_defect},
                    {"max_entry", max_entry}, {"exact_zero", exact_zero}, {"Q", q}};
    }
};

// Top-left block of the limit family Q_inf^x, read from the stabilized
// entries of Q_(2k), and its residual under Q^x = sum_w Q^w (x) q_{w,x}.
template <class S>
LimitReport<S> limit_truncation(const FactorSolution<S>& f, std::size_t size, double tol = 1e-9) {
    auto corner = corner_analysis(f, tol);
    if (!corner.stabilizing()) throw DomainError("factor corners do not stabilize");
    LazyGrowth<S> lazy(f);
    const auto m = static_cast<std::size_t>(lazy.m());
    int digits = 0;
    for (std::size_t cap = 1; cap < size; cap *= m) ++digits;
    LimitReport<S> r;
    r.size = size;
    r.kappa = 2 * (digits + 1);
    for (int x = 0; x < 2; ++x) {
        Matrix<S> block(size, size);
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j) {
                block(i, j) = lazy.entry('Q', r.kappa, x, i, j);
                S next = lazy.entry('Q', r.kappa + 2, x, i, j);
                r.stabilization_defect = std::max(r.stabilization_defect, magnitude(S(next - block(i, j))));
            }
        r.max_entry = std::max(r.max_entry, max_abs(block));
        r.Q.push_back(std::move(block));
    }
    bool all_zero = true;
    const auto& comp = lazy.composite();
    for (int x = 0; x < 2; ++x)
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j) {
                S rhs{};
                for (int w = 0; w < 2; ++w)
                    rhs += r.Q[static_cast<std::size_t>(w)](i / m, j / m) * comp.of('Q', w, x)(i % m, j % m);
                S diff = r.Q[static_cast<std::size_t>(x)](i, j) - rhs;
                all_zero = all_zero && is_zero(diff, 0);
                r.rewriting_residual = std::max(r.rewriting_residual, magnitude(diff));
            }
    r.exact_zero = is_exact_v<S> && all_zero;
    for (int x = 0; x < 2; ++x)
        r.corner_defect = std::max(r.corner_defect,
                                   magnitude(S(r.Q[static_cast<std::size_t>(x)](0, 0) - corner.rho_Q(0, static_cast<std::size_t>(x)))));
    return r;
}

struct DensityRow {
    int kappa = 0;
    double density = 0;
    double exact = 0;
    double gap = 0;
};

// Density at one site of the measure on row kappa, against the stationary
// density of the width-n cylinder.
template <class S>
std::vector<DensityRow> density_table(const FactorSolution<S>& f, int n, int kappa_max,
                                      std::size_t cap = default_growth_cap) {
    auto g = grow(f, kappa_max, default_init<S>(), cap);
    auto local = local_transition<S>(f.gas, f.params);
    auto inv = invariant_measure(local, n);
    double exact = to_complex(marginal(inv, {{0, 1}})).real();
    std::vector<DensityRow> rows;
    for (int k = 0; k <= kappa_max; ++k) {
        DensityRow row;
        row.kappa = k;
        row.density = to_complex(density_by_trace(g.level(k), n)).real();
        row.exact = exact;
        row.gap = std::abs(row.density - exact);
        rows.push_back(row);
    }
    return rows;
}

inline json density_table_json(const std::vector<DensityRow>& rows) {
    json a = json::array();
    for (auto& r : rows) a.push_back(json{{"kappa", r.kappa}, {"density", r.density}, {"exact", r.exact}, {"gap", r.gap}});
    return a;
}

inline std::string density_table_csv(const std::vector<DensityRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "kappa,density,exact,gap\n";
    for (auto& r : rows) os << r.kappa << "," << r.density << "," << r.exact << "," << r.gap << "\n";
    return os.str();
}

} // namespace dagas
