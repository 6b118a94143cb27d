#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dagas/gas/measure.hpp"
#include "dagas/systems/catalog.hpp"

namespace dagas {

// Composite m x m factors: bold v_{z,x} = sum_y v_{z,y} (x) h_{y,x},
// bold h_{z,x} = sum_y h_{z,y} (x) v_{y,x}, bold q_{w,x} = bold v_{w,x} bold h_{w,x}
// (= sum_{y,z} T(y,z,x) v_{w,y} h_{w,z}). Index z*2+x.
template <class S>
struct CompositeFactors {
    int m = 0;
    std::vector<Matrix<S>> v, h, q;
    const Matrix<S>& of(char which, int z, int x) const {
        const auto& fam = which == 'V' ? v : which == 'H' ? h : q;
        return fam[static_cast<std::size_t>(z * 2 + x)];
    }
};

template <class S>
CompositeFactors<S> composite_factors(const FactorSolution<S>& f) {
    if (f.states != 2) throw DomainError("growth is implemented for binary gases");
    CompositeFactors<S> c;
    c.m = f.m();
    const auto m = static_cast<std::size_t>(c.m);
    for (int z = 0; z < 2; ++z)
        for (int x = 0; x < 2; ++x) {
            Matrix<S> v(m, m), h(m, m);
            for (int y = 0; y < 2; ++y) {
                v += kron(f.v(z, y), f.h(y, x));
                h += kron(f.h(z, y), f.v(y, x));
            }
            c.v.push_back(v);
            c.h.push_back(h);
            c.q.push_back(v * h);
        }
    return c;
}

// One level of the construction: V^x, H^x, Q^x = V^x H^x for x in {0,1}.
template <class S>
struct GrowthLevel {
    std::vector<Matrix<S>> V, H, Q;
    Matrix<S> star(const std::vector<Matrix<S>>& fam) const { return fam[0] + fam[1]; }
    Matrix<S> Vstar() const { return star(V); }
    Matrix<S> Hstar() const { return star(H); }
    Matrix<S> Qstar() const { return star(Q); }
    double cross_defect() const {
        return std::max(max_abs(Matrix<S>(V[0] * H[1])), max_abs(Matrix<S>(V[1] * H[0])));
    }
};

// Initial family; the default is V^1 = H^1 = [1], V^0 = H^0 = [0] (mu_0 = all-ones row).
template <class S>
GrowthLevel<S> default_init() {
    GrowthLevel<S> g;
    g.V = {Matrix<S>{{S{}}}, Matrix<S>{{S(1)}}};
    g.H = g.V;
    g.Q = {Matrix<S>{{S{}}}, Matrix<S>{{S(1)}}};
    return g;
}

template <class S>
GrowthLevel<S> make_level(std::vector<Matrix<S>> V, std::vector<Matrix<S>> H) {
    if (V.size() != 2 || H.size() != 2) throw DimensionError("growth families have two members");
    GrowthLevel<S> g;
    g.V = std::move(V);
    g.H = std::move(H);
    for (int x = 0; x < 2; ++x) g.Q.push_back(g.V[static_cast<std::size_t>(x)] * g.H[static_cast<std::size_t>(x)]);
    return g;
}

inline constexpr std::size_t default_growth_cap = 4096;

template <class S>
struct GrowthState {
    FactorSolution<S> factor;
    std::vector<GrowthLevel<S>> levels;  // levels[k] is step k, k = 0..kappa
    std::vector<double> cross_defects;

    int kappa() const { return static_cast<int>(levels.size()) - 1; }
    const GrowthLevel<S>& level(int k) const { return levels.at(static_cast<std::size_t>(k)); }
    const GrowthLevel<S>& last() const { return levels.back(); }

    json sizes() const {
        json s = json::array();
        for (auto& l : levels)
            s.push_back(json{{"V", {l.V[0].rows(), l.V[0].cols()}}, {"Q", l.Q[0].rows()}});
        return s;
    }
};

// V_k^x = sum_y H_{k-1}^y (x) h_{y,x}, H_k^x = sum_y V_{k-1}^y (x) v_{y,x}.
template <class S>
GrowthLevel<S> grow_step(const GrowthLevel<S>& prev, const FactorSolution<S>& f, std::size_t cap) {
    std::vector<Matrix<S>> V, H;
    const std::size_t m = static_cast<std::size_t>(f.m());
    for (int x = 0; x < 2; ++x) {
        if (prev.H[0].rows() * 1 > cap || prev.H[0].cols() * m > cap || prev.V[0].rows() * m > cap)
            throw SizeCapExceeded("growth matrices would exceed " + std::to_string(cap));
        Matrix<S> v(prev.H[0].rows(), prev.H[0].cols() * m), h(prev.V[0].rows() * m, prev.V[0].cols());
        for (int y = 0; y < 2; ++y) {
            v += kron(prev.H[static_cast<std::size_t>(y)], f.h(y, x));
            h += kron(prev.V[static_cast<std::size_t>(y)], f.v(y, x));
        }
        V.push_back(std::move(v));
        H.push_back(std::move(h));
    }
    return make_level(std::move(V), std::move(H));
}

// Eager construction of kappa steps; checks V^x H^y = 0 (x != y) at each step.
template <class S>
GrowthState<S> grow(const FactorSolution<S>& f, int kappa, GrowthLevel<S> init = default_init<S>(),
                    std::size_t cap = default_growth_cap, double tol = 1e-9) {
    if (kappa < 0) throw DomainError("kappa must be >= 0");
    if (f.states != 2) throw DomainError("growth is implemented for binary gases");
    GrowthState<S> g;
    g.factor = f;
    const double limit = is_exact_v<S> ? 0.0 : tol;
    auto check = [&](const GrowthLevel<S>& l) {
        double d = l.cross_defect();
        g.cross_defects.push_back(d);
        if (d > limit) throw DomainError("cross-orthogonality V^x H^y = 0 fails");
    };
    check(init);
    g.levels.push_back(std::move(init));
    for (int k = 1; k <= kappa; ++k) {
        g.levels.push_back(grow_step(g.levels.back(), f, cap));
        check(g.levels.back());
    }
    return g;
}

// mu_kappa(x) = trace(prod Q_kappa^{x_i}), compared with delta T^kappa.
template <class S>
double growth_measure_defect(const GrowthState<S>& g, int n, RowMeasure<S>* out = nullptr) {
    auto mu = trace_measure(g.last().Q, n);
    auto T = transfer_matrix(local_transition<S>(g.factor.gas, g.factor.params), n);
    // mu_0 from the initial family
    auto row = trace_measure(g.level(0).Q, n).as_row();
    for (int k = 0; k < g.kappa(); ++k) row = row * T;
    if (out) *out = mu;
    return max_abs_diff(mu.as_row(), row);
}

// Entries of W_{(2k+e)}, W in {V, H, Q}, from the base-m digits of i and j:
// rho[a_{k+1}(i), a_{k+1}(j)] M[a_k(i), a_k(j)] ... M[a_1(i), a_1(j)] e_x,
// with the base family taken at level e in {0, 1}.
template <class S>
class LazyGrowth {
public:
    LazyGrowth(const FactorSolution<S>& f, const GrowthLevel<S>& init = default_init<S>())
        : comp_(composite_factors(f)) {
        base_[0] = init;
        base_[1] = grow_step(init, f, std::numeric_limits<std::size_t>::max());
    }

    const CompositeFactors<S>& composite() const { return comp_; }
    int m() const { return comp_.m; }

    // 2x2 block M_w(a, b) = [w_{z,x}[a,b]]
    Matrix<S> block(char which, std::size_t a, std::size_t b) const {
        Matrix<S> M(2, 2);
        for (int z = 0; z < 2; ++z)
            for (int x = 0; x < 2; ++x)
                M(static_cast<std::size_t>(z), static_cast<std::size_t>(x)) = comp_.of(which, z, x)(a, b);
        return M;
    }
    Matrix<S> rho(char which, int parity, std::size_t a, std::size_t b) const {
        const auto& fam = family(which, parity);
        return Matrix<S>{{fam[0](a, b), fam[1](a, b)}};
    }

    std::pair<std::size_t, std::size_t> shape(char which, int kappa) const {
        const auto& fam = family(which, kappa % 2);
        std::size_t scale = 1;
        for (int k = 0; k < kappa / 2; ++k) scale *= static_cast<std::size_t>(comp_.m);
        return {fam[0].rows() * scale, fam[0].cols() * scale};
    }

    S entry(char which, int kappa, int x, std::size_t i, std::size_t j) const {
        if (kappa < 0) throw DomainError("kappa must be >= 0");
        auto [rows, cols] = shape(which, kappa);
        if (i >= rows || j >= cols) throw DimensionError("entry index out of range");
        const int steps = kappa / 2;
        const auto m = static_cast<std::size_t>(comp_.m);
        std::vector<std::size_t> di(static_cast<std::size_t>(steps)), dj(static_cast<std::size_t>(steps));
        for (int l = 0; l < steps; ++l) {
            di[static_cast<std::size_t>(l)] = i % m;
            dj[static_cast<std::size_t>(l)] = j % m;
            i /= m;
            j /= m;
        }
        Matrix<S> r = rho(which, kappa % 2, i, j);
        for (int l = steps - 1; l >= 0; --l)
            r = r * block(which, di[static_cast<std::size_t>(l)], dj[static_cast<std::size_t>(l)]);
        return r(0, static_cast<std::size_t>(x));
    }

private:
    const std::vector<Matrix<S>>& family(char which, int parity) const {
        const auto& b = base_[parity];
        if (which == 'V') return b.V;
        if (which == 'H') return b.H;
        if (which == 'Q') return b.Q;
        throw DomainError(std::string("unknown family ") + which);
    }

    CompositeFactors<S> comp_;
    GrowthLevel<S> base_[2];
};

} // namespace dagas
