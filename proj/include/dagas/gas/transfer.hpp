#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "dagas/algebra/linsolve.hpp"
#include "dagas/gas/local_transition.hpp"

namespace dagas {

inline constexpr std::uint64_t default_state_cap = 4096;

namespace detail {

inline std::uint64_t checked_states(int digits, int s, std::uint64_t cap) {
    std::uint64_t c = 1;
    for (int k = 0; k < digits; ++k) {
        c *= static_cast<std::uint64_t>(s);
        if (c > cap) throw SizeCapExceeded("state space exceeds cap " + std::to_string(cap));
    }
    return c;
}

// Distribution of one produced site given its parent values; the width-1 bond
// gas keeps both parallel edges inside the per-site product.
template <class S>
std::vector<S> site_distribution(const LocalTransition<S>& t, const std::vector<int>& parents, int n) {
    std::vector<S> d(static_cast<std::size_t>(t.states));
    if (t.gas == GasKind::B && n == 1 && t.arity == 2) {
        const S& p = t.params[0];
        const S& q = t.params[1];
        d[1] = parents[0] == 1 ? S(p * (S(1) - q * q)) : p;
        d[0] = S(1) - d[1];
        return d;
    }
    for (int c = 0; c < t.states; ++c) d[static_cast<std::size_t>(c)] = t(parents, c);
    return d;
}

// For each produced configuration a (little-endian), the product of per-site factors.
template <class S>
void product_row(const std::vector<std::vector<S>>& site, int s, std::vector<S>& out) {
    out.assign(1, S(1));
    for (const auto& dist : site) {
        std::vector<S> next(out.size() * static_cast<std::size_t>(s));
        for (int v = 0; v < s; ++v) {
            const S& f = dist[static_cast<std::size_t>(v)];
            for (std::size_t k = 0; k < out.size(); ++k)
                next[static_cast<std::size_t>(v) * out.size() + k] = out[k] * f;
        }
        out = std::move(next);
    }
}

} // namespace detail

// Row index = conditioning row b, column = produced row a, entry = prod_i T[(b_i, b_{i+1})][a_i].
template <class S>
Matrix<S> transfer_matrix(const LocalTransition<S>& t, int n, std::uint64_t cap = default_state_cap) {
    if (t.arity != 2) throw DomainError("square transfer needs arity 2; use zigzag_transfer");
    if (n < 1) throw DomainError("width must be >= 1");
    const std::uint64_t N = detail::checked_states(n, t.states, cap);
    Matrix<S> T(N, N);
    std::vector<std::vector<S>> site(static_cast<std::size_t>(n));
    std::vector<S> row;
    for (std::uint64_t b = 0; b < N; ++b) {
        auto bd = decode(b, n, t.states);
        for (int i = 0; i < n; ++i)
            site[static_cast<std::size_t>(i)] = detail::site_distribution(
                t, {bd[static_cast<std::size_t>(i)], bd[static_cast<std::size_t>((i + 1) % n)]}, n);
        detail::product_row(site, t.states, row);
        for (std::uint64_t a = 0; a < N; ++a) T(b, a) = row[a];
    }
    return T;
}

// Zigzag transfer on interleaved (u, d) states: (u, d) -> (d, d'), with d'_i drawn
// from (d_i, u_{i+1}, d_{i+1}) for arity 3 (triangular) or (d_i, d_{i+1}) for arity 2.
template <class S>
Matrix<S> zigzag_transfer(const LocalTransition<S>& t, int n, std::uint64_t cap = default_state_cap) {
    const std::uint64_t N = detail::checked_states(2 * n, t.states, cap);
    const std::uint64_t half = detail::checked_states(n, t.states, cap);
    Matrix<S> T(N, N);
    std::vector<std::vector<S>> site(static_cast<std::size_t>(n));
    std::vector<S> row;
    for (std::uint64_t code = 0; code < N; ++code) {
        auto z = decode_zigzag(code, n, t.states);
        for (int i = 0; i < n; ++i) {
            auto j = static_cast<std::size_t>((i + 1) % n);
            auto ii = static_cast<std::size_t>(i);
            std::vector<int> par = t.arity == 3 ? std::vector<int>{z.down[ii], z.up[j], z.down[j]}
                                                : std::vector<int>{z.down[ii], z.down[j]};
            site[ii] = detail::site_distribution(t, par, n);
        }
        detail::product_row(site, t.states, row);
        for (std::uint64_t a = 0; a < half; ++a) {
            Zigzag next{z.down, decode(a, n, t.states)};
            T(code, encode_zigzag(next, t.states)) = row[a];
        }
    }
    return T;
}

template <class S>
struct RowMeasure {
    int n = 1;
    int s = 2;
    std::vector<S> weights;
    bool normalized = false;

    S total() const {
        S t{};
        for (auto& w : weights) t += w;
        return t;
    }
    RowMeasure normalize() const {
        S t = total();
        if (is_zero(t, 1e-300)) throw DomainError("cannot normalize a measure of zero mass");
        RowMeasure r = *this;
        S inv = S(1) / t;
        for (auto& w : r.weights) w *= inv;
        r.normalized = true;
        return r;
    }
    Matrix<S> as_row() const { return Matrix<S>::row_vector(weights); }
};

template <class S>
RowMeasure<S> invariant_measure(const LocalTransition<S>& t, int n,
                                StationaryMethod method = is_exact_v<S> ? StationaryMethod::exact
                                                                        : StationaryMethod::power,
                                std::uint64_t cap = default_state_cap) {
    auto T = transfer_matrix(t, n, cap);
    auto res = stationary_vector(T, method);
    return RowMeasure<S>{n, t.states, res.vector.data(), true};
}

// nu T^k
template <class S>
RowMeasure<S> iterate(const RowMeasure<S>& nu, const Matrix<S>& T, int k) {
    Matrix<S> v = nu.as_row();
    for (int i = 0; i < k; ++i) v = v * T;
    return RowMeasure<S>{nu.n, nu.s, v.data(), nu.normalized};
}

// Point mass on a configuration.
template <class S>
RowMeasure<S> delta_measure(int n, int s, std::uint64_t code) {
    RowMeasure<S> m{n, s, std::vector<S>(Cylinder::square(n, s).state_count(), S{}), true};
    m.weights[code] = S(1);
    return m;
}

// Sum of weights over configurations extending a partial assignment site -> value.
template <class S>
S marginal(const RowMeasure<S>& m, const std::vector<std::pair<int, int>>& pattern) {
    for (auto& [site, value] : pattern)
        if (site < 0 || site >= m.n || value < 0 || value >= m.s) throw DomainError("pattern out of range");
    S total{};
    for (std::uint64_t c = 0; c < m.weights.size(); ++c) {
        bool ok = true;
        for (auto& [site, value] : pattern)
            if (digit(c, site, m.s) != value) { ok = false; break; }
        if (ok) total += m.weights[c];
    }
    return total;
}

// max |mu(x) - mu(reverse(x))|, reverse(x)_i = x_{-i}; an observation only.
template <class S>
double reflection_defect(const RowMeasure<S>& m) {
    double worst = 0;
    for (std::uint64_t c = 0; c < m.weights.size(); ++c) {
        auto d = decode(c, m.n, m.s);
        std::vector<int> r(d.size());
        for (int i = 0; i < m.n; ++i) r[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>((m.n - i) % m.n)];
        worst = std::max(worst, magnitude(S(m.weights[c] - m.weights[encode(r, m.s)])));
    }
    return worst;
}

} // namespace dagas
