#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dagas/algebra/json.hpp"
#include "dagas/gas/measure.hpp"
#include "dagas/systems/system.hpp"

namespace dagas {

// Square root of a real radicand with a chosen branch (sign = +1 or -1).
// Exact modes require the radicand (or its negative) to be a rational square.
template <class S>
S square_root(const S& x, int sign = 1) {
    if constexpr (std::is_same_v<S, ComplexFloat>) {
        return std::sqrt(x) * static_cast<double>(sign);
    } else if constexpr (std::is_same_v<S, Gaussian>) {
        if (x.im != 0) throw DomainError("square root of a non-real Gaussian rational");
        Rational r;
        if (x.re >= 0) {
            if (!rational_sqrt(x.re, r)) throw DomainError("radicand " + to_string(x.re) + " is not a rational square");
            return Gaussian(Rational(sign * r));
        }
        if (!rational_sqrt(Rational(-x.re), r))
            throw DomainError("radicand " + to_string(x.re) + " is not minus a rational square");
        return Gaussian(Rational(0), Rational(sign * r));
    } else {
        Rational r;
        if (!rational_sqrt(Rational(x), r)) throw DomainError("radicand is not a rational square");
        return S(sign * r);
    }
}

template <class S>
S imag_unit() {
    if constexpr (std::is_same_v<S, ComplexFloat>)
        return ComplexFloat(0, 1);
    else
        return Gaussian::i();
}

// Alternating-pattern factor solution: entries[y*states + x] holds the k
// nonzero entries of h_{y,x}; v_{y,x} is its transpose.
template <class S>
struct FactorSolution {
    GasKind gas = GasKind::X;
    std::vector<S> params;
    int states = 2;
    int k = 1;
    std::vector<std::vector<S>> entries;

    int m() const { return states == 3 ? 3 * k : 2 * k; }
    const std::vector<S>& entry(int y, int x) const { return entries[static_cast<std::size_t>(y * states + x)]; }
    Matrix<S> h(int y, int x) const {
        Matrix<S> r(1, static_cast<std::size_t>(m()));
        for (int j = 1; j <= k; ++j)
            r(0, static_cast<std::size_t>(factor_slot(gas, x, j))) = entry(y, x)[static_cast<std::size_t>(j - 1)];
        return r;
    }
    Matrix<S> v(int y, int x) const { return h(y, x).transpose(); }

    SystemKind kind() const {
        switch (gas) {
            case GasKind::X: return SystemKind::factor_X;
            case GasKind::Y: return SystemKind::factor_Y;
            case GasKind::B: return SystemKind::factor_B;
            default: return SystemKind::factor_bicolour;
        }
    }
    PolySystem<S> system(SystemOptions opt = {}) const {
        opt.size = k;
        return build_system<S>(kind(), params, opt);
    }
    std::map<std::string, S> assignment() const {
        std::map<std::string, S> a;
        for (int y = 0; y < states; ++y)
            for (int x = 0; x < states; ++x)
                for (int j = 1; j <= k; ++j)
                    a[detail::factor_entry_name(gas, y, x, j)] = entry(y, x)[static_cast<std::size_t>(j - 1)];
        return a;
    }
    // max |h_{y,x} v_{y',x'} - T(y,y',x) 1_{x=x'}|
    double defect() const {
        auto T = local_transition<S>(gas, params);
        double d = 0;
        for (int y = 0; y < states; ++y)
            for (int y2 = 0; y2 < states; ++y2)
                for (int x = 0; x < states; ++x)
                    for (int x2 = 0; x2 < states; ++x2) {
                        S prod = Matrix<S>(h(y, x) * v(y2, x2))(0, 0);
                        if (x == x2) prod -= T({y, y2}, x);
                        d = std::max(d, magnitude(prod));
                    }
        return d;
    }

    json to_json() const {
        json e = json::array();
        for (auto& row : entries) {
            json r = json::array();
            for (auto& v : row) r.push_back(to_json_value(v));
            e.push_back(r);
        }
        json p = json::array();
        for (auto& v : params) p.push_back(to_json_value(v));
        return json{{"type", "factor"}, {"mode", scalar_traits<S>::mode}, {"gas", gas_name(gas)},
                    {"params", p}, {"states", states}, {"k", k}, {"entries", e}};
    }
    static FactorSolution from_json(const json& j) {
        FactorSolution f;
        f.gas = parse_gas(j.at("gas").get<std::string>());
        for (auto& v : j.at("params")) f.params.push_back(from_json_value<S>(v));
        f.states = j.at("states").get<int>();
        f.k = j.at("k").get<int>();
        for (auto& row : j.at("entries")) {
            std::vector<S> r;
            for (auto& v : row) r.push_back(from_json_value<S>(v));
            if (static_cast<int>(r.size()) != f.k) throw DimensionError("factor entry length mismatch");
            f.entries.push_back(r);
        }
        if (static_cast<int>(f.entries.size()) != f.states * f.states) throw DimensionError("factor entry count mismatch");
        return f;
    }
};

// Zigzag split: scalars (1x1 matrices) or k x k matrices D^{ab}, U^{ab},
// index a*2+b. Square-lattice solutions carry the weights w01, w10 and,
// in the matrix form, the conjugating matrix P; triangular ones carry neither.
template <class S>
struct ZigzagSolution {
    GasKind gas = GasKind::X;
    std::vector<S> params;
    bool triangular = false;
    bool matrix = false;
    std::vector<Matrix<S>> D, U;
    S w01 = S(1), w10 = S(1);
    Matrix<S> P;

    std::size_t size() const { return D.front().rows(); }
    const Matrix<S>& d(int a, int b) const { return D[static_cast<std::size_t>(a * 2 + b)]; }
    const Matrix<S>& u(int a, int b) const { return U[static_cast<std::size_t>(a * 2 + b)]; }
    Matrix<S> m(int a, int b) const { return d(a, 0) * u(0, b) + d(a, 1) * u(1, b); }
    Matrix<S> mt(int a, int b) const { return u(a, 0) * d(0, b) + u(a, 1) * d(1, b); }
    // Block matrix M = [m_{a,b}].
    Matrix<S> M() const {
        std::size_t k = size();
        Matrix<S> r(2 * k, 2 * k);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                auto blk = m(a, b);
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        r(static_cast<std::size_t>(a) * k + i, static_cast<std::size_t>(b) * k + j) = blk(i, j);
            }
        return r;
    }

    SystemKind kind() const {
        if (triangular) return SystemKind::tri_split;
        return matrix ? SystemKind::zigzag_matrix : SystemKind::zigzag_scalar;
    }
    PolySystem<S> system(SystemOptions opt = {}) const {
        opt.size = static_cast<int>(size());
        opt.gas = gas;
        return build_system<S>(kind(), params, opt);
    }
    std::map<std::string, S> assignment() const {
        std::map<std::string, S> a;
        auto put = [&](const std::string& base, const Matrix<S>& mat) {
            if (kind() == SystemKind::zigzag_scalar) {
                std::string lower = base;
                lower[0] = static_cast<char>(std::tolower(lower[0]));
                a[lower] = mat(0, 0);
                return;
            }
            for (std::size_t i = 0; i < mat.rows(); ++i)
                for (std::size_t j = 0; j < mat.cols(); ++j)
                    a[base + "_" + std::to_string(i) + "_" + std::to_string(j)] = mat(i, j);
        };
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                put("D" + std::to_string(x) + std::to_string(y), d(x, y));
                put("U" + std::to_string(x) + std::to_string(y), u(x, y));
            }
        if (!triangular) {
            a["w01"] = w01;
            a["w10"] = w10;
            if (matrix) put("P", P);
        }
        return a;
    }

    json to_json() const {
        json p = json::array();
        for (auto& v : params) p.push_back(to_json_value(v));
        json d = json::array(), u = json::array();
        for (auto& x : D) d.push_back(to_json_value(x));
        for (auto& x : U) u.push_back(to_json_value(x));
        json j{{"type", "zigzag"}, {"mode", scalar_traits<S>::mode}, {"gas", gas_name(gas)}, {"params", p},
               {"triangular", triangular}, {"matrix", matrix}, {"D", d}, {"U", u},
               {"w01", to_json_value(w01)}, {"w10", to_json_value(w10)}};
        if (matrix && !triangular) j["P"] = to_json_value(P);
        return j;
    }
    static ZigzagSolution from_json(const json& j) {
        ZigzagSolution z;
        z.gas = parse_gas(j.at("gas").get<std::string>());
        for (auto& v : j.at("params")) z.params.push_back(from_json_value<S>(v));
        z.triangular = j.at("triangular").get<bool>();
        z.matrix = j.at("matrix").get<bool>();
        for (auto& x : j.at("D")) z.D.push_back(matrix_from_json<S>(x));
        for (auto& x : j.at("U")) z.U.push_back(matrix_from_json<S>(x));
        if (z.D.size() != 4 || z.U.size() != 4) throw DimensionError("zigzag solution needs four D and four U blocks");
        z.w01 = from_json_value<S>(j.at("w01"));
        z.w10 = from_json_value<S>(j.at("w10"));
        if (j.contains("P")) z.P = matrix_from_json<S>(j.at("P"));
        return z;
    }
};

template <class S>
std::map<std::string, S> split_assignment(const SplitSolution<S>& sol) {
    std::map<std::string, S> a;
    auto put = [&](const std::string& base, const Matrix<S>& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) a[base + "_" + std::to_string(i) + "_" + std::to_string(j)] = m(i, j);
    };
    for (std::size_t x = 0; x < sol.V.size(); ++x) {
        put("V" + std::to_string(x), sol.V[x]);
        put("H" + std::to_string(x), sol.H[x]);
    }
    return a;
}

template <class S>
json split_to_json(const SplitSolution<S>& sol) {
    json p = json::array(), v = json::array(), h = json::array();
    for (auto& x : sol.params) p.push_back(to_json_value(x));
    for (auto& x : sol.V) v.push_back(to_json_value(x));
    for (auto& x : sol.H) h.push_back(to_json_value(x));
    return json{{"type", "split"}, {"mode", scalar_traits<S>::mode}, {"gas", gas_name(sol.gas)},
                {"params", p}, {"V", v}, {"H", h}};
}

template <class S>
SplitSolution<S> split_from_json(const json& j) {
    SplitSolution<S> s;
    s.gas = parse_gas(j.at("gas").get<std::string>());
    for (auto& v : j.at("params")) s.params.push_back(from_json_value<S>(v));
    for (auto& v : j.at("V")) s.V.push_back(matrix_from_json<S>(v));
    for (auto& v : j.at("H")) s.H.push_back(matrix_from_json<S>(v));
    if (s.V.size() != s.H.size()) throw DimensionError("V and H families differ in length");
    if (s.cross_defect() > (is_exact_v<S> ? 0.0 : 1e-9))
        throw DomainError("V^x H^y must vanish for x != y");
    return s;
}

namespace catalog {

// Hard-core gas, 2x2 split; t rescales V by t and H by 1/t.
template <class S>
SplitSolution<S> split_X(const S& p, const S& t = S(1)) {
    const S one(1), z{};
    SplitSolution<S> s;
    s.gas = GasKind::X;
    s.params = {p};
    S q = one - p;
    s.V = {Matrix<S>{{z, p}, {z, one}} * t, Matrix<S>{{z, z}, {one / q, z}} * t};
    S ti = one / t;
    s.H = {Matrix<S>{{z, z}, {one, q}} * ti, Matrix<S>{{z, S(q * p)}, {z, z}} * ti};
    return s;
}

template <class S>
FactorSolution<S> make_factor(GasKind gas, std::vector<S> params, int k, std::vector<std::vector<S>> entries) {
    FactorSolution<S> f;
    f.gas = gas;
    f.params = std::move(params);
    f.states = gas_states(gas);
    f.k = k;
    f.entries = std::move(entries);
    return f;
}

// Binary entries in the order a = h00, c = h01, b = h10, d = h11.
template <class S>
FactorSolution<S> binary(GasKind gas, std::vector<S> params, std::vector<S> a, std::vector<S> b, std::vector<S> c,
                         std::vector<S> d) {
    int k = static_cast<int>(a.size());
    return make_factor<S>(gas, std::move(params), k, {a, c, b, d});
}

// Size-4 hard-core solution with d = 0: a = (i s, 1), b = (0, 1), c = (s, 0).
template <class S>
FactorSolution<S> factor_X_reduced(const S& p, int sign = 1) {
    S s = square_root(p, sign), i = imag_unit<S>(), z{}, one(1);
    return binary<S>(GasKind::X, {p}, {i * s, one}, {z, one}, {s, z}, {z, z});
}

// Size-4 hard-core solution with c1 = 1: c = (1, i sqrt(1-p)).
template <class S>
FactorSolution<S> factor_X_c1(const S& p, int sign = 1) {
    S s = square_root(p, sign), i = imag_unit<S>(), z{}, one(1);
    S r = square_root(S(one - p), 1);
    return binary<S>(GasKind::X, {p}, {i * s, one}, {z, one}, {one, i * r}, {z, z});
}

// Size-6 hard-core solution with c1 = d1 = 1.
template <class S>
FactorSolution<S> factor_X_size6(const S& p, int sign = 1) {
    S s = square_root(p, sign), i = imag_unit<S>(), z{}, one(1);
    return binary<S>(GasKind::X, {p}, {i * s, z, one}, {z, z, one}, {one, s, i}, {one, z, i});
}

// Size-6 gas-Y solution with c1 = d1 = 1.
template <class S>
FactorSolution<S> factor_Y_size6(const S& p, const S& q, int sign = 1) {
    const S one(1), z{};
    S beta2 = (one - q) * (one - p);
    S tau = one - q + p * q;
    S b3 = square_root(beta2, sign);
    S d2 = square_root(S(z - beta2), 1);
    S a1 = square_root(S(z - p * tau / beta2), 1);
    S a3 = tau / b3;
    S c2 = (z - tau) / d2;
    S c3 = square_root(S(p * tau / beta2), 1);
    return binary<S>(GasKind::Y, {p, q}, {a1, z, a3}, {z, z, b3}, {one, c2, c3}, {one, d2, z});
}

namespace detail {
template <class S>
struct YConstants {
    S t01, t00, T11, beta2, beta;
};
template <class S>
YConstants<S> y_constants(const S& p, const S& q) {
    const S one(1);
    YConstants<S> k;
    k.t01 = (one - p) * q;
    k.t00 = one - k.t01;
    k.T11 = p + q - p * q;
    k.beta2 = (one - p) * (one - q);
    k.beta = square_root(k.beta2, 1);
    return k;
}
template <class S>
std::pair<std::vector<S>, std::vector<S>> y_ab(const S& p, const YConstants<S>& k) {
    const S z{};
    S a2 = k.t00 / k.beta;
    S a1 = square_root(S(z - p * k.t00), 1) / k.beta;
    return {{a1, a2}, {z, k.beta}};
}
} // namespace detail

// Size-4 gas-Y solution with d1 = 1, d = (1, i beta); sign picks the root for c2.
template <class S>
FactorSolution<S> factor_Y_d1(const S& p, const S& q, int sign = 1) {
    const S one(1);
    auto k = detail::y_constants(p, q);
    S d2 = imag_unit<S>() * k.beta;
    S c2 = (k.t01 * d2 + square_root(S(k.t01 * p), sign)) / k.T11;
    S c1 = k.t01 - d2 * c2;
    auto [a, b] = detail::y_ab(p, k);
    return binary<S>(GasKind::Y, {p, q}, a, b, {c1, c2}, {one, d2});
}

// Size-4 gas-Y solution under (p - pq + q) d1^2 + (1-p)(1-q) c1^2 = 1; sign
// picks the root of the quadratic for the ratio d1/c1.
template <class S>
FactorSolution<S> factor_Y_corner(const S& p, const S& q, int sign = 1) {
    const S one(1), two(2);
    auto k = detail::y_constants(p, q);
    S A = k.t01 - k.t01 * p * k.T11;
    S B = S(-2) * k.t01;
    S C = k.T11 - k.t01 * p * k.beta2;
    S ratio = (S{} - B + square_root(S(B * B - S(4) * A * C), sign)) / (two * A);
    S c1 = one / square_root(S(k.beta2 + k.T11 * ratio * ratio), 1);
    S d1 = ratio * c1;
    S d2 = square_root(S(k.T11 - d1 * d1), 1);
    S c2 = (k.t01 - c1 * d1) / d2;
    auto [a, b] = detail::y_ab(p, k);
    return binary<S>(GasKind::Y, {p, q}, a, b, {c1, c2}, {d1, d2});
}

// Size-4 bond-gas solution.
template <class S>
FactorSolution<S> factor_B(const S& p, const S& q) {
    const S one(1), z{};
    S s = square_root(p, 1), i = imag_unit<S>();
    S keep = one - q;
    return binary<S>(GasKind::B, {p, q}, {one, i * s}, {one, i * s * keep}, {s, z}, {s * keep, z});
}

// Bicolour solution with three entries per colour class.
template <class S>
FactorSolution<S> factor_bicolour(const S& p1, const S& p2) {
    const S one(1), z{};
    S r1 = square_root(p1, 1), r2 = square_root(p2, 1), i = imag_unit<S>();
    std::vector<std::vector<S>> e(9);
    for (int a = 0; a < 3; ++a) {
        e[static_cast<std::size_t>(a * 3 + 0)] = {one, a != 1 ? S(i * r1) : z, a != 2 ? S(i * r2) : z};
        e[static_cast<std::size_t>(a * 3 + 1)] = {a != 1 ? r1 : z, z, z};
        e[static_cast<std::size_t>(a * 3 + 2)] = {a != 2 ? r2 : z, z, z};
    }
    return make_factor<S>(GasKind::bicolour, {p1, p2}, 3, e);
}

// Triangular hard-core split with D = U, where r solves p + (1-2p) r + p r^2 = 0;
// sign picks the root.
template <class S>
ZigzagSolution<S> triangular_X(const S& p, int sign = 1) {
    const S one(1), two(2), z{};
    S disc = square_root(S(one - S(4) * p), sign);
    S r = (z - (one - two * p) + disc) / (two * p);
    ZigzagSolution<S> sol;
    sol.gas = GasKind::X;
    sol.params = {p};
    sol.triangular = true;
    sol.matrix = true;
    S rp = r * p;
    sol.D = {Matrix<S>{{one, r}, {one, r}}, Matrix<S>{{z - rp, rp}, {z - rp, rp}},
             Matrix<S>{{S(-1), z - r}, {one / r, one}}, Matrix<S>(2, 2)};
    sol.U = sol.D;
    return sol;
}

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"split-X",  "factor-X-reduced", "factor-X-c1",   "factor-X-6",
                                            "factor-Y-d1", "factor-Y-corner", "factor-Y-6", "factor-B",
                                            "factor-bicolour", "tri-X"};
    return n;
}

} // namespace catalog

} // namespace dagas
