#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "dagas/gas/local_transition.hpp"
#include "dagas/systems/poly.hpp"

namespace dagas {

enum class SystemKind {
    finite_split,
    factor_X,
    factor_Y,
    factor_B,
    factor_bicolour,
    zigzag_scalar,
    zigzag_matrix,
    tri_split,
    tri_factor
};

inline const std::vector<std::pair<SystemKind, std::string>>& system_kind_names() {
    static const std::vector<std::pair<SystemKind, std::string>> names{
        {SystemKind::finite_split, "finite-split"}, {SystemKind::factor_X, "factor-X"},
        {SystemKind::factor_Y, "factor-Y"},         {SystemKind::factor_B, "factor-B"},
        {SystemKind::factor_bicolour, "factor-bicolour"}, {SystemKind::zigzag_scalar, "zigzag-scalar"},
        {SystemKind::zigzag_matrix, "zigzag-matrix"}, {SystemKind::tri_split, "tri-split"},
        {SystemKind::tri_factor, "tri-factor"}};
    return names;
}

inline std::string system_kind_name(SystemKind k) {
    for (auto& [kind, name] : system_kind_names())
        if (kind == k) return name;
    return "?";
}

// Case-insensitive.
inline SystemKind parse_system_kind(const std::string& s) {
    auto same = [](const std::string& a, const std::string& b) {
        return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
                   return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
               });
    };
    for (auto& [kind, name] : system_kind_names())
        if (same(name, s)) return kind;
    throw DomainError("unknown system kind: " + s);
}

inline bool is_factor_kind(SystemKind k) {
    return k == SystemKind::factor_X || k == SystemKind::factor_Y || k == SystemKind::factor_B ||
           k == SystemKind::factor_bicolour;
}

inline GasKind factor_gas(SystemKind k) {
    switch (k) {
        case SystemKind::factor_X: return GasKind::X;
        case SystemKind::factor_Y: return GasKind::Y;
        case SystemKind::factor_B: return GasKind::B;
        case SystemKind::factor_bicolour: return GasKind::bicolour;
        default: throw DomainError("not a factor kind");
    }
}

struct SystemOptions {
    // finite-split, zigzag-matrix, tri-split: matrix size; factor kinds: entries per
    // child class (pattern size = classes * size); tri-factor: vector length.
    int size = 2;
    GasKind gas = GasKind::X;  // ignored by factor kinds (implied by the kind)
    bool trace_one = false;    // finite-split: trace(sum_x V^x H^x) = 1
    bool c1_one = false;       // factor kinds: c_1 = 1
    bool d1_one = false;       // factor kinds: d_1 = 1
    bool corner_y = false;     // factor-Y: (p - pq + q) d_1^2 + (1-p)(1-q) c_1^2 = 1
    bool printed_y = false;    // factor-Y: the printed 7-equation list instead of the master equations
    bool cnt = false;          // zigzag kinds: det(M - I) = 0
};

using Assignment = std::map<std::string, ComplexFloat>;

template <class S>
struct ResidualReport {
    double max_abs = 0;
    std::vector<S> values;
    bool exact_zero() const {
        for (auto& v : values)
            if (!(v == S{})) return false;
        return true;
    }
};

template <class S>
struct PolySystem {
    SystemKind kind = SystemKind::finite_split;
    SystemOptions options;
    std::vector<S> params;
    std::vector<std::string> names;
    std::vector<Poly<S>> equations;
    std::vector<std::string> labels;

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        throw DomainError("unknown variable " + name);
    }
    int add_variable(const std::string& name) {
        names.push_back(name);
        return static_cast<int>(names.size()) - 1;
    }
    Poly<S> var(const std::string& name) const { return Poly<S>::variable(index_of(name)); }
    void add_equation(Poly<S> p, std::string label) {
        equations.push_back(std::move(p));
        labels.push_back(std::move(label));
    }
    // Every variable must be assigned; values are given in the system's scalar type.
    ResidualReport<S> residual(const std::map<std::string, S>& values) const {
        std::vector<S> v(names.size());
        for (std::size_t i = 0; i < names.size(); ++i) {
            auto it = values.find(names[i]);
            if (it == values.end()) throw DomainError("missing variable " + names[i]);
            v[i] = it->second;
        }
        ResidualReport<S> r;
        for (auto& e : equations) {
            S val = e.evaluate([&](int k) -> const S& { return v[static_cast<std::size_t>(k)]; });
            r.max_abs = std::max(r.max_abs, magnitude(val));
            r.values.push_back(val);
        }
        return r;
    }
};

namespace detail {

template <class S>
Matrix<Poly<S>> matrix_variables(PolySystem<S>& sys, const std::string& prefix, int rows, int cols) {
    Matrix<Poly<S>> m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                Poly<S>::variable(sys.add_variable(prefix + "_" + std::to_string(i) + "_" + std::to_string(j)));
    return m;
}

template <class S>
void add_matrix_equations(PolySystem<S>& sys, const Matrix<Poly<S>>& m, const std::string& label) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            sys.add_equation(m(i, j), label + "[" + std::to_string(i) + "," + std::to_string(j) + "]");
}

template <class S>
Matrix<Poly<S>> lift(const Matrix<S>& m) {
    return map_entries<Poly<S>>(m, [](const S& v) { return Poly<S>(v); });
}

inline std::string bit(int v) { return std::to_string(v); }

// Name of entry j (1-based) of the pattern vector h_{y,x}.
inline std::string factor_entry_name(GasKind gas, int y, int x, int j) {
    if (gas == GasKind::bicolour) return "h" + bit(y) + bit(x) + "_" + std::to_string(j);
    static const char letters[2][2] = {{'a', 'c'}, {'b', 'd'}};  // [y][x]
    return std::string(1, letters[y][x]) + std::to_string(j);
}

} // namespace detail

// Slot (0-based) of entry j (1-based) of h_{y,x} in the alternating pattern:
// binary gases put child 0 on odd slots and child 1 on even slots; the bicolour
// gas puts child x on slots = x (mod 3).
inline int factor_slot(GasKind gas, int x, int j) {
    if (gas == GasKind::bicolour) return 3 * (j - 1) + x;
    return 2 * (j - 1) + (1 - x);
}

template <class S>
PolySystem<S> build_system(SystemKind kind, const std::vector<S>& params, SystemOptions opt = {}) {
    PolySystem<S> sys;
    sys.kind = kind;
    sys.options = opt;
    sys.params = params;
    const int k = opt.size;
    if (k < 1) throw DimensionError("system size must be >= 1");
    const S one(1);
    using P = Poly<S>;
    using detail::bit;

    if (is_factor_kind(kind)) {
        const GasKind gas = factor_gas(kind);
        sys.options.gas = gas;
        auto T = local_transition<S>(gas, params);
        const int st = T.states;
        // h_{y,x} as lists of variables
        std::vector<std::vector<P>> h(static_cast<std::size_t>(st * st));
        for (int x = 0; x < st; ++x)
            for (int y = 0; y < st; ++y)
                for (int j = 1; j <= k; ++j)
                    h[static_cast<std::size_t>(y * st + x)].push_back(
                        P::variable(sys.add_variable(detail::factor_entry_name(gas, y, x, j))));
        auto dot = [&](int y, int y2, int x) {
            P s;
            for (int j = 0; j < k; ++j)
                s += h[static_cast<std::size_t>(y * st + x)][static_cast<std::size_t>(j)] *
                     h[static_cast<std::size_t>(y2 * st + x)][static_cast<std::size_t>(j)];
            return s;
        };
        if (kind == SystemKind::factor_Y && opt.printed_y) {
            const S &p = params[0], &q = params[1];
            P c1 = sys.var("c1"), d1 = sys.var("d1");
            sys.add_equation(dot(0, 0, 1) - P(S(q - p * q)), "c.c - q + pq");
            sys.add_equation(c1 * c1 + P(q) * d1 * d1 - P(q) * c1 * c1 - P(one), "c1^2 + q d1^2 - q c1^2 - 1");
            sys.add_equation(dot(1, 1, 1) - P(S(p - p * q + q)), "d.d - p + pq - q");
            sys.add_equation(dot(1, 0, 1) - P(S(q - p * q)), "d.c - q + pq");
            sys.add_equation(dot(0, 0, 0) - P(S(one - q + p * q)), "a.a - 1 + q - pq");
            sys.add_equation(dot(1, 0, 0) - P(S(one - q + p * q)), "b.a - 1 + q - pq");
            sys.add_equation(dot(1, 1, 0) - P(S(one - q - p + p * q)), "b.b - 1 + q + p - pq");
        } else {
            // master equations h_{y,x} v_{y',x} = T(y, y', x), v = h^T, for y <= y'
            for (int x = st - 1; x >= 0; --x)
                for (int y = st - 1; y >= 0; --y)
                    for (int y2 = y; y2 < st; ++y2)
                        sys.add_equation(dot(y, y2, x) - P(T({y, y2}, x)),
                                         "h" + bit(y) + bit(x) + ".h" + bit(y2) + bit(x) + " - T(" + bit(y) + "," +
                                             bit(y2) + "," + bit(x) + ")");
        }
        if (gas != GasKind::bicolour) {
            if (opt.c1_one) sys.add_equation(sys.var("c1") - P(one), "c1 - 1");
            if (opt.d1_one) sys.add_equation(sys.var("d1") - P(one), "d1 - 1");
            if (opt.corner_y) {
                if (gas != GasKind::Y) throw DomainError("corner condition applies to factor-Y");
                const S &p = params[0], &q = params[1];
                P c1 = sys.var("c1"), d1 = sys.var("d1");
                sys.add_equation(P(S(p - p * q + q)) * d1 * d1 + P(S((one - p) * (one - q))) * c1 * c1 - P(one),
                                 "corner");
            }
        }
        return sys;
    }

    switch (kind) {
        case SystemKind::finite_split: {
            auto T = local_transition<S>(opt.gas, params);
            const int st = T.states;
            std::vector<Matrix<P>> V, H;
            for (int x = 0; x < st; ++x) V.push_back(detail::matrix_variables(sys, "V" + bit(x), k, k));
            for (int x = 0; x < st; ++x) H.push_back(detail::matrix_variables(sys, "H" + bit(x), k, k));
            for (int x = 0; x < st; ++x)
                for (int y = 0; y < st; ++y)
                    if (x != y)
                        detail::add_matrix_equations(sys, Matrix<P>(V[static_cast<std::size_t>(x)] * H[static_cast<std::size_t>(y)]),
                                                     "V" + bit(x) + "H" + bit(y));
            for (int x = 0; x < st; ++x) {
                Matrix<P> rhs(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
                for (int y = 0; y < st; ++y)
                    for (int y2 = 0; y2 < st; ++y2) {
                        const S& t = T({y, y2}, x);
                        if (t == S{}) continue;
                        rhs += Matrix<P>(H[static_cast<std::size_t>(y)] * V[static_cast<std::size_t>(y2)]) * P(t);
                    }
                detail::add_matrix_equations(
                    sys, Matrix<P>(V[static_cast<std::size_t>(x)] * H[static_cast<std::size_t>(x)] - rhs),
                    "main" + bit(x));
            }
            if (opt.trace_one) {
                P tr;
                for (int x = 0; x < st; ++x)
                    tr += trace(Matrix<P>(V[static_cast<std::size_t>(x)] * H[static_cast<std::size_t>(x)]));
                sys.add_equation(tr - P(one), "trace - 1");
            }
            return sys;
        }
        case SystemKind::zigzag_scalar:
        case SystemKind::zigzag_matrix: {
            auto T = local_transition<S>(opt.gas, params);
            if (T.states != 2) throw DomainError("zigzag systems are binary");
            const int kk = kind == SystemKind::zigzag_scalar ? 1 : k;
            auto name = [&](const char* base, int a, int b) {
                std::string n = base + bit(a) + bit(b);
                return n;
            };
            std::vector<Matrix<P>> D(4), U(4);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    auto idx = static_cast<std::size_t>(a * 2 + b);
                    if (kind == SystemKind::zigzag_scalar) {
                        D[idx] = Matrix<P>{{P::variable(sys.add_variable(name("d", a, b)))}};
                    } else {
                        D[idx] = detail::matrix_variables(sys, name("D", a, b), kk, kk);
                    }
                }
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    auto idx = static_cast<std::size_t>(a * 2 + b);
                    if (kind == SystemKind::zigzag_scalar)
                        U[idx] = Matrix<P>{{P::variable(sys.add_variable(name("u", a, b)))}};
                    else
                        U[idx] = detail::matrix_variables(sys, name("U", a, b), kk, kk);
                }
            P w01 = P::variable(sys.add_variable("w01"));
            P w10 = P::variable(sys.add_variable("w10"));
            Matrix<P> Pm = kind == SystemKind::zigzag_matrix ? detail::matrix_variables(sys, "P", kk, kk)
                                                             : Matrix<P>::identity(1);
            auto m = [&](int a, int b) {
                Matrix<P> s(static_cast<std::size_t>(kk), static_cast<std::size_t>(kk));
                for (int c = 0; c < 2; ++c) s += D[static_cast<std::size_t>(a * 2 + c)] * U[static_cast<std::size_t>(c * 2 + b)];
                return s;
            };
            auto mt = [&](int a, int b) {
                Matrix<P> s(static_cast<std::size_t>(kk), static_cast<std::size_t>(kk));
                for (int c = 0; c < 2; ++c) s += U[static_cast<std::size_t>(a * 2 + c)] * D[static_cast<std::size_t>(c * 2 + b)];
                return s;
            };
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        detail::add_matrix_equations(
                            sys,
                            Matrix<P>(D[static_cast<std::size_t>(a * 2 + c)] * U[static_cast<std::size_t>(c * 2 + b)] -
                                      m(a, b) * P(T({a, b}, c))),
                            "DU" + bit(a) + bit(c) + bit(b));
            auto w = [&](int a, int b) { return a == b ? P(one) : (a == 0 ? w01 : w10); };
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    // square: m~ = w m; matrix: P m = w m~ P
                    Matrix<P> e = kind == SystemKind::zigzag_scalar ? Matrix<P>(mt(a, b) - m(a, b) * w(a, b))
                                                                    : Matrix<P>(Pm * m(a, b) - mt(a, b) * Pm * w(a, b));
                    detail::add_matrix_equations(sys, e, "w" + bit(a) + bit(b));
                }
            sys.add_equation(w01 * w10 - P(one), "w01 w10 - 1");
            if (opt.cnt) {
                Matrix<P> M(static_cast<std::size_t>(2 * kk), static_cast<std::size_t>(2 * kk));
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        auto blk = m(a, b);
                        for (int i = 0; i < kk; ++i)
                            for (int j = 0; j < kk; ++j)
                                M(static_cast<std::size_t>(a * kk + i), static_cast<std::size_t>(b * kk + j)) =
                                    blk(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                    }
                sys.add_equation(poly_determinant(Matrix<P>(M - Matrix<P>::identity(M.rows()))), "det(M - I)");
            }
            return sys;
        }
        case SystemKind::tri_split: {
            auto T = local_transition<S>(opt.gas, params, 3);
            std::vector<Matrix<P>> D(4), U(4);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    D[static_cast<std::size_t>(a * 2 + b)] = detail::matrix_variables(sys, "D" + bit(a) + bit(b), k, k);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    U[static_cast<std::size_t>(a * 2 + b)] = detail::matrix_variables(sys, "U" + bit(a) + bit(b), k, k);
            auto Dm = [&](int a, int b) -> const Matrix<P>& { return D[static_cast<std::size_t>(a * 2 + b)]; };
            auto Um = [&](int a, int b) -> const Matrix<P>& { return U[static_cast<std::size_t>(a * 2 + b)]; };
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c) {
                        detail::add_matrix_equations(sys, Matrix<P>(Dm(a, b) * Um(1 - b, c)),
                                                     "D" + bit(a) + bit(b) + "U" + bit(1 - b) + bit(c));
                        detail::add_matrix_equations(sys, Matrix<P>(Um(a, b) * Dm(1 - b, c)),
                                                     "U" + bit(a) + bit(b) + "D" + bit(1 - b) + bit(c));
                    }
            for (int d = 0; d < 2; ++d)
                for (int f = 0; f < 2; ++f)
                    for (int d2 = 0; d2 < 2; ++d2) {
                        Matrix<P> e = Dm(d, f) * Um(f, d2);
                        for (int u = 0; u < 2; ++u) {
                            const S& t = T({d, u, d2}, f);
                            if (t == S{}) continue;
                            e -= Matrix<P>(Um(d, u) * Dm(u, d2)) * P(t);
                        }
                        detail::add_matrix_equations(sys, e, "main" + bit(d) + bit(f) + bit(d2));
                    }
            return sys;
        }
        case SystemKind::tri_factor: {
            auto T = local_transition<S>(opt.gas, params, 3);
            std::map<std::string, std::vector<P>> vecs;
            auto make = [&](const std::string& n) {
                std::vector<P> v;
                for (int j = 0; j < k; ++j) v.push_back(P::variable(sys.add_variable(n + "_" + std::to_string(j + 1))));
                vecs[n] = v;
            };
            for (int d = 0; d < 2; ++d)
                for (int x = 0; x < 2; ++x)
                    for (int z = 0; z < 2; ++z) make("h" + bit(d) + bit(x) + bit(z));
            for (int x = 0; x < 2; ++x)
                for (int d = 0; d < 2; ++d)
                    for (int z = 0; z < 2; ++z) make("v" + bit(x) + bit(d) + bit(z));
            for (int d = 0; d < 2; ++d)
                for (int x = 0; x < 2; ++x)
                    for (int z = 0; z < 2; ++z)
                        for (int d2 = 0; d2 < 2; ++d2)
                            for (int z2 = 0; z2 < 2; ++z2) {
                                auto& h = vecs["h" + bit(d) + bit(x) + bit(z)];
                                auto& v = vecs["v" + bit(x) + bit(d2) + bit(z2)];
                                P s;
                                for (int j = 0; j < k; ++j) s += h[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
                                if (z == z2) s -= P(T({d, x, d2}, z));
                                sys.add_equation(s, "h" + bit(d) + bit(x) + bit(z) + ".v" + bit(x) + bit(d2) + bit(z2));
                            }
            return sys;
        }
        default: break;
    }
    throw DomainError("unsupported system kind");
}

} // namespace dagas
