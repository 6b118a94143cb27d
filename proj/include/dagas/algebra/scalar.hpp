#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

#include "dagas/algebra/rational.hpp"
#include "dagas/algebra/trunc_poly.hpp"

namespace dagas {

// Per-mode behaviour shared by the generic algorithms. Exact modes compare with
// ==; float mode compares against an explicit tolerance.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* mode = "rational";
    static Rational from_rational(const Rational& r) { return r; }
    static double magnitude(const Rational& r) { return std::abs(r.get_d()); }
    static bool is_zero(const Rational& r, double = 0) { return r == 0; }
    static ComplexFloat to_complex(const Rational& r) { return {r.get_d(), 0.0}; }
};

template <>
struct scalar_traits<Gaussian> {
    static constexpr bool exact = true;
    static constexpr const char* mode = "gaussian";
    static Gaussian from_rational(const Rational& r) { return Gaussian(r); }
    static double magnitude(const Gaussian& g) { return std::hypot(g.re.get_d(), g.im.get_d()); }
    static bool is_zero(const Gaussian& g, double = 0) { return g.re == 0 && g.im == 0; }
    static ComplexFloat to_complex(const Gaussian& g) { return {g.re.get_d(), g.im.get_d()}; }
};

template <>
struct scalar_traits<ComplexFloat> {
    static constexpr bool exact = false;
    static constexpr const char* mode = "complex";
    static ComplexFloat from_rational(const Rational& r) { return {r.get_d(), 0.0}; }
    static double magnitude(const ComplexFloat& c) { return std::abs(c); }
    static bool is_zero(const ComplexFloat& c, double tol) { return std::abs(c) <= tol; }
    static ComplexFloat to_complex(const ComplexFloat& c) { return c; }
};

template <>
struct scalar_traits<TruncPoly> {
    static constexpr bool exact = true;
    static constexpr const char* mode = "poly";
    static TruncPoly from_rational(const Rational& r) { return TruncPoly(r); }
    static double magnitude(const TruncPoly& p) {
        double m = 0;
        for (auto& t : p.terms()) m = std::max(m, std::abs(std::get<2>(t).get_d()));
        return m;
    }
    static bool is_zero(const TruncPoly& p, double = 0) { return p.terms().empty(); }
};

template <class S>
inline constexpr bool is_exact_v = scalar_traits<S>::exact;

template <class S>
S from_rational(const Rational& r) {
    return scalar_traits<S>::from_rational(r);
}

template <class S>
S from_string(const std::string& text) {
    return from_rational<S>(parse_rational(text));
}

template <class S>
double magnitude(const S& s) {
    return scalar_traits<S>::magnitude(s);
}

template <class S>
bool is_zero(const S& s, double tol = 0) {
    return scalar_traits<S>::is_zero(s, tol);
}

// Residual-style comparison: exact equality in exact modes, |a-b| <= tol otherwise.
template <class S>
bool approx_equal(const S& a, const S& b, double tol) {
    if constexpr (is_exact_v<S>)
        return a == b;
    else
        return scalar_traits<S>::magnitude(a - b) <= tol;
}

} // namespace dagas
