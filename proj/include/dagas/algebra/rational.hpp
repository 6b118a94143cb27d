#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <ostream>
#include <string>

#include "dagas/algebra/errors.hpp"

namespace dagas {

using Rational = mpq_class;
using ComplexFloat = std::complex<double>;

// Accepts "a", "a/b", "-a/b"; denominators must be nonzero. Result is canonical.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw DomainError("empty rational");
    auto slash = text.find('/');
    auto valid = [](const std::string& s, bool allow_sign) {
        if (s.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    std::string num = slash == std::string::npos ? text : text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!valid(num, true) || !valid(den, false)) throw DomainError("malformed rational: " + text);
    if (num[0] == '+') num = num.substr(1);
    mpz_class n(num), d(den);
    if (d == 0) throw DomainError("zero denominator: " + text);
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// n/d in canonical form (mpq_class(n, d) alone does not normalize).
inline Rational frac(long n, long d) {
    if (d == 0) throw DomainError("zero denominator");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// a + b i with rational a, b.
struct Gaussian {
    Rational re, im;

    Gaussian() = default;
    Gaussian(int v) : re(v), im(0) {}
    Gaussian(const Rational& r) : re(r), im(0) {}
    Gaussian(const Rational& r, const Rational& i) : re(r), im(i) {}

    static Gaussian i() { return {Rational(0), Rational(1)}; }

    Gaussian conj() const { return {re, -im}; }
    Rational norm() const { return Rational(re * re + im * im); }

    Gaussian& operator+=(const Gaussian& o) { re += o.re; im += o.im; return *this; }
    Gaussian& operator-=(const Gaussian& o) { re -= o.re; im -= o.im; return *this; }
    Gaussian& operator*=(const Gaussian& o) {
        Rational r = re * o.re - im * o.im;
        Rational m = re * o.im + im * o.re;
        re = r; im = m;
        return *this;
    }
    Gaussian& operator/=(const Gaussian& o) {
        Rational n = o.norm();
        if (n == 0) throw DomainError("division by zero");
        *this *= o.conj();
        re /= n; im /= n;
        return *this;
    }
    friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
    friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
    friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
    friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
    friend Gaussian operator-(const Gaussian& a) { return {Rational(-a.re), Rational(-a.im)}; }
    friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
    friend std::ostream& operator<<(std::ostream& os, const Gaussian& g) {
        return os << to_string(g.re) << (g.im < 0 ? "" : "+") << to_string(g.im) << "i";
    }
};

inline ComplexFloat to_complex(const Rational& r) { return {r.get_d(), 0.0}; }
inline ComplexFloat to_complex(const Gaussian& g) { return {g.re.get_d(), g.im.get_d()}; }
inline ComplexFloat to_complex(const ComplexFloat& c) { return c; }

// Rational square root when the argument is a perfect square of a rational.
inline bool rational_sqrt(const Rational& r, Rational& out) {
    if (r < 0) return false;
    mpz_class n = r.get_num(), d = r.get_den();
    mpz_class sn = sqrt(n), sd = sqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    out = Rational(sn, sd);
    out.canonicalize();
    return true;
}

} // namespace dagas
