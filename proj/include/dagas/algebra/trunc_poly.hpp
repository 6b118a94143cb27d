#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dagas/algebra/rational.hpp"

namespace dagas {

struct DegreeMismatch : Error {
    using Error::Error;
};

// Bivariate polynomial with rational coefficients, truncated at total degree D.
// A value built from a constant carries no bound (D < 0) and adopts the bound of
// whatever it is combined with.
class TruncPoly {
public:
    TruncPoly() : coef_(1, Rational(0)) {}
    TruncPoly(int c) : coef_(1, Rational(c)) {}
    TruncPoly(const Rational& c) : coef_(1, c) {}

    static TruncPoly zero(int D, std::array<std::string, 2> names = {"x", "y"}) {
        TruncPoly p;
        p.D_ = D;
        p.names_ = std::move(names);
        p.coef_.assign(static_cast<std::size_t>((D + 1) * (D + 1)), Rational(0));
        return p;
    }
    static TruncPoly constant(const Rational& c, int D, std::array<std::string, 2> names = {"x", "y"}) {
        TruncPoly p = zero(D, std::move(names));
        p.coef_[0] = c;
        return p;
    }
    // The monomial x^i y^j (zero if i + j > D).
    static TruncPoly monomial(int i, int j, const Rational& c, int D,
                              std::array<std::string, 2> names = {"x", "y"}) {
        TruncPoly p = zero(D, std::move(names));
        if (i + j <= D) p.coef_[p.idx(i, j)] = c;
        return p;
    }

    int degree_bound() const { return D_; }
    bool bounded() const { return D_ >= 0; }
    const std::array<std::string, 2>& names() const { return names_; }

    Rational coeff(int i, int j) const {
        if (!bounded()) return (i == 0 && j == 0) ? coef_[0] : Rational(0);
        if (i < 0 || j < 0 || i + j > D_) return Rational(0);
        return coef_[idx(i, j)];
    }
    void set_coeff(int i, int j, const Rational& c) {
        if (!bounded()) throw DegreeMismatch("cannot set coefficients of an unbounded constant");
        if (i + j > D_) return;
        coef_[idx(i, j)] = c;
    }
    Rational constant_term() const { return coef_[0]; }

    // Nonzero terms as (i, j, c), ordered by (i, j).
    std::vector<std::tuple<int, int, Rational>> terms() const {
        std::vector<std::tuple<int, int, Rational>> out;
        if (!bounded()) {
            if (coef_[0] != 0) out.emplace_back(0, 0, coef_[0]);
            return out;
        }
        for (int i = 0; i <= D_; ++i)
            for (int j = 0; i + j <= D_; ++j)
                if (coef_[idx(i, j)] != 0) out.emplace_back(i, j, coef_[idx(i, j)]);
        return out;
    }

    TruncPoly& operator+=(const TruncPoly& o) {
        align(o);
        TruncPoly b = o.with_bound(D_, names_);
        for (std::size_t k = 0; k < coef_.size(); ++k) coef_[k] += b.coef_[k];
        return *this;
    }
    TruncPoly& operator-=(const TruncPoly& o) {
        align(o);
        TruncPoly b = o.with_bound(D_, names_);
        for (std::size_t k = 0; k < coef_.size(); ++k) coef_[k] -= b.coef_[k];
        return *this;
    }
    TruncPoly& operator*=(const TruncPoly& o) {
        align(o);
        TruncPoly b = o.with_bound(D_, names_);
        if (!bounded()) {
            coef_[0] *= b.coef_[0];
            return *this;
        }
        TruncPoly r = zero(D_, names_);
        for (int i = 0; i <= D_; ++i)
            for (int j = 0; i + j <= D_; ++j) {
                const Rational& a = coef_[idx(i, j)];
                if (a == 0) continue;
                for (int k = 0; i + j + k <= D_; ++k)
                    for (int l = 0; i + j + k + l <= D_; ++l) {
                        const Rational& c = b.coef_[idx(k, l)];
                        if (c != 0) r.coef_[idx(i + k, j + l)] += a * c;
                    }
            }
        *this = std::move(r);
        return *this;
    }
    TruncPoly& operator/=(const TruncPoly& o) {
        align(o);
        TruncPoly b = o.with_bound(D_, names_);
        return *this *= b.inverse();
    }

    // Series inverse; requires a nonzero constant term.
    TruncPoly inverse() const {
        if (coef_[0] == 0) throw DomainError("division by polynomial with zero constant term");
        if (!bounded()) return TruncPoly(Rational(1 / coef_[0]));
        TruncPoly g = zero(D_, names_);
        Rational inv0 = 1 / coef_[0];
        g.coef_[0] = inv0;
        for (int d = 1; d <= D_; ++d)
            for (int i = 0; i <= d; ++i) {
                int j = d - i;
                Rational acc = 0;
                for (int k = 0; k <= i; ++k)
                    for (int l = 0; l <= j; ++l) {
                        if (k + l == 0) continue;
                        const Rational& f = coef_[idx(k, l)];
                        if (f != 0) acc += f * g.coef_[idx(i - k, j - l)];
                    }
                g.coef_[idx(i, j)] = -acc * inv0;
            }
        return g;
    }

    friend TruncPoly operator+(TruncPoly a, const TruncPoly& b) { return a += b; }
    friend TruncPoly operator-(TruncPoly a, const TruncPoly& b) { return a -= b; }
    friend TruncPoly operator*(TruncPoly a, const TruncPoly& b) { return a *= b; }
    friend TruncPoly operator/(TruncPoly a, const TruncPoly& b) { return a /= b; }
    friend TruncPoly operator-(const TruncPoly& a) {
        TruncPoly r = a;
        for (auto& c : r.coef_) c = -c;
        return r;
    }
    friend bool operator==(const TruncPoly& a, const TruncPoly& b) {
        int D = std::max(a.D_, b.D_);
        if (D < 0) return a.coef_[0] == b.coef_[0];
        for (int i = 0; i <= D; ++i)
            for (int j = 0; i + j <= D; ++j)
                if (a.coeff(i, j) != b.coeff(i, j)) return false;
        return true;
    }
    friend bool operator!=(const TruncPoly& a, const TruncPoly& b) { return !(a == b); }

    // Evaluate at rational point (x, y).
    Rational evaluate(const Rational& x, const Rational& y) const {
        Rational s = 0;
        for (auto& [i, j, c] : terms()) {
            Rational t = c;
            for (int k = 0; k < i; ++k) t *= x;
            for (int k = 0; k < j; ++k) t *= y;
            s += t;
        }
        return s;
    }

private:
    int D_ = -1;
    std::array<std::string, 2> names_{};
    std::vector<Rational> coef_;

    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * (D_ + 1) + j); }

    void align(const TruncPoly& o) {
        if (bounded() && o.bounded() && D_ != o.D_)
            throw DegreeMismatch("degree bounds differ: " + std::to_string(D_) + " vs " + std::to_string(o.D_));
        if (bounded() && o.bounded() && !names_[0].empty() && !o.names_[0].empty() && names_ != o.names_)
            throw DegreeMismatch("variable names differ");
        if (!bounded() && o.bounded()) *this = with_bound(o.D_, o.names_);
    }
    TruncPoly with_bound(int D, const std::array<std::string, 2>& names) const {
        if (D < 0 || bounded()) return *this;
        return constant(coef_[0], D, names);
    }
};

} // namespace dagas
