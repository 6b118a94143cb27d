#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dagas/algebra/matrix.hpp"

namespace dagas {

// Sparse multivariate polynomial with coefficients in S; variables are indices
// into a name table owned by the enclosing system.
template <class S>
class Poly {
public:
    using Monomial = std::vector<std::pair<int, int>>;  // (variable, exponent > 0), sorted

    Poly() = default;
    Poly(int c) : Poly(S(c)) {}
    Poly(const S& c) {
        if (!zero_coeff(c)) terms_[{}] = c;
    }
    static Poly variable(int index) {
        Poly p;
        p.terms_[{{index, 1}}] = S(1);
        return p;
    }

    const std::map<Monomial, S>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const {
        int d = 0;
        for (auto& [m, c] : terms_) {
            int t = 0;
            for (auto& [v, e] : m) t += e;
            d = std::max(d, t);
        }
        return d;
    }

    Poly& operator+=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, S(S{} - c));
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(const Poly& a) { return Poly{} - a; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(multiply(ma, mb), S(ca * cb));
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    // value(v) gives the value of variable v; convert maps a coefficient into T.
    template <class T, class Lookup, class Convert>
    T evaluate(const Lookup& value, const Convert& convert) const {
        T total{};
        for (auto& [m, c] : terms_) {
            T t = convert(c);
            for (auto& [v, e] : m)
                for (int k = 0; k < e; ++k) t *= value(v);
            total += t;
        }
        return total;
    }
    template <class Lookup>
    S evaluate(const Lookup& value) const {
        return evaluate<S>(value, [](const S& c) { return c; });
    }

    Poly derivative(int var) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            Monomial out;
            int e0 = 0;
            for (auto& [v, e] : m) {
                if (v == var) {
                    e0 = e;
                    if (e > 1) out.push_back({v, e - 1});
                } else {
                    out.push_back({v, e});
                }
            }
            if (e0) r.add_term(out, S(c * S(e0)));
        }
        return r;
    }

    std::vector<int> variables() const {
        std::vector<int> vs;
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m) vs.push_back(v);
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    template <class Printer>
    std::string to_string(const std::vector<std::string>& names, const Printer& coeff) const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            std::string mono;
            for (auto& [v, e] : m) {
                if (!mono.empty()) mono += "*";
                mono += names[static_cast<std::size_t>(v)] + (e > 1 ? "^" + std::to_string(e) : "");
            }
            if (mono.empty())
                out += coeff(c);
            else if (c == S(1))
                out += mono;
            else
                out += "(" + coeff(c) + ")*" + mono;
        }
        return out;
    }
    std::string to_string(const std::vector<std::string>& names) const {
        return to_string(names, [](const S& c) {
            std::ostringstream os;
            os << c;
            return os.str();
        });
    }

private:
    std::map<Monomial, S> terms_;

    static bool zero_coeff(const S& c) { return c == S{}; }
    void add_term(const Monomial& m, const S& c) {
        if (zero_coeff(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second += c;
        if (zero_coeff(it->second)) terms_.erase(it);
    }
    static Monomial multiply(const Monomial& a, const Monomial& b) {
        Monomial r;
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
                r.push_back(a[i++]);
            else if (i == a.size() || b[j].first < a[i].first)
                r.push_back(b[j++]);
            else {
                r.push_back({a[i].first, a[i].second + b[j].second});
                ++i;
                ++j;
            }
        }
        return r;
    }
};

template <class S>
struct scalar_traits<Poly<S>> {
    static constexpr bool exact = true;  // structural zeros are exact
    static constexpr const char* mode = "poly";
    static double magnitude(const Poly<S>& p) {
        double m = 0;
        for (auto& [mono, c] : p.terms()) m = std::max(m, scalar_traits<S>::magnitude(c));
        return m;
    }
    static bool is_zero(const Poly<S>& p, double = 0) { return p.is_zero(); }
};

// Determinant by cofactor expansion; meant for the small blocks of CNT conditions.
template <class S>
Poly<S> poly_determinant(const Matrix<Poly<S>>& a) {
    if (!a.square()) throw DimensionError("determinant of non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return Poly<S>(1);
    if (n == 1) return a(0, 0);
    if (n > 8) throw DimensionError("symbolic determinant limited to size 8");
    Poly<S> det;
    for (std::size_t j = 0; j < n; ++j) {
        if (a(0, j).is_zero()) continue;
        Matrix<Poly<S>> minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0, cc = 0; c < n; ++c)
                if (c != j) minor(r - 1, cc++) = a(r, c);
        Poly<S> term = a(0, j) * poly_determinant(minor);
        if (j % 2) det -= term;
        else det += term;
    }
    return det;
}

} // namespace dagas
