#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dagas/algebra/json.hpp"
#include "dagas/algebra/rational.hpp"

namespace dagas {

// (row, column) of the square lattice or of a square cylinder.
using Cell = std::pair<long, long>;

// Square lattice (width 0) or square cylinder Sq(n). Children of (r, c) are
// (r+1, c) and (r+1, c+1); on Sq(1) they coincide and carry two parallel edges.
struct AnimalLattice {
    int n = 0;

    static AnimalLattice plane() { return {0}; }
    static AnimalLattice cylinder(int width) {
        if (width < 1) throw DomainError("cylinder width must be >= 1");
        return {width};
    }
    bool is_plane() const { return n == 0; }
    long wrap(long c) const { return n == 0 ? c : ((c % n) + n) % n; }
    Cell normalize(Cell x) const { return {x.first, wrap(x.second)}; }
    // with edge multiplicity
    std::vector<Cell> children(const Cell& x) const {
        return {{x.first + 1, wrap(x.second)}, {x.first + 1, wrap(x.second + 1)}};
    }
    std::vector<Cell> parents(const Cell& x) const {
        return {{x.first - 1, wrap(x.second)}, {x.first - 1, wrap(x.second - 1)}};
    }
    // Is there a directed path (of length >= 1) from a to b?
    bool reaches(const Cell& a, const Cell& b) const {
        long dr = b.first - a.first;
        if (dr < 1) return false;
        if (n == 0) {
            long dc = b.second - a.second;
            return dc >= 0 && dc <= dr;
        }
        long d = wrap(b.second - a.second);
        return d <= dr;  // some k in [0, dr] with k = d (mod n)
    }
    std::string name() const { return n == 0 ? "Sq" : "Sq(" + std::to_string(n) + ")"; }
};

struct SourceSpec {
    AnimalLattice lattice;
    std::vector<Cell> sources;
    bool require_free = true;
};

inline void validate_sources(const AnimalLattice& lat, std::vector<Cell>& s, bool require_free) {
    for (auto& c : s) c = lat.normalize(c);
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw DomainError("sources must be distinct");
    if (!require_free) return;
    for (auto& a : s)
        for (auto& b : s)
            if (a != b && lat.reaches(a, b)) throw DomainError("source set is not free");
}

// Polynomial with non-negative integer coefficients in two variables, truncated by
// the area exponent (the first one for x/y polynomials, the sum for x1/x2).
struct GFPoly {
    std::string var1 = "x", var2 = "y";
    int a_max = 0;
    bool total_area = false;  // area = e1 + e2 (bicoloured) instead of e1
    std::map<std::pair<int, int>, std::uint64_t> coeffs;

    void add(int e1, int e2, std::uint64_t c = 1) {
        if (c) coeffs[{e1, e2}] += c;
    }
    std::uint64_t coeff(int e1, int e2) const {
        auto it = coeffs.find({e1, e2});
        return it == coeffs.end() ? 0 : it->second;
    }
    int area(const std::pair<int, int>& e) const { return total_area ? e.first + e.second : e.first; }
    // coefficient sums by area
    std::vector<std::uint64_t> area_counts() const {
        std::vector<std::uint64_t> c(static_cast<std::size_t>(a_max) + 1, 0);
        for (auto& [e, v] : coeffs) c[static_cast<std::size_t>(area(e))] += v;
        return c;
    }
    // per-area sums of |coefficient * x^0 y^e2| style weights: sum_j c_{k,j} |w2|^j
    std::vector<Rational> weighted_area_counts(const Rational& abs_w2) const {
        std::vector<Rational> c(static_cast<std::size_t>(a_max) + 1, Rational(0));
        for (auto& [e, v] : coeffs) {
            Rational w(static_cast<unsigned long>(v));
            if (!total_area)
                for (int j = 0; j < e.second; ++j) w *= abs_w2;
            c[static_cast<std::size_t>(area(e))] += w;
        }
        return c;
    }
    template <class S>
    S evaluate(const S& v1, const S& v2) const {
        S total{};
        for (auto& [e, c] : coeffs) {
            S term(static_cast<long>(c));
            for (int k = 0; k < e.first; ++k) term *= v1;
            for (int k = 0; k < e.second; ++k) term *= v2;
            total += term;
        }
        return total;
    }
    GFPoly& operator+=(const GFPoly& o) {
        for (auto& [e, c] : o.coeffs) add(e.first, e.second, c);
        return *this;
    }
    friend bool operator==(const GFPoly& a, const GFPoly& b) { return a.a_max == b.a_max && a.coeffs == b.coeffs; }

    json to_json() const {
        json terms = json::array();
        for (auto& [e, c] : coeffs) terms.push_back(json{{var1, e.first}, {var2, e.second}, {"count", c}});
        json counts = json::array();
        for (auto c : area_counts()) counts.push_back(c);
        return json{{"variables", {var1, var2}}, {"a_max", a_max}, {"terms", terms}, {"area_counts", counts}};
    }
    std::string to_string() const {
        std::string out;
        for (auto& [e, c] : coeffs) {
            if (!out.empty()) out += " + ";
            std::string mono;
            auto pw = [&](const std::string& v, int k) {
                if (k == 0) return;
                if (!mono.empty()) mono += "*";
                mono += v + (k > 1 ? "^" + std::to_string(k) : "");
            };
            pw(var1, e.first);
            pw(var2, e.second);
            out += mono.empty() ? std::to_string(c) : (c == 1 ? mono : std::to_string(c) + "*" + mono);
        }
        return out.empty() ? "0" : out;
    }
};

enum class AnimalWeight { perimeter, bonds };

namespace detail {

// Branch on the least candidate (children of A outside A and not excluded):
// exclude it forever, or add it. Each animal is reached exactly once.
template <class Allowed, class Leaf>
void grow_animals(const AnimalLattice& lat, std::map<Cell, int>& A, std::set<Cell>& excluded, int a_max, int colours,
                  const Allowed& allowed, const Leaf& leaf) {
    std::optional<Cell> best;
    for (auto& [a, col] : A)
        for (auto& c : lat.children(a))
            if (!A.count(c) && !excluded.count(c) && (!best || c < *best)) best = c;
    if (!best || static_cast<int>(A.size()) >= a_max) {
        leaf(A);
        return;
    }
    const Cell c = *best;
    excluded.insert(c);
    grow_animals(lat, A, excluded, a_max, colours, allowed, leaf);
    excluded.erase(c);
    for (int col = 1; col <= colours; ++col) {
        if (!allowed(A, c, col)) continue;
        A.emplace(c, col);
        grow_animals(lat, A, excluded, a_max, colours, allowed, leaf);
        A.erase(c);
    }
}

inline int perimeter_size(const AnimalLattice& lat, const std::map<Cell, int>& A) {
    std::set<Cell> p;
    for (auto& [a, col] : A)
        for (auto& c : lat.children(a))
            if (!A.count(c)) p.insert(c);
    return static_cast<int>(p.size());
}

inline int bond_count(const AnimalLattice& lat, const std::map<Cell, int>& A) {
    int b = 0;
    for (auto& [a, col] : A)
        for (auto& c : lat.children(a))
            if (A.count(c)) ++b;
    return b;
}

} // namespace detail

// Calls visit(A) once for every directed animal with source exactly S and area <= a_max.
template <class F>
void for_each_animal(SourceSpec src, int a_max, F&& visit) {
    if (a_max < 1) throw DomainError("a_max must be >= 1");
    validate_sources(src.lattice, src.sources, src.require_free);
    if (src.sources.empty() || static_cast<int>(src.sources.size()) > a_max) return;
    std::map<Cell, int> A;
    for (auto& s : src.sources) A.emplace(s, 1);
    std::set<Cell> excluded;
    auto any = [](const std::map<Cell, int>&, const Cell&, int) { return true; };
    detail::grow_animals(src.lattice, A, excluded, a_max, 1, any, visit);
}

// Directed animals with source exactly S, area <= a_max, weighted by x^area and
// y^perimeter (or y^bonds).
inline GFPoly enumerate_da(const SourceSpec& src, int a_max, AnimalWeight weight = AnimalWeight::perimeter) {
    GFPoly gf;
    gf.a_max = a_max;
    const auto& lat = src.lattice;
    for_each_animal(src, a_max, [&](const std::map<Cell, int>& a) {
        int e2 = weight == AnimalWeight::perimeter ? detail::perimeter_size(lat, a) : detail::bond_count(lat, a);
        gf.add(static_cast<int>(a.size()), e2);
    });
    return gf;
}

enum class ColourRule { reach, literal };

// Bicoloured animals with sources S1 (colour 1) and S2 (colour 2), counted by
// x1^{#colour 1} x2^{#colour 2}. reach: a cell may take colour i only if one of
// its parents in A has colour i. literal: every edge inside A joins equal colours.
inline GFPoly enumerate_bicoloured(const AnimalLattice& lat, std::vector<Cell> s1, std::vector<Cell> s2, int a_max,
                                   ColourRule rule = ColourRule::reach) {
    if (a_max < 1) throw DomainError("a_max must be >= 1");
    std::vector<Cell> all = s1;
    all.insert(all.end(), s2.begin(), s2.end());
    validate_sources(lat, all, true);
    for (auto& c : s1) c = lat.normalize(c);
    for (auto& c : s2) c = lat.normalize(c);
    GFPoly gf;
    gf.var1 = "x1";
    gf.var2 = "x2";
    gf.total_area = true;
    gf.a_max = a_max;
    if (all.empty() || static_cast<int>(all.size()) > a_max) return gf;
    std::map<Cell, int> A;
    for (auto& s : s1) A.emplace(s, 1);
    for (auto& s : s2) A.emplace(s, 2);
    auto allowed = [&](const std::map<Cell, int>& a, const Cell& c, int col) {
        bool some = false, clash = false;
        for (auto& p : lat.parents(c)) {
            auto it = a.find(p);
            if (it == a.end()) continue;
            some = some || it->second == col;
            clash = clash || it->second != col;
        }
        if (rule == ColourRule::reach) return some;
        for (auto& ch : lat.children(c)) {
            auto it = a.find(ch);
            if (it != a.end() && it->second != col) clash = true;
        }
        return !clash;
    };
    auto leaf = [&](const std::map<Cell, int>& a) {
        int n1 = 0, n2 = 0;
        for (auto& [cell, col] : a) (col == 1 ? n1 : n2)++;
        gf.add(n1, n2);
    };
    std::set<Cell> excluded;
    detail::grow_animals(lat, A, excluded, a_max, 2, allowed, leaf);
    return gf;
}

} // namespace dagas
