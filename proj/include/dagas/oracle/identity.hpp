#pragma once

#include <set>
#include <string>
#include <vector>

#include "dagas/gas/transfer.hpp"
#include "dagas/oracle/oversource.hpp"

namespace dagas {

// bond: the bond-count identity as stated; bond-gas: the series the bond gas
// actually satisfies, in which a cell d with parents x in A carries the weight
// 1 - prod_x (1 - q^{m(x,d)}) (m = number of parallel edges x -> d).
enum class IdentityKind { fo_x, fo_y, bond, bond_gas, bicolour };

inline IdentityKind parse_identity(const std::string& s) {
    if (s == "fo-X" || s == "fo-x") return IdentityKind::fo_x;
    if (s == "fo-Y" || s == "fo-y") return IdentityKind::fo_y;
    if (s == "bond") return IdentityKind::bond;
    if (s == "bond-gas") return IdentityKind::bond_gas;
    if (s == "bicolour" || s == "bicolor") return IdentityKind::bicolour;
    throw DomainError("unknown identity: " + s);
}

inline std::string identity_name(IdentityKind k) {
    switch (k) {
        case IdentityKind::fo_x: return "fo-X";
        case IdentityKind::fo_y: return "fo-Y";
        case IdentityKind::bond: return "bond";
        case IdentityKind::bond_gas: return "bond-gas";
        case IdentityKind::bicolour: return "bicolour";
    }
    return "?";
}

struct IdentityReport {
    IdentityKind kind = IdentityKind::fo_x;
    int n = 1;
    int a_max = 0;
    Rational exact, partial, gap, tail_bound, ratio;
    bool pass = false;

    json to_json() const {
        return json{{"identity", identity_name(kind)},
                    {"n", n},
                    {"a_max", a_max},
                    {"exact", to_string(exact)},
                    {"partial_sum", to_string(partial)},
                    {"gap", std::abs(gap.get_d())},
                    {"tail_bound", tail_bound.get_d()},
                    {"ratio", ratio.get_d()},
                    {"pass", pass}};
    }
};

// Heuristic geometric tail bound from per-area weighted counts c_k:
// r = max_{k >= a_max/2} c_{k+1}/c_k, bound = c_A |w|^A r|w| / (1 - r|w|); needs r|w| < 1/2.
inline std::pair<Rational, Rational> tail_bound(const std::vector<Rational>& c, const Rational& abs_w) {
    const int A = static_cast<int>(c.size()) - 1;
    Rational r = 0;
    for (int k = (A + 1) / 2; k < A; ++k)
        if (c[static_cast<std::size_t>(k)] != 0) {
            Rational q = c[static_cast<std::size_t>(k) + 1] / c[static_cast<std::size_t>(k)];
            if (q > r) r = q;
        }
    Rational rw = r * abs_w;
    if (rw * 2 >= 1) throw DomainError("parameters outside the empirical convergence region (r|w| >= 1/2)");
    Rational wa = 1;
    for (int k = 0; k < A; ++k) wa *= abs_w;
    Rational bound = c[static_cast<std::size_t>(A)] * wa * rw / (1 - rw);
    return {bound, r};
}

// Compares an enumerated partial sum with the exact gas probability on the
// cylinder Sq(n). Sources are columns of one row; s2 is used by bicolour only.
inline IdentityReport identity_check(IdentityKind kind, int n, const std::vector<Rational>& params,
                                     const std::vector<long>& s1, int a_max, const std::vector<long>& s2 = {}) {
    auto lat = AnimalLattice::cylinder(n);
    auto cells = [](const std::vector<long>& cols) {
        std::vector<Cell> v;
        for (auto c : cols) v.push_back({0, c});
        return v;
    };
    auto absq = [](Rational v) { return v < 0 ? Rational(-v) : v; };
    // plain animal counts, inflated only when the second variable exceeds 1 in modulus
    auto inflate = [&](const Rational& v) { return std::max(Rational(1), absq(v)); };
    IdentityReport rep;
    rep.kind = kind;
    rep.n = n;
    rep.a_max = a_max;
    std::vector<std::pair<int, int>> pattern;
    for (auto c : s1) pattern.push_back({static_cast<int>(lat.wrap(c)), 1});
    const bool odd = s1.size() % 2 == 1;
    std::vector<Rational> counts;
    Rational abs_w;
    switch (kind) {
        case IdentityKind::fo_x: {
            const Rational& p = params.at(0);
            auto gf = enumerate_da({lat, cells(s1), true}, a_max);
            rep.partial = gf.evaluate<Rational>(Rational(-p), Rational(1));
            if (odd) rep.partial = -rep.partial;
            rep.exact = marginal(invariant_measure(local_transition<Rational>(GasKind::X, {p}), n), pattern);
            counts = gf.weighted_area_counts(Rational(1));
            abs_w = absq(p);
            break;
        }
        case IdentityKind::fo_y: {
            const Rational &p = params.at(0), &q = params.at(1);
            Rational y = (1 - p) * q;
            auto gf = oversource_by_subsets({lat, cells(s1), true}, a_max);
            rep.partial = gf.evaluate<Rational>(p, y);
            rep.exact = marginal(invariant_measure(local_transition<Rational>(GasKind::Y, {p, q}), n), pattern);
            counts = gf.weighted_area_counts(inflate(y));
            abs_w = absq(p);
            break;
        }
        case IdentityKind::bond: {
            const Rational &p = params.at(0), &q = params.at(1);
            auto gf = enumerate_da({lat, cells(s1), true}, a_max, AnimalWeight::bonds);
            rep.partial = gf.evaluate<Rational>(Rational(-p), q);
            Rational prob = marginal(invariant_measure(local_transition<Rational>(GasKind::B, {p, q}), n), pattern);
            rep.exact = odd ? Rational(-prob) : prob;
            counts = gf.weighted_area_counts(inflate(q));
            abs_w = absq(p);
            break;
        }
        case IdentityKind::bond_gas: {
            const Rational &p = params.at(0), &q = params.at(1);
            if (q < 0 || q > 1) throw DomainError("bond-gas identity needs q in [0, 1]");
            SourceSpec src{lat, cells(s1), true};
            validate_sources(lat, src.sources, true);
            std::set<Cell> sources(src.sources.begin(), src.sources.end());
            counts.assign(static_cast<std::size_t>(a_max) + 1, Rational(0));
            rep.partial = 0;
            for_each_animal(src, a_max, [&](const std::map<Cell, int>& a) {
                Rational w = 1;
                for (auto& [d, colour] : a) {
                    if (sources.count(d)) continue;
                    std::map<Cell, int> mult;
                    for (auto& par : lat.parents(d))
                        if (a.count(par)) ++mult[par];
                    Rational none = 1;
                    for (auto& [x, m] : mult) {
                        Rational qm = 1;
                        for (int k = 0; k < m; ++k) qm *= q;
                        none *= 1 - qm;
                    }
                    w *= 1 - none;
                }
                for (std::size_t k = 0; k < a.size(); ++k) w *= -p;
                rep.partial += w;
                counts[a.size()] += 1;  // |weight| <= 1 for q in [0, 1]
            });
            Rational prob = marginal(invariant_measure(local_transition<Rational>(GasKind::B, {p, q}), n), pattern);
            rep.exact = odd ? Rational(-prob) : prob;
            abs_w = absq(p);
            break;
        }
        case IdentityKind::bicolour: {
            const Rational &p1 = params.at(0), &p2 = params.at(1);
            auto gf = enumerate_bicoloured(lat, cells(s1), cells(s2), a_max);
            rep.partial = gf.evaluate<Rational>(Rational(-p1), Rational(-p2));
            for (auto c : s2) pattern.push_back({static_cast<int>(lat.wrap(c)), 2});
            Rational prob = marginal(invariant_measure(local_transition<Rational>(GasKind::bicolour, {p1, p2}), n), pattern);
            rep.exact = (s1.size() + s2.size()) % 2 ? Rational(-prob) : prob;
            counts = gf.weighted_area_counts(Rational(1));
            abs_w = std::max(absq(p1), absq(p2));
            break;
        }
    }
    auto [bound, r] = tail_bound(counts, abs_w);
    rep.tail_bound = bound;
    rep.ratio = r;
    rep.gap = rep.exact - rep.partial;
    rep.pass = absq(rep.gap) <= bound;
    return rep;
}

} // namespace dagas
