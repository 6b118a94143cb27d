#pragma once

#include <map>
#include <vector>

#include "dagas/oracle/enumerate.hpp"

namespace dagas {

// Over-source GF by summing exact-source enumerations over all subsets S' of S;
// the cells of S \ S' count as perimeter.
inline GFPoly oversource_by_subsets(SourceSpec src, int a_max) {
    validate_sources(src.lattice, src.sources, src.require_free);
    GFPoly gf;
    gf.a_max = a_max;
    const std::size_t k = src.sources.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        SourceSpec sub{src.lattice, {}, false};
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) sub.sources.push_back(src.sources[i]);
        const int missing = static_cast<int>(k - sub.sources.size());
        if (sub.sources.empty()) {
            gf.add(0, missing);
            continue;
        }
        for (auto& [e, c] : enumerate_da(sub, a_max).coeffs) gf.add(e.first, e.second + missing, c);
    }
    return gf;
}

namespace detail {

// Columns of a single row, normalized: shifted to start at 0 on the plane, the
// least rotation on a cylinder.
inline std::vector<long> normalize_row(const AnimalLattice& lat, std::vector<long> cols) {
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    if (cols.empty()) return cols;
    if (lat.is_plane()) {
        long m = cols.front();
        for (auto& c : cols) c -= m;
        return cols;
    }
    std::vector<long> best;
    for (long r = 0; r < lat.n; ++r) {
        std::vector<long> rot;
        for (auto c : cols) rot.push_back(lat.wrap(c + r));
        std::sort(rot.begin(), rot.end());
        if (best.empty() || rot < best) best = rot;
    }
    return best;
}

struct OversourceRecursion {
    const AnimalLattice& lat;
    std::map<std::pair<std::vector<long>, int>, GFPoly> memo;

    // G(C, b) = sum_{D subset C, |D| <= b} y^{|C \ D|} x^{|D|} G(Ch(D), b - |D|), G(empty) = 1
    const GFPoly& operator()(const std::vector<long>& C, int budget, int depth) {
        if (depth > 4 * (budget + 2) + 64) throw DomainError("over-source recursion exceeded its depth guard");
        auto key = std::make_pair(C, budget);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        GFPoly g;
        g.a_max = budget;
        const std::size_t k = C.size();
        if (k == 0) {
            g.add(0, 0);
        } else {
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
                int d = __builtin_popcountll(mask);
                if (d > budget) continue;
                int missing = static_cast<int>(k) - d;
                if (d == 0) {
                    g.add(0, missing);
                    continue;
                }
                std::vector<long> ch;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask >> i & 1)
                        for (auto& c : lat.children({0, C[i]})) ch.push_back(c.second);
                const GFPoly& sub = (*this)(normalize_row(lat, ch), budget - d, depth + 1);
                for (auto& [e, c] : sub.coeffs) g.add(e.first + d, e.second + missing, c);
            }
        }
        return memo.emplace(key, std::move(g)).first->second;
    }
};

} // namespace detail

// Over-source GF via the subset recursion; sources must lie in one row.
inline GFPoly oversource_by_recursion(SourceSpec src, int a_max) {
    validate_sources(src.lattice, src.sources, src.require_free);
    std::vector<long> cols;
    for (auto& s : src.sources) {
        if (s.first != src.sources.front().first) throw DomainError("recursion needs all sources in one row");
        cols.push_back(s.second);
    }
    detail::OversourceRecursion rec{src.lattice, {}};
    GFPoly g = rec(detail::normalize_row(src.lattice, cols), a_max, 0);
    g.a_max = a_max;
    return g;
}

struct OversourceResult {
    GFPoly gf;
    bool methods_agree = true;
};

// Both computations; the recursion is used only when the sources share a row.
inline OversourceResult oversource_gf(const SourceSpec& src, int a_max) {
    OversourceResult r{oversource_by_subsets(src, a_max), true};
    bool one_row = true;
    for (auto& s : src.sources) one_row = one_row && s.first == src.sources.front().first;
    if (one_row) r.methods_agree = oversource_by_recursion(src, a_max) == r.gf;
    return r;
}

} // namespace dagas
