#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dagas/algebra/errors.hpp"

namespace dagas {

enum class LatticeKind { square, triangular_zigzag };

// A site of a cylinder. For the square lattice slot is always 0; for the
// triangular zigzag, slot 0 is an up site u_i and slot 1 a down site d_i.
struct Site {
    long row = 0;
    int slot = 0;
    long col = 0;
    friend bool operator==(const Site&, const Site&) = default;
    friend auto operator<=>(const Site&, const Site&) = default;
};

struct Cylinder {
    LatticeKind kind = LatticeKind::square;
    int n = 1;  // width
    int s = 2;  // states per site

    Cylinder(LatticeKind k, int width, int states) : kind(k), n(width), s(states) {
        if (n < 1) throw DomainError("cylinder width must be >= 1");
        if (s != 2 && s != 3) throw DomainError("state count must be 2 or 3");
    }
    static Cylinder square(int width, int states = 2) { return {LatticeKind::square, width, states}; }
    static Cylinder zigzag(int width, int states = 2) { return {LatticeKind::triangular_zigzag, width, states}; }

    long wrap(long i) const { return ((i % n) + n) % n; }

    // Sites whose values feed the local transition at the given site; they
    // always lie in the next row. Width 1 square: both children coincide.
    std::vector<Site> children(const Site& x) const {
        if (x.col < 0 || x.col >= n) throw DomainError("site index out of range");
        if (kind == LatticeKind::square) {
            if (x.slot != 0) throw DomainError("square sites have slot 0");
            return {Site{x.row + 1, 0, x.col}, Site{x.row + 1, 0, wrap(x.col + 1)}};
        }
        if (x.slot == 1)
            return {Site{x.row + 1, 1, x.col}, Site{x.row + 1, 0, wrap(x.col + 1)},
                    Site{x.row + 1, 1, wrap(x.col + 1)}};
        if (x.slot == 0) return children(Site{x.row + 1, 1, x.col});
        throw DomainError("zigzag slot must be 0 or 1");
    }
    std::vector<Site> children(long row, long i) const { return children(Site{row, 0, i}); }

    // Number of configurations of one transfer state (a row, or a zigzag).
    std::uint64_t state_count() const {
        std::uint64_t c = 1;
        int digits = kind == LatticeKind::square ? n : 2 * n;
        for (int k = 0; k < digits; ++k) c *= static_cast<std::uint64_t>(s);
        return c;
    }
};

// Little-endian base-s codes: digit i is site i.
inline std::uint64_t encode(const std::vector<int>& digits, int s) {
    std::uint64_t code = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (*it < 0 || *it >= s) throw DomainError("digit out of range");
        code = code * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(*it);
    }
    return code;
}

inline std::vector<int> decode(std::uint64_t code, int n, int s) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        d[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint64_t>(s));
        code /= static_cast<std::uint64_t>(s);
    }
    return d;
}

inline int digit(std::uint64_t code, int i, int s) {
    for (int k = 0; k < i; ++k) code /= static_cast<std::uint64_t>(s);
    return static_cast<int>(code % static_cast<std::uint64_t>(s));
}

// (a_0, ..., a_{n-1}) rotated by k: (a_k, ..., a_{n-1}, a_0, ..., a_{k-1}).
inline std::uint64_t rotate(std::uint64_t code, int n, int s, int k) {
    auto d = decode(code, n, s);
    std::vector<int> r(d.size());
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(((i + k) % n + n) % n)];
    return encode(r, s);
}

// Zigzag states interleave up and down digits: u_i at 2i, d_i at 2i+1.
struct Zigzag {
    std::vector<int> up, down;
};

inline std::uint64_t encode_zigzag(const Zigzag& z, int s) {
    std::vector<int> d;
    for (std::size_t i = 0; i < z.up.size(); ++i) {
        d.push_back(z.up[i]);
        d.push_back(z.down[i]);
    }
    return encode(d, s);
}

inline Zigzag decode_zigzag(std::uint64_t code, int n, int s) {
    auto d = decode(code, 2 * n, s);
    Zigzag z;
    for (int i = 0; i < n; ++i) {
        z.up.push_back(d[static_cast<std::size_t>(2 * i)]);
        z.down.push_back(d[static_cast<std::size_t>(2 * i + 1)]);
    }
    return z;
}

inline std::string config_string(const std::vector<int>& d) {
    std::string out;
    for (int v : d) out.push_back(static_cast<char>('0' + v));
    return out;
}

} // namespace dagas
