#pragma once

#include <string>
#include <vector>

#include "dagas/algebra/scalar.hpp"
#include "dagas/lattice.hpp"

namespace dagas {

enum class GasKind { X, Y, B, bicolour };

inline std::string gas_name(GasKind g) {
    switch (g) {
        case GasKind::X: return "x";
        case GasKind::Y: return "y";
        case GasKind::B: return "b";
        case GasKind::bicolour: return "bicolour";
    }
    return "?";
}

inline GasKind parse_gas(const std::string& s) {
    if (s == "x" || s == "X") return GasKind::X;
    if (s == "y" || s == "Y") return GasKind::Y;
    if (s == "b" || s == "B" || s == "bond") return GasKind::B;
    if (s == "bicolour" || s == "bicolor") return GasKind::bicolour;
    throw DomainError("unknown gas: " + s);
}

// Parameter vectors: X {p}; Y {p, q}; B {p, q}; bicolour {p1, p2}.
inline std::size_t gas_param_count(GasKind g) { return g == GasKind::X ? 1 : 2; }
inline int gas_states(GasKind g) { return g == GasKind::bicolour ? 3 : 2; }

// T[(parent values)][child value]. "Parents" are the sites the value is drawn
// from (the children in the lattice orientation), r of them.
template <class S>
struct LocalTransition {
    GasKind gas = GasKind::X;
    int arity = 2;
    int states = 2;
    std::vector<S> params;
    std::vector<S> table;  // index = parent_code * states + child

    std::size_t parent_code(const std::vector<int>& parents) const {
        std::size_t code = 0;
        for (auto it = parents.rbegin(); it != parents.rend(); ++it)
            code = code * static_cast<std::size_t>(states) + static_cast<std::size_t>(*it);
        return code;
    }
    const S& operator()(const std::vector<int>& parents, int child) const {
        return table[parent_code(parents) * static_cast<std::size_t>(states) + static_cast<std::size_t>(child)];
    }
    const S& operator()(int a, int b, int c) const { return (*this)({a, b}, c); }
    const S& operator()(int a, int b, int c, int d) const { return (*this)({a, b, c}, d); }
    std::size_t parent_tuples() const { return table.size() / static_cast<std::size_t>(states); }
};

template <class S>
LocalTransition<S> local_transition(GasKind gas, const std::vector<S>& params, int arity = 2) {
    if (params.size() != gas_param_count(gas))
        throw DomainError("invalid parameter count for gas " + gas_name(gas));
    if (arity != 2 && arity != 3) throw DomainError("arity must be 2 or 3");
    LocalTransition<S> t;
    t.gas = gas;
    t.arity = arity;
    t.states = gas_states(gas);
    t.params = params;
    std::size_t tuples = 1;
    for (int k = 0; k < arity; ++k) tuples *= static_cast<std::size_t>(t.states);
    t.table.assign(tuples * static_cast<std::size_t>(t.states), S{});
    const S one(1);
    for (std::size_t code = 0; code < tuples; ++code) {
        auto par = decode(code, arity, t.states);
        S* row = &t.table[code * static_cast<std::size_t>(t.states)];
        switch (gas) {
            case GasKind::X: {
                bool all_zero = true;
                for (int v : par) all_zero = all_zero && v == 0;
                row[1] = all_zero ? params[0] : S{};
                break;
            }
            case GasKind::Y: {
                const S& p = params[0];
                const S& q = params[1];
                bool all_one = true;
                for (int v : par) all_one = all_one && v == 1;
                S base = (one - p) * q;
                row[1] = all_one ? S(p + base) : base;
                break;
            }
            case GasKind::B: {
                S w = params[0];
                S keep = one - params[1];
                for (int v : par)
                    if (v == 1) w *= keep;
                row[1] = w;
                break;
            }
            case GasKind::bicolour: {
                for (int colour = 1; colour <= 2; ++colour) {
                    bool free = true;
                    for (int v : par) free = free && v != colour;
                    row[colour] = free ? params[static_cast<std::size_t>(colour - 1)] : S{};
                }
                break;
            }
        }
        S rest = one;
        for (int c = 1; c < t.states; ++c) rest -= row[c];
        row[0] = rest;
    }
    return t;
}

} // namespace dagas
