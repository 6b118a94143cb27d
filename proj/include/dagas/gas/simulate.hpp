#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dagas/gas/local_transition.hpp"

namespace dagas {

struct SimulationResult {
    std::vector<std::vector<int>> trajectory;  // leading rows after burn-in
    std::vector<double> frequency;              // per value, over all sites of sampled rows
    std::vector<double> standard_error;         // binomial estimate, n*rows trials
    std::vector<double> batch_standard_error;   // batch means; accounts for row correlation
    long samples = 0;
};

// Row-by-row Monte Carlo of the gas starting from `start` (all zeros by default).
// Deterministic given the seed.
inline SimulationResult simulate_gas(const LocalTransition<double>& t, int n, long rows, std::uint64_t seed,
                                     long burn_in = 1000, std::vector<int> start = {}, std::size_t keep_rows = 16,
                                     int batches = 50) {
    if (t.arity != 2) throw DomainError("simulation supports arity-2 gases");
    if (n < 1 || rows < batches) throw DomainError("simulation needs n >= 1 and rows >= batches");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> cur = start.empty() ? std::vector<int>(static_cast<std::size_t>(n), 0) : start;
    if (cur.size() != static_cast<std::size_t>(n)) throw DimensionError("start row has wrong width");
    const auto s = static_cast<std::size_t>(t.states);
    std::vector<long> counts(s, 0);
    std::vector<std::vector<long>> batch_counts(static_cast<std::size_t>(batches), std::vector<long>(s, 0));
    const long per_batch = rows / batches;
    SimulationResult res;
    std::vector<int> next(static_cast<std::size_t>(n));
    std::vector<int> par(2);
    std::vector<double> dist(s);
    const bool width1_bond = t.gas == GasKind::B && n == 1;
    for (long r = 0; r < rows + burn_in; ++r) {
        for (int i = 0; i < n; ++i) {
            if (width1_bond) {
                double p = t.params[0], q = t.params[1];
                dist[1] = cur[0] == 1 ? p * (1 - q * q) : p;
                dist[0] = 1 - dist[1];
            } else {
                par[0] = cur[static_cast<std::size_t>(i)];
                par[1] = cur[static_cast<std::size_t>((i + 1) % n)];
                for (std::size_t c = 0; c < s; ++c) dist[c] = t(par, static_cast<int>(c));
            }
            double x = u(rng);
            std::size_t v = 0;
            double acc = dist[0];
            while (x >= acc && v + 1 < s) acc += dist[++v];
            next[static_cast<std::size_t>(i)] = static_cast<int>(v);
        }
        cur.swap(next);
        if (r < burn_in) continue;
        const long k = r - burn_in;
        if (res.trajectory.size() < keep_rows) res.trajectory.push_back(cur);
        const auto b = static_cast<std::size_t>(std::min<long>(k / per_batch, batches - 1));
        for (int v : cur) {
            ++counts[static_cast<std::size_t>(v)];
            ++batch_counts[b][static_cast<std::size_t>(v)];
        }
        res.samples += n;
    }
    for (std::size_t v = 0; v < s; ++v) {
        double f = static_cast<double>(counts[v]) / static_cast<double>(res.samples);
        res.frequency.push_back(f);
        res.standard_error.push_back(std::sqrt(f * (1 - f) / static_cast<double>(res.samples)));
        double m2 = 0;
        for (int b = 0; b < batches; ++b) {
            long size = b + 1 < batches ? per_batch : rows - per_batch * (batches - 1);
            double fb = static_cast<double>(batch_counts[static_cast<std::size_t>(b)][v]) / static_cast<double>(size * n);
            m2 += (fb - f) * (fb - f);
        }
        res.batch_standard_error.push_back(std::sqrt(m2 / (batches - 1) / batches));
    }
    return res;
}

} // namespace dagas
