#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nsg/circuits.hpp"
#include "nsg/game.hpp"
#include "nsg/lp.hpp"
#include "nsg/rational.hpp"
#include "nsg/strategy.hpp"

namespace nsg {

struct LpGameResult {
    Rat value;
    Strategy argmax;
};

// Exact optimum of acceptance over the no-signaling polytope, by two-phase
// rational simplex. Variables are the joint table plus explicit marginal
// variables. Refuses games with N > 32.
LpGameResult ns_value_lp(const Game& g, std::vector<PivotStep>* pivot_log = nullptr);

// Independent oracle: maximum of acceptance over the vertices of the
// no-signaling polytope (double description). Only sensible for N = 2.
Rat ns_value_by_vertex_enumeration(const Game& g);

// Cheating strategy tailored to tx_instance(h); question pairs with no
// dedicated joint case use the independent coupling of the marginals.
// Question count matches the padded instance; Bob answers 0 on padding.
Strategy tx_strategy(int h);

// Smallest delta such that marginal witnesses satisfying both
// delta-no-signaling inequalities (uniform question distribution) exist.
Rat min_delta(const Strategy& p);

// Closest no-signaling strategy in average total-variation distance
// (1/N^2) sum_{s,t} (1/2) sum_{y,z} |p - phat|, and that distance.
std::pair<Strategy, Rat> nearest_ns(const Strategy& p);

struct SoundnessDiagnostics {
    Rat eps;                   // overall rejection probability
    std::vector<Rat> eps_st;   // [s][t] rejection conditioned on questions
    std::vector<Rat> delta_i;  // Pr[Bob answers 1 - v_i on question i]
};

// Requires p no-signaling so that Bob's marginal is well-defined.
SoundnessDiagnostics soundness_diagnostics(const Game& g, const Strategy& p,
                                           const CircuitValues& v);

// Deterministic random strategy (valid probability table, generally
// signaling); test and diagnostics corpus generation.
Strategy random_strategy(std::uint64_t seed, std::uint32_t n, int denominator = 64);

// Deterministic random no-signaling strategy: a random mixture of
// deterministic product strategies.
Strategy random_ns_strategy(std::uint64_t seed, std::uint32_t n, int num_terms = 6);

}  // namespace nsg
