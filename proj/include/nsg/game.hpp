#pragma once

#include <cstdint>
#include <vector>

#include "nsg/circuits.hpp"
#include "nsg/rational.hpp"
#include "nsg/strategy.hpp"

namespace nsg {

// Two-player one-round game with uniform questions over {0..N-1}^2,
// Alice answers in {0,1}^2, Bob answers in {0,1}. The predicate table is
// rational-valued; games built from circuits are deterministic (0/1).
struct Game {
    std::uint32_t N = 0;
    std::vector<Rat> R;  // [s][t][y][z]

    explicit Game(std::uint32_t n = 0) : N(n), R(std::size_t{n} * n * 8) {}

    std::size_t index(std::uint32_t s, std::uint32_t t, int y, int z) const {
        return ((std::size_t{s} * N + t) * 4 + y) * 2 + z;
    }
    Rat& r(std::uint32_t s, std::uint32_t t, int y, int z) { return R[index(s, t, y, z)]; }
    const Rat& r(std::uint32_t s, std::uint32_t t, int y, int z) const {
        return R[index(s, t, y, z)];
    }
};

struct Outcome {
    std::uint32_t s = 0, t = 0;
    int y = 0, z = 0;
    bool accept = false;
};

// The game G_{V,x}: Alice is asked gate s and answers the claimed values of
// its inputs (unused bits ignored), Bob is asked gate t and answers its
// claimed value. R is the conjunction of
//   (a) s == t: Bob's bit equals the gate value computed from Alice's bits,
//   (b) g_t an input of g_s: Alice's corresponding bit agrees with Bob's,
//   (c) t == k: Bob answers 1.
Game build_game(const Instance& inst);

// True gate values as a deterministic product strategy; accepted with
// probability exactly 1 on yes-instances.
Strategy honest_strategy(const Instance& inst);

// (1/N^2) * sum_{s,t,y,z} R(y,z|s,t) p(y,z|s,t), exact.
Rat acceptance(const Game& g, const Strategy& p);

}  // namespace nsg
