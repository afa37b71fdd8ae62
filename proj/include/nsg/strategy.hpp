#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsg/rational.hpp"

namespace nsg {

// Exact joint answer table p(y,z|s,t) of a two-prover strategy.
// Alice's answer set is fixed to {0,1}^2 (y = y1*2 + y2), Bob's to {0,1}.
struct Strategy {
    static constexpr int kNumY = 4;
    static constexpr int kNumZ = 2;

    std::uint32_t N = 0;       // question count, S = T = {0..N-1}
    std::vector<Rat> p;        // [s][t][y][z], size N*N*8

    explicit Strategy(std::uint32_t n = 0) : N(n), p(std::size_t{n} * n * kNumY * kNumZ) {}

    std::size_t index(std::uint32_t s, std::uint32_t t, int y, int z) const {
        return ((std::size_t{s} * N + t) * kNumY + y) * kNumZ + z;
    }
    Rat& at(std::uint32_t s, std::uint32_t t, int y, int z) { return p[index(s, t, y, z)]; }
    const Rat& at(std::uint32_t s, std::uint32_t t, int y, int z) const {
        return p[index(s, t, y, z)];
    }

    // Throws std::invalid_argument unless entries are nonnegative and every
    // (s,t) cell sums to one.
    void validate() const;
};

struct MarginalPair {
    std::uint32_t N = 0;
    std::vector<Rat> pA;  // [s][y], size N*4
    std::vector<Rat> pB;  // [t][z], size N*2

    Rat& a(std::uint32_t s, int y) { return pA[std::size_t{s} * Strategy::kNumY + y]; }
    const Rat& a(std::uint32_t s, int y) const { return pA[std::size_t{s} * Strategy::kNumY + y]; }
    Rat& b(std::uint32_t t, int z) { return pB[std::size_t{t} * Strategy::kNumZ + z]; }
    const Rat& b(std::uint32_t t, int z) const { return pB[std::size_t{t} * Strategy::kNumZ + z]; }
};

struct NoSignalingReport {
    bool ok = false;
    std::vector<std::string> violations;
};

// Exact check of both no-signaling equality families.
NoSignalingReport check_no_signaling(const Strategy& p);

// Marginals of a no-signaling strategy (throws if p is signaling).
MarginalPair marginals(const Strategy& p);

// Deterministic product strategy with Alice answering ya(s) and Bob zb(t).
Strategy deterministic_strategy(std::uint32_t n, const std::vector<int>& ya,
                                const std::vector<int>& zb);

}  // namespace nsg
