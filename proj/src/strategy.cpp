#include "nsg/strategy.hpp"

#include <stdexcept>

namespace nsg {

void Strategy::validate() const {
    if (p.size() != std::size_t{N} * N * kNumY * kNumZ)
        throw std::invalid_argument("strategy table has wrong size");
    for (std::uint32_t s = 0; s < N; ++s)
        for (std::uint32_t t = 0; t < N; ++t) {
            Rat sum = 0;
            for (int y = 0; y < kNumY; ++y)
                for (int z = 0; z < kNumZ; ++z) {
                    const Rat& q = at(s, t, y, z);
                    if (q < 0) throw std::invalid_argument("negative strategy entry");
                    sum += q;
                }
            if (sum != 1) throw std::invalid_argument("strategy cell does not sum to 1");
        }
}

NoSignalingReport check_no_signaling(const Strategy& p) {
    p.validate();
    NoSignalingReport rep;
    // Alice -> Bob: sum_y p(y,z|s,t) independent of s.
    for (std::uint32_t t = 0; t < p.N; ++t)
        for (int z = 0; z < Strategy::kNumZ; ++z) {
            Rat ref = 0;
            for (int y = 0; y < Strategy::kNumY; ++y) ref += p.at(0, t, y, z);
            for (std::uint32_t s = 1; s < p.N; ++s) {
                Rat cur = 0;
                for (int y = 0; y < Strategy::kNumY; ++y) cur += p.at(s, t, y, z);
                if (cur != ref)
                    rep.violations.push_back("A->B: z=" + std::to_string(z) +
                                             " t=" + std::to_string(t) +
                                             " differs between s=0 and s=" + std::to_string(s));
            }
        }
    // Bob -> Alice: sum_z p(y,z|s,t) independent of t.
    for (std::uint32_t s = 0; s < p.N; ++s)
        for (int y = 0; y < Strategy::kNumY; ++y) {
            Rat ref = p.at(s, 0, y, 0) + p.at(s, 0, y, 1);
            for (std::uint32_t t = 1; t < p.N; ++t) {
                Rat cur = p.at(s, t, y, 0) + p.at(s, t, y, 1);
                if (cur != ref)
                    rep.violations.push_back("B->A: y=" + std::to_string(y) +
                                             " s=" + std::to_string(s) +
                                             " differs between t=0 and t=" + std::to_string(t));
            }
        }
    rep.ok = rep.violations.empty();
    return rep;
}

MarginalPair marginals(const Strategy& p) {
    const auto rep = check_no_signaling(p);
    if (!rep.ok) throw std::invalid_argument("marginals of a signaling strategy are ill-defined");
    MarginalPair m;
    m.N = p.N;
    m.pA.assign(std::size_t{p.N} * Strategy::kNumY, Rat(0));
    m.pB.assign(std::size_t{p.N} * Strategy::kNumZ, Rat(0));
    for (std::uint32_t s = 0; s < p.N; ++s)
        for (int y = 0; y < Strategy::kNumY; ++y)
            m.a(s, y) = p.at(s, 0, y, 0) + p.at(s, 0, y, 1);
    for (std::uint32_t t = 0; t < p.N; ++t)
        for (int z = 0; z < Strategy::kNumZ; ++z) {
            Rat sum = 0;
            for (int y = 0; y < Strategy::kNumY; ++y) sum += p.at(0, t, y, z);
            m.b(t, z) = sum;
        }
    return m;
}

Strategy deterministic_strategy(std::uint32_t n, const std::vector<int>& ya,
                                const std::vector<int>& zb) {
    if (ya.size() != n || zb.size() != n)
        throw std::invalid_argument("deterministic_strategy: answer vectors must have length N");
    Strategy p(n);
    for (std::uint32_t s = 0; s < n; ++s)
        for (std::uint32_t t = 0; t < n; ++t) p.at(s, t, ya[s], zb[t]) = 1;
    return p;
}

}  // namespace nsg
