#include "nsg/game.hpp"

#include <stdexcept>

namespace nsg {

namespace {

// Value of a gate given its kind and the claimed input bits.
int gate_output(GateKind kind, int b0, int b1) {
    switch (kind) {
        case GateKind::Zero: return 0;
        case GateKind::One: return 1;
        case GateKind::Not: return !b0;
        case GateKind::And: return b0 & b1;
        case GateKind::Or: return b0 | b1;
    }
    throw std::invalid_argument("unknown gate kind");
}

}  // namespace

Game build_game(const Instance& inst) {
    const std::uint32_t n = inst.gate_count();
    const std::uint32_t k = inst.output_index();
    Game g(n);
    std::vector<GateDescriptor> desc(n);
    for (std::uint32_t i = 0; i < n; ++i) desc[i] = inst.gate(i);

    for (std::uint32_t s = 0; s < n; ++s) {
        const GateDescriptor& gs = desc[s];
        const int na = gs.num_inputs();
        for (std::uint32_t t = 0; t < n; ++t)
            for (int y = 0; y < 4; ++y)
                for (int z = 0; z < 2; ++z) {
                    const int y0 = (y >> 1) & 1;  // claimed value of the first input of g_s
                    const int y1 = y & 1;         // claimed value of the second input
                    bool accept = true;
                    if (s == t && gate_output(gs.kind, y0, y1) != z) accept = false;
                    for (int j = 0; j < na; ++j)
                        if (gs.inputs[j] == t && ((j == 0 ? y0 : y1) != z)) accept = false;
                    if (t == k && z != 1) accept = false;
                    g.r(s, t, y, z) = accept ? 1 : 0;
                }
    }
    return g;
}

Strategy honest_strategy(const Instance& inst) {
    const std::uint32_t n = inst.gate_count();
    const CircuitValues vals = evaluate(inst);
    std::vector<int> ya(n, 0), zb(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        const GateDescriptor d = inst.gate(i);
        int y = 0;
        if (d.num_inputs() >= 1) y |= vals.v[d.inputs[0]] << 1;
        if (d.num_inputs() >= 2) y |= vals.v[d.inputs[1]];
        ya[i] = y;
        zb[i] = vals.v[i];
    }
    return deterministic_strategy(n, ya, zb);
}

Rat acceptance(const Game& g, const Strategy& p) {
    if (g.N != p.N) throw std::invalid_argument("acceptance: game/strategy dimension mismatch");
    Rat sum = 0;
    for (std::size_t i = 0; i < g.R.size(); ++i)
        if (g.R[i] != 0 && p.p[i] != 0) sum += g.R[i] * p.p[i];
    return sum / (Rat(g.N) * Rat(g.N));
}

}  // namespace nsg
