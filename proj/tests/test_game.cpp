#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nsg/game.hpp"
#include "nsg/nosig.hpp"

using namespace nsg;

namespace {

// Recompute a single predicate entry straight from the three tests.
Rat predicate_from_tests(const Instance& inst, std::uint32_t s, std::uint32_t t, int y, int z) {
    const GateDescriptor gs = inst.gate(s);
    const int y0 = (y >> 1) & 1, y1 = y & 1;
    auto out = [&](GateKind k) {
        switch (k) {
            case GateKind::Zero: return 0;
            case GateKind::One: return 1;
            case GateKind::Not: return 1 - y0;
            case GateKind::And: return y0 & y1;
            case GateKind::Or: return y0 | y1;
        }
        return 0;
    };
    if (s == t && out(gs.kind) != z) return 0;
    for (int j = 0; j < gs.num_inputs(); ++j)
        if (gs.inputs[j] == t && (j == 0 ? y0 : y1) != z) return 0;
    if (t == inst.output_index() && z != 1) return 0;
    return 1;
}

}  // namespace

TEST_CASE("predicate spot checks on tx_instance(1)") {
    const Instance inst = tx_instance(1);
    const Game g = build_game(inst);
    // (a): OR(0,0) = 0 matches Bob's z = 0 at s = t = 2.
    CHECK(g.r(2, 2, 0, 0) == 1);
    CHECK(g.r(2, 2, 0, 1) == 0);
    // (a) and (c) both apply at s = t = k = 3; only y = (1,1), z = 1 survives.
    CHECK(g.r(3, 3, 0, 0) == 0);
    CHECK(g.r(3, 3, 3, 1) == 1);
    // (b): Alice claims g_0 = 1 while Bob claims 0.
    CHECK(g.r(2, 0, 2, 0) == 0);
    CHECK(g.r(2, 0, 3, 0) == 0);
    CHECK(g.r(2, 0, 2, 1) == 1);
    // (c): t = k = 3 forces z = 1 even when (a), (b) do not apply.
    CHECK(g.r(0, 3, 0, 0) == 0);
    CHECK(g.r(1, 3, 0, 0) == 0);
}

TEST_CASE("R depends only on the tests: every entry reproducible") {
    std::mt19937_64 seeds(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Instance inst = random_instance(seeds(), 2);
        const Game g = build_game(inst);
        for (std::uint32_t s = 0; s < g.N; ++s)
            for (std::uint32_t t = 0; t < g.N; ++t)
                for (int y = 0; y < 4; ++y)
                    for (int z = 0; z < 2; ++z)
                        CHECK(g.r(s, t, y, z) == predicate_from_tests(inst, s, t, y, z));
    }
}

TEST_CASE("honest strategy: exact acceptance 1 on yes-instances") {
    std::mt19937_64 seeds(11);
    int yes_found = 0;
    for (int trial = 0; trial < 200 && yes_found < 10; ++trial) {
        const Instance inst = random_instance(seeds(), 3, 0.7);
        if (!is_yes(inst)) continue;
        ++yes_found;
        CHECK(acceptance(build_game(inst), honest_strategy(inst)) == Rat(1));
    }
    REQUIRE(yes_found == 10);
}

TEST_CASE("honest strategy on tx_instance(1): exactly the (s,3) pairs fail test (c)") {
    const Instance inst = tx_instance(1);
    const Rat acc = acceptance(build_game(inst), honest_strategy(inst));
    // Exact enumeration: 4 of the 16 question pairs reject (t = k with v_k = 0).
    CHECK(acc == rat(3, 4));
}

TEST_CASE("honest strategies are product strategies, hence no-signaling") {
    std::mt19937_64 seeds(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Instance inst = random_instance(seeds(), 2);
        CHECK(check_no_signaling(honest_strategy(inst)).ok);
    }
}

TEST_CASE("acceptance is 1 for any strategy when R is identically 1") {
    Game g(2);
    for (auto& r : g.R) r = 1;
    Strategy uniform(2);
    for (auto& q : uniform.p) q = rat(1, 8);
    CHECK(acceptance(g, uniform) == Rat(1));
}

TEST_CASE("acceptance stays within [0,1] for valid strategies") {
    std::mt19937_64 seeds(17);
    for (int trial = 0; trial < 50; ++trial) {
        const Instance inst = random_instance(seeds(), 2);
        const Game g = build_game(inst);
        const Strategy p = random_strategy(seeds(), g.N);
        const Rat a = acceptance(g, p);
        CHECK(a >= 0);
        CHECK(a <= 1);
    }
}

TEST_CASE("flipping a no-instance to yes lifts honest acceptance to exactly 1") {
    // tx_instance(1) with gate 1 changed from ZERO to ONE: the ORs become 1.
    std::vector<GateDescriptor> gates{{GateKind::Zero, {}},
                                      {GateKind::One, {}},
                                      {GateKind::Or, {0, 1}},
                                      {GateKind::Or, {0, 1}}};
    const Instance inst = make_table_instance(gates, 3);
    REQUIRE(is_yes(inst));
    CHECK(acceptance(build_game(inst), honest_strategy(inst)) == Rat(1));
}

TEST_CASE("acceptance rejects dimension mismatch") {
    const Game g = build_game(tx_instance(1));
    Strategy p(2);
    for (std::uint32_t s = 0; s < 2; ++s)
        for (std::uint32_t t = 0; t < 2; ++t) p.at(s, t, 0, 0) = 1;
    CHECK_THROWS_AS(acceptance(g, p), std::invalid_argument);
}
