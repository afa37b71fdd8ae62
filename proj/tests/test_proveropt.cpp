#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nsg/game.hpp"
#include "nsg/nosig.hpp"
#include "nsg/proveropt.hpp"

using namespace nsg;

namespace {

ProtocolConfig cfg_for_k(int k) {
    ProtocolConfig cfg;
    cfg.k = k;
    cfg.p_qubits = 2 * k + 3;
    return cfg;
}

Instance find_instance(int n_bits, bool want_yes, std::uint64_t seed0) {
    for (std::uint64_t seed = seed0;; ++seed) {
        Instance inst = random_instance(seed, n_bits, want_yes ? 0.7 : 0.3);
        if (is_yes(inst) == want_yes) return inst;
    }
}

}  // namespace

TEST_CASE("gradient check: honest and identity provers at k=1") {
    const ProtocolConfig cfg = cfg_for_k(1);
    const Instance inst = find_instance(1, false, 3);
    const Game g = build_game(inst);
    const auto lp = ns_value_lp(g);
    CHECK(gradient_check(cfg, g, honest_prover(lp.argmax, cfg), 1e-5, 7) <= 1e-5);
    CHECK(gradient_check(cfg, g, identity_prover(cfg), 1e-5, 8) <= 1e-5);
    CHECK(gradient_check(cfg, g, random_prover(cfg, 11), 1e-5, 9) <= 1e-5);
}

TEST_CASE("gradient check rejects out-of-range step sizes") {
    const ProtocolConfig cfg = cfg_for_k(1);
    const Game g = build_game(random_instance(5, 1));
    CHECK_THROWS_AS(gradient_check(cfg, g, identity_prover(cfg), 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(gradient_check(cfg, g, identity_prover(cfg), 1e-2), std::invalid_argument);
}

TEST_CASE("ascend keeps a perfect prover at value 1") {
    const ProtocolConfig cfg = cfg_for_k(1);
    const Instance inst = find_instance(1, true, 13);
    const Game g = build_game(inst);
    const auto lp = ns_value_lp(g);
    REQUIRE(lp.value == Rat(1));
    const AscendResult res = ascend(cfg, g, honest_prover(lp.argmax, cfg), 25);
    CHECK(res.value >= 1.0 - 1e-9);
    CHECK(res.value <= 1.0 + 1e-9);
}

TEST_CASE("accepted values are nondecreasing and reproduced by run_protocol") {
    const ProtocolConfig cfg = cfg_for_k(1);
    const Game g = build_game(find_instance(1, false, 17));
    const AscendResult res = ascend(cfg, g, random_prover(cfg, 19), 60);
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i].value >= res.trace[i - 1].value - 1e-12);
    CHECK(std::abs(acceptance_functional(cfg, g, res.prover) - res.value) <= 1e-10);
    CHECK(res.prover.unitarity_residual() <= 1e-9);
}

TEST_CASE("sandwich on an N=2 no-instance") {
    const ProtocolConfig cfg = cfg_for_k(1);
    const Instance inst = find_instance(1, false, 23);
    const Game g = build_game(inst);
    const auto lp = ns_value_lp(g);
    REQUIRE(lp.value < Rat(1));
    const double omega = lp.value.get_d();
    const AscendResult res = ascend(cfg, g, honest_prover(lp.argmax, cfg), 40);
    CHECK(res.value >= 1.0 - (1.0 - omega) / 4.0 - 1e-6);
    CHECK(res.value <= 1.0 - (1.0 - omega) * (1.0 - omega) / 144.0 + 1e-9);
}

TEST_CASE("random restarts recover quantum value 1 on a yes-instance") {
    const ProtocolConfig cfg = cfg_for_k(1);
    const Instance inst = find_instance(1, true, 29);
    const Game g = build_game(inst);
    std::vector<AscentStep> trace;
    const AscendResult best = ascend_restarts(cfg, g, 31, 10, 300, &trace);
    CHECK(best.value >= 1.0 - 1e-4);
    // Trace covers every restart.
    int max_restart = 0;
    for (const AscentStep& s : trace) max_restart = std::max(max_restart, s.restart);
    CHECK(max_restart == 9);
}

TEST_CASE("ascend refuses a non-unitary initial prover") {
    const ProtocolConfig cfg = cfg_for_k(1);
    const Game g = build_game(random_instance(5, 1));
    ProverUnitaries pr = identity_prover(cfg);
    pr.u[0] *= 2.0;
    CHECK_THROWS_AS(ascend(cfg, g, pr, 5), std::invalid_argument);
}

TEST_CASE("trace CSV format and determinism") {
    const std::vector<AscentStep> trace = {{0, 0, 0.5, 0.125}, {0, 1, 0.625, 0.25}};
    const std::string path = "proveropt_trace_test.csv";
    write_trace_csv(path, trace);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "restart,iteration,value,step_size\n0,0,0.5,0.125\n0,1,0.625,0.25\n");
    std::remove(path.c_str());
}
