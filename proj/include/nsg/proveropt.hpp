#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsg/qip.hpp"

namespace nsg {

// One row of the optimization trace.
struct AscentStep {
    int restart = 0;
    int iteration = 0;
    double value = 0;
    double step_size = 0;
};

struct SeeSawState {
    ProverUnitaries prover;
    std::vector<double> value_history;  // accepted values, nondecreasing
    double step_size = 0.1;
    int iterations = 0;
    std::uint64_t restart_seed = 0;
};

struct AscendResult {
    double value = 0;
    ProverUnitaries prover;
    std::vector<AscentStep> trace;
};

// Gradient ascent of the protocol acceptance over block-controlled prover
// unitaries: Euclidean gradient of each block, retraction by polar
// decomposition of M + eta * G, adaptive step size (x1.5 on improvement,
// /2 on rejection). Stops after `iters` accepted or rejected steps or once
// an accepted improvement falls below `tol`.
AscendResult ascend(const ProtocolConfig& cfg, const Game& g, ProverUnitaries init, int iters,
                    double tol = 1e-12);

// Random block-controlled prover drawn from the Haar blocks of the seed.
ProverUnitaries random_prover(const ProtocolConfig& cfg, std::uint64_t seed);

// Best ascend result over `restarts` seeded random initializations.
AscendResult ascend_restarts(const ProtocolConfig& cfg, const Game& g, std::uint64_t seed,
                             int restarts, int iters, std::vector<AscentStep>* trace = nullptr);

// Max scaled relative error between the analytic block gradients and central
// finite differences over `samples` sampled real/imaginary entries.
// The error is |analytic - fd| / max(|analytic|, |fd|, 1).
double gradient_check(const ProtocolConfig& cfg, const Game& g, const ProverUnitaries& prover,
                      double h_step, std::uint64_t seed = 1, int samples = 24);

// Acceptance functional evaluated without the unitarity constraint (used by
// both the optimizer and the finite-difference oracle).
double acceptance_functional(const ProtocolConfig& cfg, const Game& g,
                             const ProverUnitaries& prover);

// CSV with header restart,iteration,value,step_size.
void write_trace_csv(const std::string& path, const std::vector<AscentStep>& trace);

}  // namespace nsg
