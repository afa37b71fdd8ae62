#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nsg/game.hpp"
#include "nsg/strategy.hpp"

namespace nsg {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Qubit layout of the four-message protocol, most significant register first:
//   S (k) | T (k) | S' (k) | T' (k) | Y (2) | Z (1) | P (p_qubits)
// S, T are the question registers handed to the prover, S', T' the referee's
// entangled copies, Y/Z the answer registers, P the prover's private space.
struct ProtocolConfig {
    int k = 2;
    int ay = 2;  // Alice answer bits, fixed by the game shape
    int az = 1;  // Bob answer bits
    int p_qubits = 7;
    int qubit_cap = 24;

    int total_qubits() const { return 4 * k + ay + az + p_qubits; }
    std::uint32_t num_questions() const { return std::uint32_t{1} << k; }
    std::size_t dim() const { return std::size_t{1} << total_qubits(); }
    // Block dimensions of the controlled prover operations.
    std::size_t dim_yzp() const { return std::size_t{1} << (ay + az + p_qubits); }
    std::size_t dim_yp() const { return std::size_t{1} << (ay + p_qubits); }
    std::size_t dim_zp() const { return std::size_t{1} << (az + p_qubits); }

    void check_cap() const;  // throws ResourceCapError when over the cap
};

struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateVector {
    std::vector<Cplx> amp;

    double norm2() const;
};

// Prover operations in block-controlled form:
//   U = sum_{s,t} |s,t><s,t| (x) u[s*2^k+t]   acting on Y,Z,P
//   V = sum_s    |s><s| (x) v[s]              acting on Y,P
//   W = sum_t    |t><t| (x) w[t]              acting on Z,P
// This family contains the honest provers of the protocol; see the module
// notes for why dishonest optimization is restricted to it as well.
struct ProverUnitaries {
    std::vector<Mat> u;  // 4^k blocks of dim 2^(3+p)
    std::vector<Mat> v;  // 2^k blocks of dim 2^(2+p)
    std::vector<Mat> w;  // 2^k blocks of dim 2^(1+p)

    // Max over blocks of ||M^dag M - I||_F.
    double unitarity_residual() const;
};

struct RunReport {
    double p_sim = 0;
    double p_undo_alice = 0;
    double p_undo_bob = 0;
    double acceptance = 0;  // 1/4 + (p_sim + p_undo_alice + p_undo_bob)/4
};

// Floating analogue of Strategy, produced by measurement statistics.
struct FloatStrategy {
    std::uint32_t N = 0;
    std::vector<double> p;  // [s][t][y][z]

    explicit FloatStrategy(std::uint32_t n = 0) : N(n), p(std::size_t{n} * n * 8) {}
    double& at(std::uint32_t s, std::uint32_t t, int y, int z) {
        return p[((std::size_t{s} * N + t) * 4 + y) * 2 + z];
    }
    double at(std::uint32_t s, std::uint32_t t, int y, int z) const {
        return p[((std::size_t{s} * N + t) * 4 + y) * 2 + z];
    }
};

// |Phi>^k_{SS'} |Phi>^k_{TT'} |0>_{YZP}.
StateVector initial_state(const ProtocolConfig& cfg);

// Identity prover of matching dimensions.
ProverUnitaries identity_prover(const ProtocolConfig& cfg);

// Honest prover of a no-signaling strategy p with N = 2^k questions.
// Requires cfg.p_qubits == 2k + 3 (private copies of s, t, y, z).
ProverUnitaries honest_prover(const Strategy& p, const ProtocolConfig& cfg);

// In-place application of the block-controlled prover operations.
void apply_u(const ProtocolConfig& cfg, const std::vector<Mat>& u, StateVector& psi);
void apply_v(const ProtocolConfig& cfg, const std::vector<Mat>& v, StateVector& psi);
void apply_w(const ProtocolConfig& cfg, const std::vector<Mat>& w, StateVector& psi);

// All three verifier branches plus the unconditional-accept branch.
RunReport run_protocol(const ProtocolConfig& cfg, const ProverUnitaries& prover, const Game& g);

// Measurement distribution of S',T',Y,Z after round one, scaled by 2^{2k}.
// Throws std::logic_error if the per-(s,t) mass deviates from 4^{-k} by more
// than 1e-10 (the prover cannot touch S',T').
FloatStrategy induced_strategy(const ProtocolConfig& cfg, const StateVector& psi_after_round1);

// Rounds every entry to a multiple of 2^-40, then renormalizes each (s,t) row
// so exact LP machinery can consume simulated data.
Strategy rationalize_strategy(const FloatStrategy& p);

// Density matrix of a chosen subset of qubits of a pure state.
// `keep` lists qubit positions (0 = most significant) to retain, in order.
Mat partial_trace_state(const StateVector& psi, int total_qubits, const std::vector<int>& keep);

// Partial trace of a density matrix over the second tensor factor (dims a x b)
// or the first, respectively.
Mat partial_trace_second(const Mat& rho, int dim_a, int dim_b);
Mat partial_trace_first(const Mat& rho, int dim_a, int dim_b);

double trace_norm(const Mat& m);

struct LemmaCheck {
    double lhs = 0;
    double rhs = 0;
    bool ok = false;
};

// ||rho - phi phi^dag (x) Tr_X rho||_1 <= 4 sqrt(1 - <phi| Tr_Y rho |phi>)
// for rho on X (x) Y with dim X = dim_x and phi a pure state on X.
LemmaCheck pure_overlap_bound_check(const Mat& rho, const Vec& phi, int dim_x);

// ||rho - sqrt(A) rho sqrt(A)||_1 <= 2 sqrt(Tr rho (I - A)), 0 <= A <= I.
LemmaCheck gentle_measurement_check(const Mat& rho, const Mat& a);

// Numeric test helpers (Ginibre ensembles).
Mat random_density(std::mt19937_64& rng, int dim);
Mat random_unitary(std::mt19937_64& rng, int dim);
Vec random_pure(std::mt19937_64& rng, int dim);

// Binary state dump: "NSGSTATE" magic, u32 version, u32 k/ay/az/p_qubits,
// u64 amplitude count, then little-endian interleaved re/im doubles.
void dump_state(const std::string& path, const ProtocolConfig& cfg, const StateVector& psi);
StateVector load_state(const std::string& path, ProtocolConfig* cfg_out = nullptr);

}  // namespace nsg
