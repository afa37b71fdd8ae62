#include "nsg/proveropt.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace nsg {

namespace {

// Projector |Phi><Phi| on SS' (alice) or TT' (bob), identity elsewhere.
void apply_phi_projector(const ProtocolConfig& cfg, StateVector& psi, bool alice) {
    const std::uint32_t nq = cfg.num_questions();
    const std::size_t dr = cfg.dim_yzp();
    const int k = cfg.k;
    const double inv = 1.0 / static_cast<double>(std::size_t{1} << k);
    auto base = [&](std::uint32_t s, std::uint32_t t, std::uint32_t sp, std::uint32_t tp) {
        return ((((((std::size_t{s} << k) | t) << k) | sp) << k) | tp) << (3 + cfg.p_qubits);
    };
    if (alice) {
        for (std::uint32_t t = 0; t < nq; ++t)
            for (std::uint32_t tp = 0; tp < nq; ++tp)
                for (std::size_t r = 0; r < dr; ++r) {
                    Cplx acc(0);
                    for (std::uint32_t s = 0; s < nq; ++s) acc += psi.amp[base(s, t, s, tp) | r];
                    acc *= inv;
                    for (std::uint32_t s = 0; s < nq; ++s)
                        for (std::uint32_t sp = 0; sp < nq; ++sp)
                            psi.amp[base(s, t, sp, tp) | r] = (s == sp) ? acc : Cplx(0);
                }
    } else {
        for (std::uint32_t s = 0; s < nq; ++s)
            for (std::uint32_t sp = 0; sp < nq; ++sp)
                for (std::size_t r = 0; r < dr; ++r) {
                    Cplx acc(0);
                    for (std::uint32_t t = 0; t < nq; ++t) acc += psi.amp[base(s, t, sp, t) | r];
                    acc *= inv;
                    for (std::uint32_t t = 0; t < nq; ++t)
                        for (std::uint32_t tp = 0; tp < nq; ++tp)
                            psi.amp[base(s, t, sp, tp) | r] = (t == tp) ? acc : Cplx(0);
                }
    }
}

void scale_by_predicate(const ProtocolConfig& cfg, const Game& g, StateVector& psi) {
    const std::uint32_t nq = cfg.num_questions();
    const std::size_t dp = std::size_t{1} << cfg.p_qubits;
    const int k = cfg.k;
    std::size_t idx = 0;
    for (std::uint32_t s = 0; s < nq; ++s)
        for (std::uint32_t t = 0; t < nq; ++t)
            for (std::uint32_t sp = 0; sp < nq; ++sp)
                for (std::uint32_t tp = 0; tp < nq; ++tp)
                    for (int y = 0; y < 4; ++y)
                        for (int z = 0; z < 2; ++z) {
                            const double r = g.r(sp, tp, y, z).get_d();
                            for (std::size_t pp = 0; pp < dp; ++pp, ++idx) psi.amp[idx] *= r;
                        }
    (void)k;
}

double inner_real(const StateVector& a, const StateVector& b) {
    Cplx acc(0);
    for (std::size_t i = 0; i < a.amp.size(); ++i) acc += std::conj(a.amp[i]) * b.amp[i];
    return acc.real();
}

std::vector<Mat> adjoint_blocks(const std::vector<Mat>& blocks) {
    std::vector<Mat> out;
    out.reserve(blocks.size());
    for (const Mat& b : blocks) out.push_back(b.adjoint());
    return out;
}

// Gradient of f with respect to conj(block), kept in factored form
// G = a b^dag. The factor rank is tiny by construction: the prover never
// touches S',T', so only slices with s' = s, t' = t contribute, and the
// initial state's (s,t,s,t) slice is a multiple of a basis vector.
struct BlockGrad {
    Mat a, b;  // n x r each

    // (a b^dag)_{ij}; Eigen's dot conjugates its left operand.
    Cplx entry(Eigen::Index i, Eigen::Index j) const { return b.row(j).dot(a.row(i)); }
};

struct Gradients {
    double value = 0;
    std::vector<BlockGrad> gu, gv, gw;
};

// Analytic Wirtinger gradients d f / d conj(block) of
//   f = 1/4 + ( <chi|D_R|chi> + ||P_A V chi||^2 + ||P_B W chi||^2 ) / 4,
// chi = U psi0; obtained by contracting the quadratic forms with one factor
// of the block removed.
Gradients compute_gradients(const ProtocolConfig& cfg, const Game& g,
                            const ProverUnitaries& prover) {
    const std::uint32_t nq = cfg.num_questions();
    const int k = cfg.k, p = cfg.p_qubits;
    const std::size_t dp = std::size_t{1} << p;
    auto base = [&](std::uint32_t s, std::uint32_t t, std::uint32_t sp, std::uint32_t tp) {
        return ((((((std::size_t{s} << k) | t) << k) | sp) << k) | tp) << (3 + p);
    };

    const StateVector psi0 = initial_state(cfg);
    StateVector chi = psi0;
    apply_u(cfg, prover.u, chi);

    StateVector av = chi;  // P_A V chi
    apply_v(cfg, prover.v, av);
    StateVector v_chi = av;
    apply_phi_projector(cfg, av, /*alice=*/true);

    StateVector bw = chi;  // P_B W chi
    apply_w(cfg, prover.w, bw);
    StateVector w_chi = bw;
    apply_phi_projector(cfg, bw, /*alice=*/false);

    StateVector dr_chi = chi;
    scale_by_predicate(cfg, g, dr_chi);

    Gradients grads;
    grads.value = 0.25 + (inner_real(chi, dr_chi) + inner_real(v_chi, av) +
                          inner_real(w_chi, bw)) /
                             4.0;

    // G_V(s) = 1/4 sum over (t,z) of (P_A V chi)|_(s,t,s,t,z) chi|_(s,t,s,t,z)^dag.
    grads.gv.reserve(nq);
    for (std::uint32_t s = 0; s < nq; ++s) {
        BlockGrad bg;
        const Eigen::Index r = 2 * static_cast<Eigen::Index>(nq);
        bg.a.resize(cfg.dim_yp(), r);
        bg.b.resize(cfg.dim_yp(), r);
        Eigen::Index col = 0;
        for (std::uint32_t t = 0; t < nq; ++t) {
            const std::size_t b0 = base(s, t, s, t);
            for (int z = 0; z < 2; ++z, ++col) {
                const std::size_t zoff = std::size_t{static_cast<unsigned>(z)} << p;
                for (int y = 0; y < 4; ++y) {
                    const std::size_t src =
                        b0 | (std::size_t{static_cast<unsigned>(y)} << (1 + p)) | zoff;
                    const std::size_t dst = std::size_t{static_cast<unsigned>(y)} << p;
                    std::copy_n(av.amp.data() + src, dp, bg.a.col(col).data() + dst);
                    std::copy_n(chi.amp.data() + src, dp, bg.b.col(col).data() + dst);
                }
            }
        }
        bg.a *= 0.25;
        grads.gv.push_back(std::move(bg));
    }

    // G_W(t) = 1/4 sum over (s,y) of (P_B W chi)|_(s,t,s,t,y) chi|_(s,t,s,t,y)^dag.
    grads.gw.reserve(nq);
    for (std::uint32_t t = 0; t < nq; ++t) {
        BlockGrad bg;
        const Eigen::Index r = 4 * static_cast<Eigen::Index>(nq);
        bg.a.resize(cfg.dim_zp(), r);
        bg.b.resize(cfg.dim_zp(), r);
        Eigen::Index col = 0;
        for (std::uint32_t s = 0; s < nq; ++s) {
            const std::size_t b0 = base(s, t, s, t);
            for (int y = 0; y < 4; ++y, ++col) {
                const std::size_t off = b0 | (std::size_t{static_cast<unsigned>(y)} << (1 + p));
                std::copy_n(bw.amp.data() + off, cfg.dim_zp(), bg.a.col(col).data());
                std::copy_n(chi.amp.data() + off, cfg.dim_zp(), bg.b.col(col).data());
            }
        }
        bg.a *= 0.25;
        grads.gw.push_back(std::move(bg));
    }

    // m = (D_R + V^dag P_A V + W^dag P_B W) chi; psi0's (s,t,s,t) slice is
    // 2^-k e_0, so G_U(s,t) = (2^-k / 4) m|_(s,t,s,t) e_0^dag: rank one.
    StateVector m = dr_chi;
    {
        StateVector va = av;
        apply_v(cfg, adjoint_blocks(prover.v), va);
        StateVector wb = bw;
        apply_w(cfg, adjoint_blocks(prover.w), wb);
        for (std::size_t i = 0; i < m.amp.size(); ++i) m.amp[i] += va.amp[i] + wb.amp[i];
    }
    const double amp0 = 1.0 / static_cast<double>(std::size_t{1} << k);
    grads.gu.reserve(std::size_t{nq} * nq);
    for (std::uint32_t s = 0; s < nq; ++s)
        for (std::uint32_t t = 0; t < nq; ++t) {
            BlockGrad bg;
            bg.a.resize(cfg.dim_yzp(), 1);
            std::copy_n(m.amp.data() + base(s, t, s, t), cfg.dim_yzp(), bg.a.col(0).data());
            bg.a *= 0.25 * amp0;
            bg.b = Mat::Zero(cfg.dim_yzp(), 1);
            bg.b(0, 0) = 1.0;
            grads.gu.push_back(std::move(bg));
        }
    return grads;
}

// Unitary factor of the polar decomposition of m (stable for any rank).
Mat polar_unitary_dense(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

// polar(B + eta a b^dag) for unitary B in O(n^2 r): with N = I + X Y^dag
// (X = eta B^dag a, Y = b), the correction (N^dag N)^{-1/2} - I lives on
// span[X Y], so only a 2r x 2r eigenproblem is solved exactly.
Mat polar_rank_update(const Mat& blk, const BlockGrad& grad, double eta) {
    const Eigen::Index n = blk.rows(), r = grad.a.cols();
    Mat x = eta * (blk.adjoint() * grad.a);  // n x r
    const Mat& y = grad.b;
    Mat xy(n, 2 * r);
    xy << x, y;
    const Mat z = Eigen::HouseholderQR<Mat>(xy).householderQ() * Mat::Identity(n, 2 * r);
    const Mat xz = z.adjoint() * x, yz = z.adjoint() * y;  // 2r x r
    const Mat c = yz * xz.adjoint() + xz * yz.adjoint() + yz * (x.adjoint() * x) * yz.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es((c + c.adjoint()) / 2.0);
    const Eigen::VectorXd lam = es.eigenvalues();
    Mat m = blk;
    m.noalias() += eta * grad.a * grad.b.adjoint();
    if ((lam.array() + 1.0).minCoeff() < 1e-10) return polar_unitary_dense(m);
    const Eigen::VectorXd d = (lam.array() + 1.0).rsqrt() - 1.0;
    const Mat dz = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
    Mat nz = z;
    nz.noalias() += x * (y.adjoint() * z);  // N Z
    return m + (blk * nz) * (dz * z.adjoint());
}

void retract(std::vector<Mat>& blocks, const std::vector<BlockGrad>& grads, double eta) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        Mat b = polar_rank_update(blocks[i], grads[i], eta);
        // One Newton-Schulz step pulls the block back onto the unitary
        // manifold; without it the low-rank update's O(eta^2) unitarity
        // error compounds across iterations.
        const Eigen::Index n = b.rows();
        blocks[i] = 0.5 * b * (3.0 * Mat::Identity(n, n) - b.adjoint() * b);
    }
}

}  // namespace

double acceptance_functional(const ProtocolConfig& cfg, const Game& g,
                             const ProverUnitaries& prover) {
    return run_protocol(cfg, prover, g).acceptance;
}

AscendResult ascend(const ProtocolConfig& cfg, const Game& g, ProverUnitaries init, int iters,
                    double tol) {
    if (iters < 1) throw std::invalid_argument("iters must be >= 1");
    if (init.unitarity_residual() > 1e-8)
        throw std::invalid_argument("initial prover is not unitary");
    cfg.check_cap();

    AscendResult res;
    res.prover = std::move(init);
    double eta = 0.1;
    Gradients grads = compute_gradients(cfg, g, res.prover);
    res.value = grads.value;
    res.trace.push_back({0, 0, res.value, eta});
    for (int it = 1; it <= iters; ++it) {
        ProverUnitaries cand = res.prover;
        retract(cand.u, grads.gu, eta);
        retract(cand.v, grads.gv, eta);
        retract(cand.w, grads.gw, eta);
        Gradients cand_grads = compute_gradients(cfg, g, cand);
        if (std::isfinite(cand_grads.value) && cand_grads.value <= 1.0 + 1e-6 &&
            cand_grads.value >= res.value) {
            const double gain = cand_grads.value - res.value;
            res.prover = std::move(cand);
            res.value = cand_grads.value;
            grads = std::move(cand_grads);
            eta = std::min(eta * 1.5, 64.0);
            res.trace.push_back({0, it, res.value, eta});
            if (gain < tol) break;
        } else {
            eta /= 2;
            res.trace.push_back({0, it, res.value, eta});
            if (eta < 1e-14) break;
        }
    }
    return res;
}

ProverUnitaries random_prover(const ProtocolConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ProverUnitaries pr = identity_prover(cfg);
    for (Mat& b : pr.u) b = random_unitary(rng, static_cast<int>(cfg.dim_yzp()));
    for (Mat& b : pr.v) b = random_unitary(rng, static_cast<int>(cfg.dim_yp()));
    for (Mat& b : pr.w) b = random_unitary(rng, static_cast<int>(cfg.dim_zp()));
    return pr;
}

AscendResult ascend_restarts(const ProtocolConfig& cfg, const Game& g, std::uint64_t seed,
                             int restarts, int iters, std::vector<AscentStep>* trace) {
    AscendResult best;
    best.value = -1;
    for (int r = 0; r < restarts; ++r) {
        AscendResult res = ascend(cfg, g, random_prover(cfg, seed + static_cast<std::uint64_t>(r)),
                                  iters);
        if (trace)
            for (AscentStep step : res.trace) {
                step.restart = r;
                trace->push_back(step);
            }
        if (res.value > best.value) best = std::move(res);
    }
    return best;
}

double gradient_check(const ProtocolConfig& cfg, const Game& g, const ProverUnitaries& prover,
                      double h_step, std::uint64_t seed, int samples) {
    if (h_step < 1e-7 || h_step > 1e-3) throw std::invalid_argument("h_step out of range");
    const Gradients grads = compute_gradients(cfg, g, prover);
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int n = 0; n < samples; ++n) {
        const int family = static_cast<int>(rng() % 3);
        const std::vector<Mat>& blocks =
            family == 0 ? prover.u : (family == 1 ? prover.v : prover.w);
        const std::vector<BlockGrad>& gblocks =
            family == 0 ? grads.gu : (family == 1 ? grads.gv : grads.gw);
        const std::size_t bi = rng() % blocks.size();
        const Eigen::Index rows = blocks[bi].rows();
        const Eigen::Index i = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(rows));
        const Eigen::Index j = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(rows));
        const bool imag_dir = rng() % 2 != 0;
        // d f / d h for block(i,j) += h (or += i h): 2 Re / 2 Im of the
        // Wirtinger gradient entry.
        const Cplx ge = gblocks[bi].entry(i, j);
        const double analytic = imag_dir ? 2.0 * ge.imag() : 2.0 * ge.real();
        ProverUnitaries probe = prover;
        std::vector<Mat>& pb = family == 0 ? probe.u : (family == 1 ? probe.v : probe.w);
        const Cplx delta = imag_dir ? Cplx(0, h_step) : Cplx(h_step, 0);
        pb[bi](i, j) += delta;
        const double f_plus = acceptance_functional(cfg, g, probe);
        pb[bi](i, j) -= 2.0 * delta;
        const double f_minus = acceptance_functional(cfg, g, probe);
        const double fd = (f_plus - f_minus) / (2.0 * h_step);
        const double err =
            std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1.0});
        worst = std::max(worst, err);
    }
    return worst;
}

void write_trace_csv(const std::string& path, const std::vector<AscentStep>& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "restart,iteration,value,step_size\n";
    out.precision(17);
    for (const AscentStep& s : trace)
        out << s.restart << ',' << s.iteration << ',' << s.value << ',' << s.step_size << '\n';
    if (!out) throw std::runtime_error("write failure on " + path);
}

}  // namespace nsg
