#include "nsg/qip.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace nsg {

namespace {

double to_double(const Rat& r) { return r.get_d(); }

// Index helpers for the S,T,S',T',Y,Z,P layout (S most significant).
struct Layout {
    int k, p;
    std::uint32_t nq;       // 2^k
    std::size_t dim_yzp;    // 2^(3+p)
    std::size_t dim_p;      // 2^p

    explicit Layout(const ProtocolConfig& cfg)
        : k(cfg.k),
          p(cfg.p_qubits),
          nq(cfg.num_questions()),
          dim_yzp(cfg.dim_yzp()),
          dim_p(std::size_t{1} << cfg.p_qubits) {}

    std::size_t base(std::uint32_t s, std::uint32_t t, std::uint32_t sp, std::uint32_t tp) const {
        return ((((((std::size_t{s} << k) | t) << k) | sp) << k) | tp) << (3 + p);
    }
};

// Unitary with prescribed action in_i -> out_i on orthonormal systems,
// completed by Householder QR extension of both systems.
Mat complete_isometry(int dim, const std::vector<Vec>& ins, const std::vector<Vec>& outs) {
    const int r = static_cast<int>(ins.size());
    if (r == 0) return Mat::Identity(dim, dim);
    Mat in_m(dim, r), out_m(dim, r);
    for (int i = 0; i < r; ++i) {
        in_m.col(i) = ins[i];
        out_m.col(i) = outs[i];
    }
    auto extend = [&](const Mat& cols) {
        Eigen::HouseholderQR<Mat> qr(cols);
        Mat q = qr.householderQ();
        const Mat rm = qr.matrixQR();
        // The columns are orthonormal, so R is diagonal with unit-modulus
        // entries; absorb the phases to make q's leading columns exact.
        for (int i = 0; i < r; ++i) {
            const Cplx d = rm(i, i);
            q.col(i) *= d / std::abs(d);
        }
        return q;
    };
    const Mat q_in = extend(in_m);
    const Mat q_out = extend(out_m);
    return q_out * q_in.adjoint();
}

// Private-register basis index for the honest layout [S~,T~,Y~,Z~].
std::size_t priv_index(int k, std::uint32_t s, std::uint32_t t, int y, int z) {
    return ((((std::size_t{s} << k) | t) << 2 | static_cast<unsigned>(y)) << 1) |
           static_cast<unsigned>(z);
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

void ProtocolConfig::check_cap() const {
    if (total_qubits() > qubit_cap)
        throw ResourceCapError("protocol needs " + std::to_string(total_qubits()) +
                               " qubits, cap is " + std::to_string(qubit_cap));
}

double StateVector::norm2() const {
    double s = 0;
    for (const Cplx& a : amp) s += std::norm(a);
    return s;
}

double ProverUnitaries::unitarity_residual() const {
    double worst = 0;
    auto scan = [&worst](const std::vector<Mat>& blocks) {
        for (const Mat& m : blocks) {
            const Mat r = m.adjoint() * m - Mat::Identity(m.rows(), m.cols());
            worst = std::max(worst, r.norm());
        }
    };
    scan(u);
    scan(v);
    scan(w);
    return worst;
}

StateVector initial_state(const ProtocolConfig& cfg) {
    cfg.check_cap();
    const Layout lay(cfg);
    StateVector psi;
    psi.amp.assign(cfg.dim(), Cplx(0));
    const double a = 1.0 / static_cast<double>(std::size_t{1} << cfg.k);  // 2^-k per pair
    for (std::uint32_t s = 0; s < lay.nq; ++s)
        for (std::uint32_t t = 0; t < lay.nq; ++t) psi.amp[lay.base(s, t, s, t)] = a;
    return psi;
}

ProverUnitaries identity_prover(const ProtocolConfig& cfg) {
    ProverUnitaries pr;
    const std::uint32_t nq = cfg.num_questions();
    pr.u.assign(std::size_t{nq} * nq, Mat::Identity(cfg.dim_yzp(), cfg.dim_yzp()));
    pr.v.assign(nq, Mat::Identity(cfg.dim_yp(), cfg.dim_yp()));
    pr.w.assign(nq, Mat::Identity(cfg.dim_zp(), cfg.dim_zp()));
    return pr;
}

ProverUnitaries honest_prover(const Strategy& p, const ProtocolConfig& cfg) {
    cfg.check_cap();
    if (p.N != cfg.num_questions())
        throw std::invalid_argument("strategy size does not match 2^k");
    if (cfg.p_qubits != 2 * cfg.k + 3)
        throw std::invalid_argument("honest prover needs p_qubits = 2k + 3");
    const MarginalPair marg = marginals(p);  // throws if signaling
    const int k = cfg.k;
    const std::size_t dp = std::size_t{1} << cfg.p_qubits;
    ProverUnitaries pr;

    // U block (s,t): |0>_YZP -> sum_{y,z} sqrt(p(y,z|s,t)) |y,z>|s,t,y,z>_P.
    pr.u.reserve(std::size_t{p.N} * p.N);
    for (std::uint32_t s = 0; s < p.N; ++s) {
        for (std::uint32_t t = 0; t < p.N; ++t) {
            Vec in = Vec::Zero(cfg.dim_yzp());
            in(0) = 1.0;
            Vec out = Vec::Zero(cfg.dim_yzp());
            for (int y = 0; y < 4; ++y)
                for (int z = 0; z < 2; ++z) {
                    const std::size_t yz = (std::size_t{static_cast<unsigned>(y)} << (1 + cfg.p_qubits)) |
                                           (std::size_t{static_cast<unsigned>(z)} << cfg.p_qubits);
                    out(yz | priv_index(k, s, t, y, z)) = std::sqrt(to_double(p.at(s, t, y, z)));
                }
            pr.u.push_back(complete_isometry(static_cast<int>(cfg.dim_yzp()), {in}, {out}));
        }
    }

    // V block s: for each (t~,z~) with p^B(z~|t~) > 0, fold Alice's answer back
    //   sum_y sqrt(p(y,z~|s,t~)/p^B(z~|t~)) |y>|s,t~,y,z~>_P  ->  |0>|0,t~,0,z~>_P.
    // The branch with p^B = 0 never occurs and is left to the completion.
    for (std::uint32_t s = 0; s < p.N; ++s) {
        std::vector<Vec> ins, outs;
        for (std::uint32_t tt = 0; tt < p.N; ++tt)
            for (int zz = 0; zz < 2; ++zz) {
                const Rat pb = marg.b(tt, zz);
                if (pb == 0) continue;
                Vec in = Vec::Zero(cfg.dim_yp());
                for (int y = 0; y < 4; ++y)
                    in((std::size_t{static_cast<unsigned>(y)} << cfg.p_qubits) |
                       priv_index(k, s, tt, y, zz)) = std::sqrt(to_double(p.at(s, tt, y, zz) / pb));
                Vec out = Vec::Zero(cfg.dim_yp());
                out(priv_index(k, 0, tt, 0, zz)) = 1.0;
                ins.push_back(std::move(in));
                outs.push_back(std::move(out));
            }
        pr.v.push_back(complete_isometry(static_cast<int>(cfg.dim_yp()), ins, outs));
    }

    // W block t: for each (s~,y~) with p^A(y~|s~) > 0,
    //   sum_z sqrt(p(y~,z|s~,t)/p^A(y~|s~)) |z>|s~,t,y~,z>_P  ->  |0>|s~,0,y~,0>_P.
    for (std::uint32_t t = 0; t < p.N; ++t) {
        std::vector<Vec> ins, outs;
        for (std::uint32_t ss = 0; ss < p.N; ++ss)
            for (int yy = 0; yy < 4; ++yy) {
                const Rat pa = marg.a(ss, yy);
                if (pa == 0) continue;
                Vec in = Vec::Zero(cfg.dim_zp());
                for (int z = 0; z < 2; ++z)
                    in((std::size_t{static_cast<unsigned>(z)} << cfg.p_qubits) |
                       priv_index(k, ss, t, yy, z)) = std::sqrt(to_double(p.at(ss, t, yy, z) / pa));
                Vec out = Vec::Zero(cfg.dim_zp());
                out(priv_index(k, ss, 0, yy, 0)) = 1.0;
                ins.push_back(std::move(in));
                outs.push_back(std::move(out));
            }
        pr.w.push_back(complete_isometry(static_cast<int>(cfg.dim_zp()), ins, outs));
    }
    (void)dp;
    return pr;
}

void apply_u(const ProtocolConfig& cfg, const std::vector<Mat>& u, StateVector& psi) {
    const Layout lay(cfg);
    Vec tmp(lay.dim_yzp);
    for (std::uint32_t s = 0; s < lay.nq; ++s)
        for (std::uint32_t t = 0; t < lay.nq; ++t) {
            const Mat& blk = u[(std::size_t{s} << cfg.k) | t];
            for (std::uint32_t sp = 0; sp < lay.nq; ++sp)
                for (std::uint32_t tp = 0; tp < lay.nq; ++tp) {
                    Eigen::Map<Vec> slice(psi.amp.data() + lay.base(s, t, sp, tp),
                                          static_cast<Eigen::Index>(lay.dim_yzp));
                    tmp.noalias() = blk * slice;
                    slice = tmp;
                }
        }
}

void apply_v(const ProtocolConfig& cfg, const std::vector<Mat>& v, StateVector& psi) {
    const Layout lay(cfg);
    const std::size_t dyp = cfg.dim_yp();
    Vec gath(dyp), tmp(dyp);
    for (std::uint32_t s = 0; s < lay.nq; ++s) {
        const Mat& blk = v[s];
        for (std::uint32_t t = 0; t < lay.nq; ++t)
            for (std::uint32_t sp = 0; sp < lay.nq; ++sp)
                for (std::uint32_t tp = 0; tp < lay.nq; ++tp) {
                    const std::size_t base = lay.base(s, t, sp, tp);
                    for (int z = 0; z < 2; ++z) {
                        const std::size_t zoff = std::size_t{static_cast<unsigned>(z)} << cfg.p_qubits;
                        for (int y = 0; y < 4; ++y) {
                            const std::size_t src =
                                base | (std::size_t{static_cast<unsigned>(y)} << (1 + cfg.p_qubits)) | zoff;
                            std::memcpy(gath.data() + (std::size_t{static_cast<unsigned>(y)} << cfg.p_qubits),
                                        psi.amp.data() + src, lay.dim_p * sizeof(Cplx));
                        }
                        tmp.noalias() = blk * gath;
                        for (int y = 0; y < 4; ++y) {
                            const std::size_t dst =
                                base | (std::size_t{static_cast<unsigned>(y)} << (1 + cfg.p_qubits)) | zoff;
                            std::memcpy(psi.amp.data() + dst,
                                        tmp.data() + (std::size_t{static_cast<unsigned>(y)} << cfg.p_qubits),
                                        lay.dim_p * sizeof(Cplx));
                        }
                    }
                }
    }
}

void apply_w(const ProtocolConfig& cfg, const std::vector<Mat>& w, StateVector& psi) {
    const Layout lay(cfg);
    const std::size_t dzp = cfg.dim_zp();
    Vec tmp(dzp);
    for (std::uint32_t s = 0; s < lay.nq; ++s)
        for (std::uint32_t t = 0; t < lay.nq; ++t) {
            const Mat& blk = w[t];
            for (std::uint32_t sp = 0; sp < lay.nq; ++sp)
                for (std::uint32_t tp = 0; tp < lay.nq; ++tp) {
                    const std::size_t base = lay.base(s, t, sp, tp);
                    for (int y = 0; y < 4; ++y) {
                        Eigen::Map<Vec> slice(
                            psi.amp.data() + (base | (std::size_t{static_cast<unsigned>(y)} << (1 + cfg.p_qubits))),
                            static_cast<Eigen::Index>(dzp));
                        tmp.noalias() = blk * slice;
                        slice = tmp;
                    }
                }
        }
}

namespace {

// ||(<Phi|_{AA'} (x) I) psi||^2 where A is the question register at msb offset
// `qa` and A' its referee copy at offset `qap` (both k qubits).
double undo_probability(const ProtocolConfig& cfg, const StateVector& psi, bool alice) {
    const Layout lay(cfg);
    double total = 0;
    const double scale = 1.0 / static_cast<double>(std::size_t{1} << cfg.k);  // 2^-k from <Phi|
    if (alice) {
        for (std::uint32_t t = 0; t < lay.nq; ++t)
            for (std::uint32_t tp = 0; tp < lay.nq; ++tp)
                for (std::size_t r = 0; r < lay.dim_yzp; ++r) {
                    Cplx acc(0);
                    for (std::uint32_t s = 0; s < lay.nq; ++s) acc += psi.amp[lay.base(s, t, s, tp) | r];
                    total += std::norm(acc);
                }
    } else {
        for (std::uint32_t s = 0; s < lay.nq; ++s)
            for (std::uint32_t sp = 0; sp < lay.nq; ++sp)
                for (std::size_t r = 0; r < lay.dim_yzp; ++r) {
                    Cplx acc(0);
                    for (std::uint32_t t = 0; t < lay.nq; ++t) acc += psi.amp[lay.base(s, t, sp, t) | r];
                    total += std::norm(acc);
                }
    }
    return total * scale;
}

}  // namespace

RunReport run_protocol(const ProtocolConfig& cfg, const ProverUnitaries& prover, const Game& g) {
    cfg.check_cap();
    if (g.N != cfg.num_questions()) throw std::invalid_argument("game size does not match 2^k");
    const Layout lay(cfg);
    StateVector psi = initial_state(cfg);
    apply_u(cfg, prover.u, psi);

    RunReport rep;
    // Simulation test: measure S',T',Y,Z and average the predicate.
    for (std::uint32_t s = 0; s < lay.nq; ++s)
        for (std::uint32_t t = 0; t < lay.nq; ++t)
            for (std::uint32_t sp = 0; sp < lay.nq; ++sp)
                for (std::uint32_t tp = 0; tp < lay.nq; ++tp) {
                    const std::size_t base = lay.base(s, t, sp, tp);
                    for (int y = 0; y < 4; ++y)
                        for (int z = 0; z < 2; ++z) {
                            const double r = to_double(g.r(sp, tp, y, z));
                            if (r == 0) continue;
                            const std::size_t off =
                                base | (std::size_t{static_cast<unsigned>(y)} << (1 + cfg.p_qubits)) |
                                (std::size_t{static_cast<unsigned>(z)} << cfg.p_qubits);
                            double mass = 0;
                            for (std::size_t pp = 0; pp < lay.dim_p; ++pp)
                                mass += std::norm(psi.amp[off | pp]);
                            rep.p_sim += r * mass;
                        }
                }

    StateVector psi_a = psi;
    apply_v(cfg, prover.v, psi_a);
    rep.p_undo_alice = undo_probability(cfg, psi_a, /*alice=*/true);

    StateVector psi_b = std::move(psi);
    apply_w(cfg, prover.w, psi_b);
    rep.p_undo_bob = undo_probability(cfg, psi_b, /*alice=*/false);

    rep.acceptance = 0.25 + (rep.p_sim + rep.p_undo_alice + rep.p_undo_bob) / 4.0;
    return rep;
}

FloatStrategy induced_strategy(const ProtocolConfig& cfg, const StateVector& psi) {
    const Layout lay(cfg);
    if (psi.amp.size() != cfg.dim()) throw std::invalid_argument("state dimension mismatch");
    FloatStrategy out(lay.nq);
    const double uniform = 1.0 / static_cast<double>(std::size_t{1} << (2 * cfg.k));
    for (std::uint32_t sp = 0; sp < lay.nq; ++sp)
        for (std::uint32_t tp = 0; tp < lay.nq; ++tp) {
            double cell = 0;
            for (int y = 0; y < 4; ++y)
                for (int z = 0; z < 2; ++z) {
                    double mass = 0;
                    for (std::uint32_t s = 0; s < lay.nq; ++s)
                        for (std::uint32_t t = 0; t < lay.nq; ++t) {
                            const std::size_t off =
                                lay.base(s, t, sp, tp) |
                                (std::size_t{static_cast<unsigned>(y)} << (1 + cfg.p_qubits)) |
                                (std::size_t{static_cast<unsigned>(z)} << cfg.p_qubits);
                            for (std::size_t pp = 0; pp < lay.dim_p; ++pp)
                                mass += std::norm(psi.amp[off | pp]);
                        }
                    out.at(sp, tp, y, z) = mass / uniform;
                    cell += mass;
                }
            if (std::abs(cell - uniform) > 1e-10)
                throw std::logic_error("prover altered the referee's S',T' marginals");
        }
    return out;
}

Strategy rationalize_strategy(const FloatStrategy& fp) {
    const long denom_bits = 40;
    Strategy out(fp.N);
    for (std::uint32_t s = 0; s < fp.N; ++s)
        for (std::uint32_t t = 0; t < fp.N; ++t) {
            Rat row_sum = 0;
            for (int y = 0; y < 4; ++y)
                for (int z = 0; z < 2; ++z) {
                    const double scaled = fp.at(s, t, y, z) * std::pow(2.0, denom_bits);
                    Rat q(static_cast<long>(std::llround(std::max(0.0, scaled))));
                    q /= rat_pow2(denom_bits);
                    out.at(s, t, y, z) = q;
                    row_sum += q;
                }
            if (row_sum == 0) {
                out.at(s, t, 0, 0) = 1;
                continue;
            }
            for (int y = 0; y < 4; ++y)
                for (int z = 0; z < 2; ++z) out.at(s, t, y, z) /= row_sum;
        }
    out.validate();
    return out;
}

Mat partial_trace_state(const StateVector& psi, int total_qubits, const std::vector<int>& keep) {
    if (psi.amp.size() != (std::size_t{1} << total_qubits))
        throw std::invalid_argument("state size does not match qubit count");
    std::vector<bool> kept(total_qubits, false);
    for (int q : keep) {
        if (q < 0 || q >= total_qubits) throw std::invalid_argument("bad register index");
        if (kept[q]) throw std::invalid_argument("duplicate register index");
        kept[q] = true;
    }
    const int nk = static_cast<int>(keep.size());
    const int ne = total_qubits - nk;
    std::vector<int> env;
    for (int q = 0; q < total_qubits; ++q)
        if (!kept[q]) env.push_back(q);
    const std::size_t dk = std::size_t{1} << nk, de = std::size_t{1} << ne;
    Mat m = Mat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(de));
    for (std::size_t idx = 0; idx < psi.amp.size(); ++idx) {
        if (psi.amp[idx] == Cplx(0)) continue;
        std::size_t a = 0, e = 0;
        for (int j = 0; j < nk; ++j)
            a |= ((idx >> (total_qubits - 1 - keep[j])) & 1u) << (nk - 1 - j);
        for (int j = 0; j < ne; ++j)
            e |= ((idx >> (total_qubits - 1 - env[j])) & 1u) << (ne - 1 - j);
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(e)) += psi.amp[idx];
    }
    return m * m.adjoint();
}

Mat partial_trace_second(const Mat& rho, int dim_a, int dim_b) {
    if (rho.rows() != Eigen::Index(dim_a) * dim_b) throw std::invalid_argument("bad split");
    Mat out = Mat::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
        for (int j = 0; j < dim_a; ++j)
            for (int e = 0; e < dim_b; ++e) out(i, j) += rho(i * dim_b + e, j * dim_b + e);
    return out;
}

Mat partial_trace_first(const Mat& rho, int dim_a, int dim_b) {
    if (rho.rows() != Eigen::Index(dim_a) * dim_b) throw std::invalid_argument("bad split");
    Mat out = Mat::Zero(dim_b, dim_b);
    for (int e = 0; e < dim_a; ++e)
        for (int i = 0; i < dim_b; ++i)
            for (int j = 0; j < dim_b; ++j) out(i, j) += rho(e * dim_b + i, e * dim_b + j);
    return out;
}

double trace_norm(const Mat& m) {
    if (m.rows() <= 64) {
        Eigen::JacobiSVD<Mat> svd(m);
        return svd.singularValues().sum();
    }
    Eigen::BDCSVD<Mat> svd(m);
    return svd.singularValues().sum();
}

LemmaCheck pure_overlap_bound_check(const Mat& rho, const Vec& phi, int dim_x) {
    const int dim_y = static_cast<int>(rho.rows()) / dim_x;
    if (Eigen::Index(dim_x) * dim_y != rho.rows()) throw std::invalid_argument("bad split");
    if (phi.size() != dim_x) throw std::invalid_argument("phi dimension mismatch");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || rho.trace().imag() > 1e-10)
        throw std::invalid_argument("rho must have unit trace");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("rho must be PSD");

    const Mat sigma = partial_trace_first(rho, dim_x, dim_y);  // Tr_X rho
    const Mat proj = phi * phi.adjoint();
    LemmaCheck c;
    c.lhs = trace_norm(rho - kron(proj, sigma));
    const Mat red_x = partial_trace_second(rho, dim_x, dim_y);  // Tr_Y rho
    const double overlap = (phi.adjoint() * red_x * phi)(0).real();
    c.rhs = 4.0 * std::sqrt(std::max(0.0, 1.0 - overlap));
    c.ok = c.lhs <= c.rhs + 1e-9;
    return c;
}

LemmaCheck gentle_measurement_check(const Mat& rho, const Mat& a) {
    if (rho.rows() != a.rows()) throw std::invalid_argument("dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-10 || ev.maxCoeff() > 1.0 + 1e-10)
        throw std::invalid_argument("measurement operator must satisfy 0 <= A <= I");
    Eigen::VectorXd sq = ev.cwiseMax(0.0).cwiseMin(1.0).cwiseSqrt();
    const Mat sqrt_a = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint();
    LemmaCheck c;
    c.lhs = trace_norm(rho - sqrt_a * rho * sqrt_a);
    const double miss = ((Mat::Identity(a.rows(), a.cols()) - a) * rho).trace().real();
    c.rhs = 2.0 * std::sqrt(std::max(0.0, miss));
    c.ok = c.lhs <= c.rhs + 1e-9;
    return c;
}

Mat random_density(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> nd;
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Cplx(nd(rng), nd(rng));
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

Mat random_unitary(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> nd;
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Cplx(nd(rng), nd(rng));
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR();
    for (int i = 0; i < dim; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

Vec random_pure(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> nd;
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Cplx(nd(rng), nd(rng));
    return v / v.norm();
}

void dump_state(const std::string& path, const ProtocolConfig& cfg, const StateVector& psi) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write("NSGSTATE", 8);
    auto put32 = [&out](std::uint32_t x) { out.write(reinterpret_cast<const char*>(&x), 4); };
    put32(1);  // version
    put32(static_cast<std::uint32_t>(cfg.k));
    put32(static_cast<std::uint32_t>(cfg.ay));
    put32(static_cast<std::uint32_t>(cfg.az));
    put32(static_cast<std::uint32_t>(cfg.p_qubits));
    const std::uint64_t count = psi.amp.size();
    out.write(reinterpret_cast<const char*>(&count), 8);
    for (const Cplx& a : psi.amp) {
        const double re = a.real(), im = a.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!out) throw std::runtime_error("write failure on " + path);
}

StateVector load_state(const std::string& path, ProtocolConfig* cfg_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "NSGSTATE", 8) != 0)
        throw std::runtime_error("not a state dump: " + path);
    auto get32 = [&in]() {
        std::uint32_t x = 0;
        in.read(reinterpret_cast<char*>(&x), 4);
        return x;
    };
    const std::uint32_t version = get32();
    if (version != 1) throw std::runtime_error("unsupported state dump version");
    ProtocolConfig cfg;
    cfg.k = static_cast<int>(get32());
    cfg.ay = static_cast<int>(get32());
    cfg.az = static_cast<int>(get32());
    cfg.p_qubits = static_cast<int>(get32());
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), 8);
    StateVector psi;
    psi.amp.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        double re = 0, im = 0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        psi.amp[i] = Cplx(re, im);
    }
    if (!in) throw std::runtime_error("truncated state dump: " + path);
    if (cfg_out) *cfg_out = cfg;
    return psi;
}

}  // namespace nsg
