#include "nsg/nosig.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace nsg {

namespace {

// Variable layout shared by the no-signaling LPs: the joint table first,
// then Alice's and Bob's marginal variables.
struct NsVars {
    std::uint32_t N;
    std::size_t num_p, num_a, num_b;

    explicit NsVars(std::uint32_t n)
        : N(n),
          num_p(std::size_t{n} * n * 8),
          num_a(std::size_t{n} * 4),
          num_b(std::size_t{n} * 2) {}

    std::size_t p(std::uint32_t s, std::uint32_t t, int y, int z) const {
        return ((std::size_t{s} * N + t) * 4 + y) * 2 + z;
    }
    std::size_t a(std::uint32_t s, int y) const { return num_p + std::size_t{s} * 4 + y; }
    std::size_t b(std::uint32_t t, int z) const { return num_p + num_a + std::size_t{t} * 2 + z; }
    std::size_t total() const { return num_p + num_a + num_b; }
};

// Rows constraining vars [p, pA, pB] to the no-signaling polytope:
// per-cell normalization and both marginal equality families.
void add_ns_polytope_rows(LpProblem& lp, const NsVars& v) {
    for (std::uint32_t s = 0; s < v.N; ++s)
        for (std::uint32_t t = 0; t < v.N; ++t) {
            std::vector<std::pair<std::size_t, Rat>> row;
            for (int y = 0; y < 4; ++y)
                for (int z = 0; z < 2; ++z) row.emplace_back(v.p(s, t, y, z), Rat(1));
            lp.add_row(row, Rat(1));
        }
    for (std::uint32_t s = 0; s < v.N; ++s)
        for (std::uint32_t t = 0; t < v.N; ++t) {
            for (int z = 0; z < 2; ++z) {
                std::vector<std::pair<std::size_t, Rat>> row;
                for (int y = 0; y < 4; ++y) row.emplace_back(v.p(s, t, y, z), Rat(1));
                row.emplace_back(v.b(t, z), Rat(-1));
                lp.add_row(row, Rat(0));
            }
            for (int y = 0; y < 4; ++y) {
                std::vector<std::pair<std::size_t, Rat>> row;
                for (int z = 0; z < 2; ++z) row.emplace_back(v.p(s, t, y, z), Rat(1));
                row.emplace_back(v.a(s, y), Rat(-1));
                lp.add_row(row, Rat(0));
            }
        }
}

Strategy strategy_from_solution(std::uint32_t n, const std::vector<Rat>& x) {
    Strategy p(n);
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p.p.size()), p.p.begin());
    return p;
}

}  // namespace

LpGameResult ns_value_lp(const Game& g, std::vector<PivotStep>* pivot_log) {
    if (g.N > 32) throw std::invalid_argument("ns_value_lp: N > 32 exceeds desk scale");
    const NsVars v(g.N);
    LpProblem lp;
    lp.num_vars = v.total();
    lp.obj.assign(lp.num_vars, Rat(0));
    const Rat inv_n2 = Rat(1) / (Rat(g.N) * Rat(g.N));
    for (std::uint32_t s = 0; s < g.N; ++s)
        for (std::uint32_t t = 0; t < g.N; ++t)
            for (int y = 0; y < 4; ++y)
                for (int z = 0; z < 2; ++z)
                    if (g.r(s, t, y, z) != 0)
                        lp.obj[v.p(s, t, y, z)] = g.r(s, t, y, z) * inv_n2;
    add_ns_polytope_rows(lp, v);

    const LpSolution sol = solve_lp(lp, pivot_log);
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("ns_value_lp: LP not optimal (polytope should be nonempty)");
    return LpGameResult{sol.value, strategy_from_solution(g.N, sol.x)};
}

Rat ns_value_by_vertex_enumeration(const Game& g) {
    const NsVars v(g.N);
    LpProblem lp;
    lp.num_vars = v.num_p;  // joint table only; marginals eliminated
    lp.obj.assign(lp.num_vars, Rat(0));
    for (std::uint32_t s = 0; s < g.N; ++s)
        for (std::uint32_t t = 0; t < g.N; ++t) {
            std::vector<std::pair<std::size_t, Rat>> row;
            for (int y = 0; y < 4; ++y)
                for (int z = 0; z < 2; ++z) row.emplace_back(v.p(s, t, y, z), Rat(1));
            lp.add_row(row, Rat(1));
        }
    // Marginal equalities against the s = 0 / t = 0 reference cells.
    for (std::uint32_t s = 1; s < g.N; ++s)
        for (std::uint32_t t = 0; t < g.N; ++t)
            for (int z = 0; z < 2; ++z) {
                std::vector<std::pair<std::size_t, Rat>> row;
                for (int y = 0; y < 4; ++y) {
                    row.emplace_back(v.p(s, t, y, z), Rat(1));
                    row.emplace_back(v.p(0, t, y, z), Rat(-1));
                }
                lp.add_row(row, Rat(0));
            }
    for (std::uint32_t s = 0; s < g.N; ++s)
        for (std::uint32_t t = 1; t < g.N; ++t)
            for (int y = 0; y < 4; ++y) {
                std::vector<std::pair<std::size_t, Rat>> row;
                for (int z = 0; z < 2; ++z) {
                    row.emplace_back(v.p(s, t, y, z), Rat(1));
                    row.emplace_back(v.p(s, 0, y, z), Rat(-1));
                }
                lp.add_row(row, Rat(0));
            }

    const auto vertices = enumerate_vertices_eq(lp);
    if (vertices.empty()) throw std::runtime_error("no-signaling polytope came out empty");
    Rat best = -1;
    const Rat inv_n2 = Rat(1) / (Rat(g.N) * Rat(g.N));
    for (const auto& x : vertices) {
        Rat val = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != 0 && g.R[i] != 0) val += x[i] * g.R[i];
        val *= inv_n2;
        if (val > best) best = val;
    }
    return best;
}

Strategy tx_strategy(int h) {
    if (h < 1) throw std::invalid_argument("tx_strategy requires h >= 1");
    const Instance inst = tx_instance(h);
    const std::uint32_t n = inst.gate_count();
    const std::uint32_t used = 2u * static_cast<std::uint32_t>(h) + 2u;

    // Marginals. Alice: y encoded as y1*2 + y2.
    auto bob1 = [&](std::uint32_t t) -> Rat {  // Pr[z = 1 | t]
        if (t >= used) return Rat(0);
        return rat_pow2(-(h - static_cast<long>(t / 2)));
    };
    auto alice = [&](std::uint32_t s, int y) -> Rat {
        if (s < 2 || s >= used) return y == 0 ? Rat(1) : Rat(0);
        const long i = s / 2;
        const Rat q = rat_pow2(-(h - i + 1));  // weight of (1,0) and of (0,1)
        if (y == 2 || y == 1) return q;
        if (y == 0) return 1 - 2 * q;
        return Rat(0);
    };

    Strategy p(n);
    for (std::uint32_t s = 0; s < n; ++s)
        for (std::uint32_t t = 0; t < n; ++t) {
            const long i = s / 2;
            const bool special = s >= 2 && s < used && i >= 1 &&
                                 (t == s || t == 2 * (static_cast<std::uint32_t>(i) - 1) ||
                                  t == 2 * (static_cast<std::uint32_t>(i) - 1) + 1);
            if (special && t == s) {
                const Rat q = rat_pow2(-(h - i + 1));
                p.at(s, t, 2, 1) = q;  // (1,0;1)
                p.at(s, t, 1, 1) = q;  // (0,1;1)
                p.at(s, t, 0, 0) = 1 - 2 * q;
            } else if (special) {
                const Rat q = rat_pow2(-(h - i + 1));
                if (t == 2 * (static_cast<std::uint32_t>(i) - 1)) {
                    p.at(s, t, 2, 1) = q;  // (1,0;1)
                    p.at(s, t, 1, 0) = q;  // (0,1;0)
                } else {
                    p.at(s, t, 2, 0) = q;  // (1,0;0)
                    p.at(s, t, 1, 1) = q;  // (0,1;1)
                }
                p.at(s, t, 0, 0) = 1 - 2 * q;
            } else {
                // Independent coupling of the marginals.
                const Rat b1 = bob1(t);
                for (int y = 0; y < 4; ++y) {
                    const Rat ay = alice(s, y);
                    if (ay == 0) continue;
                    p.at(s, t, y, 1) = ay * b1;
                    p.at(s, t, y, 0) = ay * (1 - b1);
                }
            }
        }
    return p;
}

Rat min_delta(const Strategy& p) {
    p.validate();
    const std::uint32_t n = p.N;
    const NsVars v(n);  // reuse marginal index helpers (joint part unused)

    // Variables: pA (4n), pB (2n), u (4n^2), w (2n^2), delta, slacks appended.
    const std::size_t off_a = 0, off_b = off_a + v.num_a;
    const std::size_t num_u = std::size_t{n} * n * 4;
    const std::size_t num_w = std::size_t{n} * n * 2;
    const std::size_t u0 = off_b + v.num_b;
    const std::size_t w0 = u0 + num_u;
    const std::size_t delta_var = w0 + num_w;
    const std::size_t num_core = delta_var + 1;
    // slack variables: one per inequality row
    const std::size_t num_slack = 2 * num_u + 2 * num_w + 2;

    LpProblem lp;
    lp.num_vars = num_core + num_slack;
    lp.obj.assign(lp.num_vars, Rat(0));
    lp.obj[delta_var] = -1;  // minimize delta

    std::size_t slack = num_core;
    auto a_idx = [&](std::uint32_t s, int y) { return off_a + std::size_t{s} * 4 + y; };
    auto b_idx = [&](std::uint32_t t, int z) { return off_b + std::size_t{t} * 2 + z; };
    auto u_idx = [&](std::uint32_t s, std::uint32_t t, int y) {
        return u0 + (std::size_t{s} * n + t) * 4 + y;
    };
    auto w_idx = [&](std::uint32_t s, std::uint32_t t, int z) {
        return w0 + (std::size_t{s} * n + t) * 2 + z;
    };

    for (std::uint32_t s = 0; s < n; ++s)
        for (std::uint32_t t = 0; t < n; ++t) {
            for (int y = 0; y < 4; ++y) {
                const Rat m = p.at(s, t, y, 0) + p.at(s, t, y, 1);
                // u >= m - pA  and  u >= pA - m
                lp.add_row({{u_idx(s, t, y), Rat(1)}, {a_idx(s, y), Rat(1)}, {slack++, Rat(-1)}},
                           m);
                lp.add_row({{u_idx(s, t, y), Rat(1)}, {a_idx(s, y), Rat(-1)}, {slack++, Rat(-1)}},
                           Rat(-m));
            }
            for (int z = 0; z < 2; ++z) {
                Rat m = 0;
                for (int y = 0; y < 4; ++y) m += p.at(s, t, y, z);
                lp.add_row({{w_idx(s, t, z), Rat(1)}, {b_idx(t, z), Rat(1)}, {slack++, Rat(-1)}},
                           m);
                lp.add_row({{w_idx(s, t, z), Rat(1)}, {b_idx(t, z), Rat(-1)}, {slack++, Rat(-1)}},
                           Rat(-m));
            }
        }
    for (std::uint32_t s = 0; s < n; ++s) {
        std::vector<std::pair<std::size_t, Rat>> row;
        for (int y = 0; y < 4; ++y) row.emplace_back(a_idx(s, y), Rat(1));
        lp.add_row(row, Rat(1));
    }
    for (std::uint32_t t = 0; t < n; ++t) {
        std::vector<std::pair<std::size_t, Rat>> row;
        for (int z = 0; z < 2; ++z) row.emplace_back(b_idx(t, z), Rat(1));
        lp.add_row(row, Rat(1));
    }
    // delta dominates both averaged total-variation sums.
    const Rat coef = Rat(1) / (2 * Rat(n) * Rat(n));
    {
        std::vector<std::pair<std::size_t, Rat>> row{{delta_var, Rat(1)}, {slack++, Rat(-1)}};
        for (std::uint32_t s = 0; s < n; ++s)
            for (std::uint32_t t = 0; t < n; ++t)
                for (int y = 0; y < 4; ++y) row.emplace_back(u_idx(s, t, y), -coef);
        lp.add_row(row, Rat(0));
    }
    {
        std::vector<std::pair<std::size_t, Rat>> row{{delta_var, Rat(1)}, {slack++, Rat(-1)}};
        for (std::uint32_t s = 0; s < n; ++s)
            for (std::uint32_t t = 0; t < n; ++t)
                for (int z = 0; z < 2; ++z) row.emplace_back(w_idx(s, t, z), -coef);
        lp.add_row(row, Rat(0));
    }

    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) throw std::runtime_error("min_delta: LP failed");
    return -sol.value;
}

std::pair<Strategy, Rat> nearest_ns(const Strategy& p) {
    p.validate();
    const std::uint32_t n = p.N;
    const NsVars v(n);
    const std::size_t u0 = v.total();
    const std::size_t num_u = v.num_p;
    const std::size_t num_slack = 2 * num_u;

    LpProblem lp;
    lp.num_vars = u0 + num_u + num_slack;
    lp.obj.assign(lp.num_vars, Rat(0));
    const Rat coef = Rat(1) / (2 * Rat(n) * Rat(n));
    for (std::size_t i = 0; i < num_u; ++i) lp.obj[u0 + i] = -coef;  // minimize distance

    add_ns_polytope_rows(lp, v);
    std::size_t slack = u0 + num_u;
    for (std::size_t i = 0; i < num_u; ++i) {
        // u_i >= p_i - phat_i  and  u_i >= phat_i - p_i
        lp.add_row({{u0 + i, Rat(1)}, {i, Rat(1)}, {slack++, Rat(-1)}}, p.p[i]);
        lp.add_row({{u0 + i, Rat(1)}, {i, Rat(-1)}, {slack++, Rat(-1)}}, Rat(-p.p[i]));
    }

    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) throw std::runtime_error("nearest_ns: LP failed");
    return {strategy_from_solution(n, sol.x), -sol.value};
}

SoundnessDiagnostics soundness_diagnostics(const Game& g, const Strategy& p,
                                           const CircuitValues& v) {
    if (g.N != p.N || v.v.size() != g.N)
        throw std::invalid_argument("soundness_diagnostics: dimension mismatch");
    const MarginalPair m = marginals(p);  // throws if signaling

    SoundnessDiagnostics d;
    d.eps_st.assign(std::size_t{g.N} * g.N, Rat(0));
    d.eps = 0;
    for (std::uint32_t s = 0; s < g.N; ++s)
        for (std::uint32_t t = 0; t < g.N; ++t) {
            Rat rej = 0;
            for (int y = 0; y < 4; ++y)
                for (int z = 0; z < 2; ++z)
                    if (p.at(s, t, y, z) != 0)
                        rej += (1 - g.r(s, t, y, z)) * p.at(s, t, y, z);
            d.eps_st[std::size_t{s} * g.N + t] = rej;
            d.eps += rej;
        }
    d.eps /= Rat(g.N) * Rat(g.N);

    d.delta_i.resize(g.N);
    for (std::uint32_t i = 0; i < g.N; ++i) d.delta_i[i] = m.b(i, 1 - v.v[i]);
    return d;
}

Strategy random_strategy(std::uint64_t seed, std::uint32_t n, int denominator) {
    if (denominator < 8) throw std::invalid_argument("random_strategy: denominator too small");
    std::mt19937_64 rng(seed);
    Strategy p(n);
    std::uniform_int_distribution<int> cut(0, denominator);
    for (std::uint32_t s = 0; s < n; ++s)
        for (std::uint32_t t = 0; t < n; ++t) {
            // Uniform composition of `denominator` into 8 parts via sorted cuts.
            std::vector<int> cuts{0, denominator};
            for (int j = 0; j < 7; ++j) cuts.push_back(cut(rng));
            std::sort(cuts.begin(), cuts.end());
            for (int c = 0; c < 8; ++c)
                p.at(s, t, c >> 1, c & 1) = rat(cuts[c + 1] - cuts[c], denominator);
        }
    return p;
}

Strategy random_ns_strategy(std::uint64_t seed, std::uint32_t n, int num_terms) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> weight(1, 16);
    std::uniform_int_distribution<int> ypick(0, 3), zpick(0, 1);
    Strategy p(n);
    Rat total = 0;
    for (int term = 0; term < num_terms; ++term) {
        std::vector<int> ya(n), zb(n);
        for (std::uint32_t i = 0; i < n; ++i) ya[i] = ypick(rng);
        for (std::uint32_t i = 0; i < n; ++i) zb[i] = zpick(rng);
        const Rat w(weight(rng));
        const Strategy det = deterministic_strategy(n, ya, zb);
        for (std::size_t i = 0; i < p.p.size(); ++i)
            if (det.p[i] != 0) p.p[i] += w;
        total += w;
    }
    for (auto& q : p.p) {
        q /= total;
        q.canonicalize();
    }
    return p;
}

}  // namespace nsg
