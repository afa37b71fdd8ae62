#include "nsg/lp.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace nsg {

void LpProblem::add_row(const std::vector<std::pair<std::size_t, Rat>>& terms, Rat b) {
    std::vector<Rat> row(num_vars, Rat(0));
    for (const auto& [idx, coeff] : terms) {
        if (idx >= num_vars) throw std::invalid_argument("add_row: index out of range");
        row[idx] += coeff;
    }
    rows.push_back(std::move(row));
    rhs.push_back(std::move(b));
}

namespace {

// Dense simplex tableau. Columns 0..num_cols-1 are variables, the last
// column is the rhs. The objective row tracks reduced costs for a
// maximization problem.
struct Tableau {
    std::size_t m = 0, num_cols = 0;
    std::vector<std::vector<Rat>> row;  // m rows, each num_cols + 1 wide
    std::vector<Rat> obj;               // num_cols + 1 wide; obj[num_cols] = -objective value
    std::vector<std::size_t> basis;

    void pivot(std::size_t pr, std::size_t pc) {
        std::vector<Rat>& prow = row[pr];
        const Rat inv = 1 / prow[pc];
        for (auto& v : prow) v *= inv;
        Rat tmp;
        for (std::size_t r = 0; r <= m; ++r) {
            std::vector<Rat>& target = (r == m) ? obj : row[r];
            if (r == pr || target[pc] == 0) continue;
            const Rat f = target[pc];
            for (std::size_t j = 0; j <= num_cols; ++j) {
                if (prow[j] == 0) continue;
                tmp = f * prow[j];
                target[j] -= tmp;
            }
            target[pc] = 0;  // clear exactly, guards against missed cancellation
        }
        basis[pr] = pc;
    }

    // Bland's rule: entering = lowest-index improving column, leaving = lowest
    // basic variable among minimum-ratio rows. Returns false when optimal.
    bool bland_step(std::vector<PivotStep>* log, std::size_t& iteration) {
        std::size_t enter = num_cols;
        for (std::size_t j = 0; j < num_cols; ++j)
            if (obj[j] > 0) {
                enter = j;
                break;
            }
        if (enter == num_cols) return false;
        std::size_t leave_row = m;
        Rat best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (row[i][enter] <= 0) continue;
            Rat ratio = row[i][num_cols] / row[i][enter];
            if (leave_row == m || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave_row])) {
                leave_row = i;
                best_ratio = ratio;
            }
        }
        if (leave_row == m) throw std::runtime_error("simplex: unbounded");
        if (log) log->push_back({iteration, enter, basis[leave_row], Rat(-obj[num_cols])});
        ++iteration;
        pivot(leave_row, enter);
        return true;
    }
};

}  // namespace

LpSolution solve_lp(const LpProblem& prob, std::vector<PivotStep>* pivot_log) {
    const std::size_t m = prob.rows.size();
    const std::size_t n = prob.num_vars;
    if (prob.rhs.size() != m || prob.obj.size() != n)
        throw std::invalid_argument("solve_lp: inconsistent problem sizes");

    // Phase 1: artificial basis, rhs made nonnegative.
    Tableau t;
    t.m = m;
    t.num_cols = n + m;
    t.row.assign(m, std::vector<Rat>(t.num_cols + 1, Rat(0)));
    t.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool neg = prob.rhs[i] < 0;
        for (std::size_t j = 0; j < n; ++j)
            if (prob.rows[i][j] != 0) t.row[i][j] = neg ? Rat(-prob.rows[i][j]) : prob.rows[i][j];
        t.row[i][n + i] = 1;
        t.row[i][t.num_cols] = neg ? Rat(-prob.rhs[i]) : prob.rhs[i];
        t.basis[i] = n + i;
    }
    t.obj.assign(t.num_cols + 1, Rat(0));
    // maximize -(sum of artificials); reduced costs relative to the artificial basis
    for (std::size_t j = 0; j < n; ++j) {
        Rat colsum = 0;
        for (std::size_t i = 0; i < m; ++i) colsum += t.row[i][j];
        t.obj[j] = colsum;
    }
    {
        Rat s = 0;
        for (std::size_t i = 0; i < m; ++i) s += t.row[i][t.num_cols];
        t.obj[t.num_cols] = s;  // -objective = sum of artificials
    }

    std::size_t iteration = 0;
    while (t.bland_step(pivot_log, iteration)) {}
    if (t.obj[t.num_cols] != 0) return LpSolution{LpStatus::Infeasible, Rat(0), {}};

    // Drive leftover artificial variables out of the (degenerate) basis.
    std::vector<std::size_t> keep_rows;
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis[i] < n) {
            keep_rows.push_back(i);
            continue;
        }
        std::size_t pc = n;
        for (std::size_t j = 0; j < n; ++j)
            if (t.row[i][j] != 0) {
                pc = j;
                break;
            }
        if (pc == n) continue;  // redundant constraint row
        t.pivot(i, pc);
        keep_rows.push_back(i);
    }

    // Phase 2 tableau: structural columns only, surviving rows.
    Tableau t2;
    t2.m = keep_rows.size();
    t2.num_cols = n;
    t2.row.reserve(t2.m);
    for (std::size_t i : keep_rows) {
        std::vector<Rat> r(n + 1);
        for (std::size_t j = 0; j < n; ++j) r[j] = t.row[i][j];
        r[n] = t.row[i][t.num_cols];
        t2.row.push_back(std::move(r));
        t2.basis.push_back(t.basis[i]);
    }
    // Reduced costs relative to the phase-1 basis; obj[n] ends up holding
    // minus the current objective value.
    t2.obj.assign(n + 1, Rat(0));
    for (std::size_t j = 0; j < n; ++j) t2.obj[j] = prob.obj[j];
    for (std::size_t i = 0; i < t2.m; ++i) {
        const Rat& cb = prob.obj[t2.basis[i]];
        if (cb == 0) continue;
        for (std::size_t j = 0; j <= n; ++j)
            if (t2.row[i][j] != 0) t2.obj[j] -= cb * t2.row[i][j];
    }

    while (t2.bland_step(pivot_log, iteration)) {}

    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.x.assign(n, Rat(0));
    for (std::size_t i = 0; i < t2.m; ++i) sol.x[t2.basis[i]] = t2.row[i][n];
    sol.value = -t2.obj[n];
    return sol;
}

namespace {

// Reduced row echelon form of [A | b]; returns pivot column per row.
// Throws nothing; inconsistent systems are signaled via the bool.
struct Rref {
    std::vector<std::vector<Rat>> rows;  // each n+1 wide
    std::vector<std::size_t> pivot_col;
    bool consistent = true;
};

Rref rref(const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b, std::size_t n) {
    Rref out;
    std::vector<std::vector<Rat>> work;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<Rat> r(n + 1);
        for (std::size_t j = 0; j < n; ++j) r[j] = a[i][j];
        r[n] = b[i];
        work.push_back(std::move(r));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < work.size(); ++col) {
        std::size_t piv = work.size();
        for (std::size_t i = rank; i < work.size(); ++i)
            if (work[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv == work.size()) continue;
        std::swap(work[rank], work[piv]);
        const Rat inv = 1 / work[rank][col];
        for (auto& v : work[rank]) v *= inv;
        for (std::size_t i = 0; i < work.size(); ++i) {
            if (i == rank || work[i][col] == 0) continue;
            const Rat f = work[i][col];
            for (std::size_t j = col; j <= n; ++j)
                if (work[rank][j] != 0) work[i][j] -= f * work[rank][j];
            work[i][col] = 0;
        }
        out.pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t i = rank; i < work.size(); ++i)
        if (work[i][n] != 0) out.consistent = false;
    work.resize(rank);
    out.rows = std::move(work);
    return out;
}

}  // namespace

std::vector<std::vector<Rat>> enumerate_basic_feasible(const LpProblem& prob) {
    const std::size_t n = prob.num_vars;
    const Rref rr = rref(prob.rows, prob.rhs, n);
    if (!rr.consistent) return {};
    const std::size_t m = rr.rows.size();
    std::vector<std::vector<Rat>> vertices;

    std::vector<std::size_t> comb(m);
    for (std::size_t i = 0; i < m; ++i) comb[i] = i;
    if (m == 0 || m > n) return {};
    while (true) {
        // Solve the basis system B x_B = b exactly.
        std::vector<std::vector<Rat>> sys(m, std::vector<Rat>(m + 1));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t c = 0; c < m; ++c) sys[i][c] = rr.rows[i][comb[c]];
            sys[i][m] = rr.rows[i][n];
        }
        bool singular = false;
        for (std::size_t col = 0; col < m && !singular; ++col) {
            std::size_t piv = m;
            for (std::size_t i = col; i < m; ++i)
                if (sys[i][col] != 0) {
                    piv = i;
                    break;
                }
            if (piv == m) {
                singular = true;
                break;
            }
            std::swap(sys[col], sys[piv]);
            const Rat inv = 1 / sys[col][col];
            for (auto& v : sys[col]) v *= inv;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == col || sys[i][col] == 0) continue;
                const Rat f = sys[i][col];
                for (std::size_t j = col; j <= m; ++j) sys[i][j] -= f * sys[col][j];
            }
        }
        if (!singular) {
            bool feasible = true;
            for (std::size_t i = 0; i < m; ++i)
                if (sys[i][m] < 0) {
                    feasible = false;
                    break;
                }
            if (feasible) {
                std::vector<Rat> x(n, Rat(0));
                for (std::size_t i = 0; i < m; ++i) x[comb[i]] = sys[i][m];
                vertices.push_back(std::move(x));
            }
        }
        // next combination
        std::size_t i = m;
        while (i > 0) {
            --i;
            if (comb[i] != i + n - m) {
                ++comb[i];
                for (std::size_t j = i + 1; j < m; ++j) comb[j] = comb[j - 1] + 1;
                break;
            }
            if (i == 0) {
                std::sort(vertices.begin(), vertices.end());
                vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
                return vertices;
            }
        }
    }
}

namespace {

using Ray = std::vector<Rat>;  // homogeneous coordinates (w, x1..xq)

// Scale to integer entries with content 1; sign fixed by first nonzero > 0
// being unnecessary here (rays are one-sided), so only positive scaling.
void normalize_ray(Ray& r) {
    mpz_class den_lcm = 1;
    for (const Rat& v : r)
        if (v != 0) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den().get_mpz_t());
    mpz_class num_gcd = 0;
    for (Rat& v : r) {
        v *= Rat(den_lcm);
        v.canonicalize();
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_num().get_mpz_t());
    }
    if (num_gcd > 1)
        for (Rat& v : r) {
            v /= Rat(num_gcd);
            v.canonicalize();
        }
}

Rat dot(const std::vector<Rat>& a, const Ray& r) {
    Rat s = 0;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j] != 0 && r[j] != 0) s += a[j] * r[j];
    return s;
}

struct ActiveSet {
    std::vector<std::uint64_t> bits;
    void resize(std::size_t n) { bits.assign((n + 63) / 64, 0); }
    void set(std::size_t i) { bits[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool contains(const ActiveSet& other) const {  // other subseteq this
        for (std::size_t w = 0; w < bits.size(); ++w)
            if ((other.bits[w] & ~bits[w]) != 0) return false;
        return true;
    }
    static ActiveSet intersect(const ActiveSet& a, const ActiveSet& b) {
        ActiveSet r;
        r.bits.resize(a.bits.size());
        for (std::size_t w = 0; w < a.bits.size(); ++w) r.bits[w] = a.bits[w] & b.bits[w];
        return r;
    }
};

}  // namespace

std::vector<std::vector<Rat>> enumerate_vertices_dd(
    const std::vector<std::vector<Rat>>& ineq_rows, const std::vector<Rat>& ineq_rhs) {
    const std::size_t q = ineq_rows.empty() ? 0 : ineq_rows[0].size();
    const std::size_t dim = q + 1;
    // Homogenized rows h with h.(w,x) <= 0; last row is w >= 0.
    std::vector<std::vector<Rat>> hrows;
    for (std::size_t i = 0; i < ineq_rows.size(); ++i) {
        std::vector<Rat> h(dim);
        h[0] = -ineq_rhs[i];
        for (std::size_t j = 0; j < q; ++j) h[j + 1] = ineq_rows[i][j];
        hrows.push_back(std::move(h));
    }
    {
        std::vector<Rat> h(dim, Rat(0));
        h[0] = -1;
        hrows.push_back(std::move(h));
    }
    const std::size_t nrows = hrows.size();

    // Greedy full-rank subset for a simplicial initial cone.
    std::vector<std::size_t> base;
    {
        std::vector<std::vector<Rat>> elim;
        for (std::size_t i = 0; i < nrows && base.size() < dim; ++i) {
            std::vector<Rat> cand = hrows[i];
            for (std::size_t r = 0; r < elim.size(); ++r) {
                // elim[r] is normalized with leading 1 at its pivot
                std::size_t pc = 0;
                while (elim[r][pc] == 0) ++pc;
                if (cand[pc] != 0) {
                    const Rat f = cand[pc];
                    for (std::size_t j = 0; j < dim; ++j) cand[j] -= f * elim[r][j];
                }
            }
            std::size_t pc = dim;
            for (std::size_t j = 0; j < dim; ++j)
                if (cand[j] != 0) {
                    pc = j;
                    break;
                }
            if (pc == dim) continue;
            const Rat inv = 1 / cand[pc];
            for (auto& v : cand) v *= inv;
            elim.push_back(std::move(cand));
            base.push_back(i);
        }
        if (base.size() < dim)
            throw std::runtime_error("vertex enumeration: polyhedron is unbounded or degenerate");
    }

    // Initial rays: columns of -B^{-1} where B stacks the base rows.
    std::vector<Ray> rays;
    {
        // Invert B by Gauss-Jordan on [B | -I].
        const std::size_t d = dim;
        std::vector<std::vector<Rat>> aug(d, std::vector<Rat>(2 * d, Rat(0)));
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) aug[i][j] = hrows[base[i]][j];
            aug[i][d + i] = -1;
        }
        for (std::size_t col = 0; col < d; ++col) {
            std::size_t piv = col;
            while (aug[piv][col] == 0) ++piv;
            std::swap(aug[col], aug[piv]);
            const Rat inv = 1 / aug[col][col];
            for (auto& v : aug[col]) v *= inv;
            for (std::size_t i = 0; i < d; ++i) {
                if (i == col || aug[i][col] == 0) continue;
                const Rat f = aug[i][col];
                for (std::size_t j = col; j < 2 * d; ++j) aug[i][j] -= f * aug[col][j];
            }
        }
        for (std::size_t c = 0; c < d; ++c) {
            Ray r(d);
            for (std::size_t i = 0; i < d; ++i) r[i] = aug[i][d + c];
            normalize_ray(r);
            rays.push_back(std::move(r));
        }
    }

    // Process constraints in order; base rows are already tight on the
    // initial rays, so inserting them is a no-op, but they still enter the
    // processed set for activity bookkeeping.
    std::vector<std::size_t> processed;
    auto active_set_of = [&](const Ray& r) {
        ActiveSet a;
        a.resize(nrows);
        for (std::size_t idx : processed)
            if (dot(hrows[idx], r) == 0) a.set(idx);
        return a;
    };

    std::vector<ActiveSet> active;
    for (std::size_t i : base) processed.push_back(i);
    for (const Ray& r : rays) active.push_back(active_set_of(r));

    for (std::size_t i = 0; i < nrows; ++i) {
        if (std::find(base.begin(), base.end(), i) != base.end()) continue;
        const std::vector<Rat>& h = hrows[i];
        std::vector<Rat> sigma(rays.size());
        bool any_pos = false;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            sigma[r] = dot(h, rays[r]);
            if (sigma[r] > 0) any_pos = true;
        }
        processed.push_back(i);
        if (!any_pos) {
            for (std::size_t r = 0; r < rays.size(); ++r)
                if (sigma[r] == 0) active[r].set(i);
            continue;
        }
        std::vector<Ray> next;
        std::vector<ActiveSet> next_active;
        std::vector<std::size_t> pos, neg;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            if (sigma[r] > 0) {
                pos.push_back(r);
            } else {
                if (sigma[r] == 0) active[r].set(i);
                neg.push_back(r);  // includes tight rays
                next.push_back(rays[r]);
                next_active.push_back(active[r]);
            }
        }
        for (std::size_t pi : pos)
            for (std::size_t ni : neg) {
                if (sigma[ni] == 0) continue;
                // Combinatorial adjacency test.
                const ActiveSet common = ActiveSet::intersect(active[pi], active[ni]);
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size(); ++r) {
                    if (r == pi || r == ni) continue;
                    if (active[r].contains(common)) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                Ray combo(dim);
                for (std::size_t j = 0; j < dim; ++j)
                    combo[j] = sigma[pi] * rays[ni][j] - sigma[ni] * rays[pi][j];
                normalize_ray(combo);
                next.push_back(combo);
                next_active.push_back(active_set_of(combo));
            }
        rays = std::move(next);
        active = std::move(next_active);
        if (rays.empty()) return {};  // empty polytope
    }

    std::vector<std::vector<Rat>> vertices;
    for (const Ray& r : rays) {
        if (r[0] == 0) {
            bool zero = true;
            for (const Rat& v : r)
                if (v != 0) zero = false;
            if (zero) continue;
            throw std::runtime_error("vertex enumeration: polytope is unbounded");
        }
        std::vector<Rat> x(q);
        for (std::size_t j = 0; j < q; ++j) {
            x[j] = r[j + 1] / r[0];
            x[j].canonicalize();
        }
        vertices.push_back(std::move(x));
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

std::vector<std::vector<Rat>> enumerate_vertices_eq(const LpProblem& prob) {
    const std::size_t n = prob.num_vars;
    const Rref rr = rref(prob.rows, prob.rhs, n);
    if (!rr.consistent) return {};
    const std::size_t rank = rr.rows.size();

    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : rr.pivot_col) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < n; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    const std::size_t q = free_cols.size();

    // x_pivot = beta - Gamma u with u the free coordinates; x >= 0 becomes
    // Gamma u <= beta (pivot rows) and -u <= 0 (free rows).
    std::vector<std::vector<Rat>> D;
    std::vector<Rat> d;
    for (std::size_t i = 0; i < rank; ++i) {
        std::vector<Rat> row(q);
        for (std::size_t f = 0; f < q; ++f) row[f] = rr.rows[i][free_cols[f]];
        D.push_back(std::move(row));
        d.push_back(rr.rows[i][n]);
    }
    for (std::size_t f = 0; f < q; ++f) {
        std::vector<Rat> row(q, Rat(0));
        row[f] = -1;
        D.push_back(std::move(row));
        d.push_back(Rat(0));
    }

    std::vector<std::vector<Rat>> uverts = enumerate_vertices_dd(D, d);
    std::vector<std::vector<Rat>> vertices;
    for (const auto& u : uverts) {
        std::vector<Rat> x(n, Rat(0));
        for (std::size_t f = 0; f < q; ++f) x[free_cols[f]] = u[f];
        for (std::size_t i = 0; i < rank; ++i) {
            Rat v = rr.rows[i][n];
            for (std::size_t f = 0; f < q; ++f)
                if (rr.rows[i][free_cols[f]] != 0) v -= rr.rows[i][free_cols[f]] * u[f];
            x[rr.pivot_col[i]] = v;
        }
        vertices.push_back(std::move(x));
    }
    std::sort(vertices.begin(), vertices.end());
    return vertices;
}

}  // namespace nsg
