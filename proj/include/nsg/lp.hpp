#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nsg/rational.hpp"

namespace nsg {

// max obj.x  subject to  rows.x == rhs, x >= 0.
struct LpProblem {
    std::size_t num_vars = 0;
    std::vector<std::vector<Rat>> rows;  // each of length num_vars
    std::vector<Rat> rhs;
    std::vector<Rat> obj;

    // Appends a constraint sum coeff_i x_i == b. Sparse form: (index, coeff).
    void add_row(const std::vector<std::pair<std::size_t, Rat>>& terms, Rat b);
};

struct PivotStep {
    std::size_t iteration;
    std::size_t entering;
    std::size_t leaving;
    Rat objective;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rat value;
    std::vector<Rat> x;
};

// Dense two-phase primal simplex over exact rationals with Bland's rule
// (anti-cycling, deterministic). Desk-scale only.
LpSolution solve_lp(const LpProblem& prob, std::vector<PivotStep>* pivot_log = nullptr);

// All basic feasible solutions of the problem's feasible region, i.e. the
// vertices of {x >= 0 : Ax = b}, by exhaustive basis enumeration. Intended
// as an independent oracle for small problems only.
std::vector<std::vector<Rat>> enumerate_basic_feasible(const LpProblem& prob);

// Vertices of the polytope {x : ineq_rows.x <= ineq_rhs} by the double
// description method. Throws std::runtime_error if the polyhedron is
// unbounded or not full-dimensional enough for a pointed homogenization.
std::vector<std::vector<Rat>> enumerate_vertices_dd(
    const std::vector<std::vector<Rat>>& ineq_rows, const std::vector<Rat>& ineq_rhs);

// Vertices of {x >= 0 : Ax = b}: parameterizes the affine solution set
// exactly and runs the double description method on the reduced polytope.
std::vector<std::vector<Rat>> enumerate_vertices_eq(const LpProblem& prob);

}  // namespace nsg
