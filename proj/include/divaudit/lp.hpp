#pragma once

#include <vector>

#include "divaudit/rational.hpp"

namespace divaudit {

// A system of weak linear inequalities A x >= b over free variables.
// Strict inequalities are normalized to gap-1 weak ones by the callers
// (positive scaling preserves every strict inequality).
struct LinearFeasibilitySystem {
    size_t num_vars = 0;
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;

    void add_ge(std::vector<Rational> coefficients, Rational bound);
};

struct FeasibilityOutcome {
    bool feasible = false;
    // Feasible: a point satisfying every row.
    std::vector<Rational> point;
    // Infeasible: a Farkas certificate y >= 0 with y^T A = 0 and y^T b > 0.
    std::vector<Rational> farkas;
};

// Complete exact method: phase-1 simplex with Bland's rule over rationals.
FeasibilityOutcome solve_linear_feasibility(const LinearFeasibilitySystem& system);

}  // namespace divaudit
