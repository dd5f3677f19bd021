#include "divaudit/lp.hpp"

#include <stdexcept>

namespace divaudit {

void LinearFeasibilitySystem::add_ge(std::vector<Rational> coefficients, Rational bound) {
    if (coefficients.size() != num_vars) {
        throw std::logic_error("coefficient row width does not match num_vars");
    }
    rows.push_back(std::move(coefficients));
    rhs.push_back(std::move(bound));
}

FeasibilityOutcome solve_linear_feasibility(const LinearFeasibilitySystem& system) {
    const size_t n = system.num_vars;
    const size_t k = system.rows.size();
    FeasibilityOutcome out;
    if (k == 0) {
        out.feasible = true;
        out.point.assign(n, Rational(0));
        return out;
    }

    // Standard form: x = p - m with p, m >= 0; every row gets a surplus (or
    // slack after negation when rhs < 0) plus an artificial, so the initial
    // basis is the identity on the artificial block.
    // Columns: [p(n) | m(n) | s(k) | a(k) | rhs]
    const size_t cols = 2 * n + 2 * k;
    const size_t rhs_col = cols;
    std::vector<bool> negated(k, false);
    std::vector<std::vector<Rational>> T(k, std::vector<Rational>(cols + 1, Rational(0)));
    for (size_t i = 0; i < k; ++i) {
        Rational sign = system.rhs[i] < 0 ? Rational(-1) : Rational(1);
        negated[i] = system.rhs[i] < 0;
        for (size_t j = 0; j < n; ++j) {
            T[i][j] = sign * system.rows[i][j];
            T[i][n + j] = -T[i][j];
        }
        T[i][2 * n + i] = negated[i] ? Rational(1) : Rational(-1);  // slack / surplus
        T[i][2 * n + k + i] = 1;                                     // artificial
        T[i][rhs_col] = sign * system.rhs[i];
    }

    std::vector<size_t> basis(k);
    for (size_t i = 0; i < k; ++i) basis[i] = 2 * n + k + i;

    // Phase-1 objective: minimize the artificial sum. Reduced costs start as
    // c_j - sum over rows (artificials all basic with cost 1).
    std::vector<Rational> reduced(cols, Rational(0));
    Rational objective(0);
    for (size_t j = 0; j < cols; ++j) {
        Rational c = j >= 2 * n + k ? Rational(1) : Rational(0);
        Rational colsum(0);
        for (size_t i = 0; i < k; ++i) colsum += T[i][j];
        reduced[j] = c - colsum;
    }
    for (size_t i = 0; i < k; ++i) objective += T[i][rhs_col];

    while (true) {
        // Bland's rule: the lowest-index improving column.
        size_t enter = cols;
        for (size_t j = 0; j < cols; ++j) {
            if (reduced[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == cols) break;

        size_t leave = k;
        Rational best_ratio(0);
        for (size_t i = 0; i < k; ++i) {
            if (T[i][enter] <= 0) continue;
            Rational ratio = T[i][rhs_col] / T[i][enter];
            if (leave == k || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == k) {
            // Phase-1 objective is bounded below by zero; an unbounded
            // improving direction cannot occur.
            throw std::logic_error("phase-1 simplex detected an unbounded direction");
        }

        Rational pivot = T[leave][enter];
        for (size_t j = 0; j <= cols; ++j) T[leave][j] /= pivot;
        for (size_t i = 0; i < k; ++i) {
            if (i == leave || T[i][enter] == 0) continue;
            Rational factor = T[i][enter];
            for (size_t j = 0; j <= cols; ++j) T[i][j] -= factor * T[leave][j];
        }
        Rational factor = reduced[enter];
        if (factor != 0) {
            for (size_t j = 0; j < cols; ++j) reduced[j] -= factor * T[leave][j];
            objective -= factor * T[leave][rhs_col];
        }
        basis[leave] = enter;
    }

    if (objective == 0) {
        out.feasible = true;
        std::vector<Rational> values(cols, Rational(0));
        for (size_t i = 0; i < k; ++i) values[basis[i]] = T[i][rhs_col];
        out.point.resize(n);
        for (size_t j = 0; j < n; ++j) out.point[j] = values[j] - values[n + j];
        return out;
    }

    // Infeasible: recover the dual from the artificial columns (initial
    // identity basis), then undo the row negations.
    out.feasible = false;
    out.farkas.resize(k);
    for (size_t i = 0; i < k; ++i) {
        Rational y = Rational(1) - reduced[2 * n + k + i];
        out.farkas[i] = negated[i] ? -y : y;
    }
    return out;
}

}  // namespace divaudit
