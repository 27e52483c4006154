#include "conespec/linear_feasibility.hpp"

#include <algorithm>
#include <cmath>

#include "conespec/errors.hpp"

namespace conespec {

namespace {
constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;
}  // namespace

std::optional<std::vector<double>> feasible_point(int n, const std::vector<LinearConstraint>& constraints) {
    if (n < 1) throw input_error("feasible_point: dimension must be positive");
    const int m = static_cast<int>(constraints.size());
    if (m == 0) return std::vector<double>(n, 0.0);

    // Columns: x+ (n), x- (n), one slack/surplus per inequality, one
    // artificial per row. Rows are A z = b with b >= 0.
    int n_slack = 0;
    for (const auto& c : constraints)
        if (c.rel != Relation::Eq) ++n_slack;
    const int cols = 2 * n + n_slack + m;
    const int width = cols + 1;  // last column is the rhs

    std::vector<double> tab(static_cast<std::size_t>(m + 1) * width, 0.0);
    auto at = [&](int r, int c) -> double& { return tab[static_cast<std::size_t>(r) * width + c]; };

    std::vector<int> basis(m);
    int slack_next = 2 * n;
    for (int r = 0; r < m; ++r) {
        const auto& c = constraints[r];
        if (static_cast<int>(c.coeffs.size()) != n) throw input_error("feasible_point: constraint width mismatch");
        double sign = 1.0;
        double rhs = c.rhs;
        // slack sign before normalizing the rhs
        double slack_sign = 0.0;
        if (c.rel == Relation::Ge) slack_sign = -1.0;
        if (c.rel == Relation::Le) slack_sign = 1.0;
        if (rhs < 0) {
            sign = -1.0;
            rhs = -rhs;
            slack_sign = -slack_sign;
        }
        for (int j = 0; j < n; ++j) {
            at(r, j) = sign * c.coeffs[j];
            at(r, n + j) = -sign * c.coeffs[j];
        }
        if (c.rel != Relation::Eq) {
            at(r, slack_next) = slack_sign;
            ++slack_next;
        }
        at(r, 2 * n + n_slack + r) = 1.0;  // artificial
        at(r, cols) = rhs;
        basis[r] = 2 * n + n_slack + r;
    }

    // Objective row: minimize the sum of artificials. Expressed in terms of
    // the nonbasic columns by subtracting every constraint row.
    for (int c = 0; c <= cols; ++c) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += at(r, c);
        at(m, c) = -s;
    }
    for (int r = 0; r < m; ++r) at(m, basis[r]) = 0.0;

    const long max_iters = 4000L + 200L * static_cast<long>(m) * cols;
    for (long iter = 0; iter < max_iters; ++iter) {
        // Bland: first column with a negative reduced cost.
        int enter = -1;
        for (int c = 0; c < cols; ++c) {
            if (at(m, c) < -kPivotTol) {
                enter = c;
                break;
            }
        }
        if (enter < 0) break;

        int leave = -1;
        double best_ratio = 0.0;
        for (int r = 0; r < m; ++r) {
            double a = at(r, enter);
            if (a > kPivotTol) {
                double ratio = at(r, cols) / a;
                if (leave < 0 || ratio < best_ratio - 1e-15 ||
                    (std::abs(ratio - best_ratio) <= 1e-15 && basis[r] < basis[leave])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) break;  // unbounded direction; cannot happen for phase 1 but guard anyway

        double piv = at(leave, enter);
        for (int c = 0; c <= cols; ++c) at(leave, c) /= piv;
        for (int r = 0; r <= m; ++r) {
            if (r == leave) continue;
            double f = at(r, enter);
            if (f == 0.0) continue;
            for (int c = 0; c <= cols; ++c) at(r, c) -= f * at(leave, c);
        }
        basis[leave] = enter;
    }

    double infeas = -at(m, cols);
    if (infeas > kFeasTol) return std::nullopt;

    std::vector<double> x(n, 0.0);
    for (int r = 0; r < m; ++r) {
        int b = basis[r];
        if (b < n)
            x[b] += at(r, cols);
        else if (b < 2 * n)
            x[b - n] -= at(r, cols);
    }
    return x;
}

int row_rank(std::vector<std::vector<double>> rows, double tol) {
    if (rows.empty()) return 0;
    const int m = static_cast<int>(rows.size());
    const int n = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        double best = tol;
        for (int r = rank; r < m; ++r) {
            if (std::abs(rows[r][col]) > best) {
                best = std::abs(rows[r][col]);
                piv = r;
            }
        }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = rank + 1; r < m; ++r) {
            double f = rows[r][col] / rows[rank][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

}  // namespace conespec
