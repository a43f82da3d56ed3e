#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace chshlab {

/// Default threshold below which a tableau entry is treated as zero.
inline constexpr double simplex_pivot_tol = 1e-9;

struct Phase1Solution {
    /// Leftover artificial mass; 0 (up to round-off) means Ax = b, x >= 0 is solvable.
    double residual = 0.0;
    /// Values of the original variables at the phase-1 optimum.
    std::vector<double> x;
};

/// Phase-1 simplex for the linear feasibility problem Ax = b, x >= 0, with A
/// given row-major. Minimizes the sum of one artificial variable per row using
/// Bland's rule (smallest-index entering column, smallest-basis-index ratio
/// ties), which cannot cycle, so the fixed iteration cap is never the exit
/// path for well-formed inputs.
inline Phase1Solution phase1_simplex(std::size_t rows, std::size_t cols, std::vector<double> a,
                                     std::vector<double> b, double pivot_tol = simplex_pivot_tol) {
    if (a.size() != rows * cols) throw std::invalid_argument("matrix size must be rows * cols");
    if (b.size() != rows) throw std::invalid_argument("right-hand side size must be rows");

    for (std::size_t i = 0; i < rows; ++i) {
        if (b[i] < 0.0) {
            b[i] = -b[i];
            for (std::size_t j = 0; j < cols; ++j) a[i * cols + j] = -a[i * cols + j];
        }
    }

    const std::size_t total = cols + rows;
    std::vector<double> tableau(rows * total, 0.0);
    std::vector<double> rhs = b;
    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) tableau[i * total + j] = a[i * cols + j];
        tableau[i * total + cols + i] = 1.0;
        basis[i] = cols + i;
    }

    std::vector<double> reduced(total, 0.0);
    for (std::size_t j = 0; j < total; ++j) {
        double column_sum = 0.0;
        for (std::size_t i = 0; i < rows; ++i) column_sum += tableau[i * total + j];
        reduced[j] = (j < cols ? 0.0 : 1.0) - column_sum;
    }

    const std::size_t max_iters = 16 * (rows + 1) * (total + 1);
    for (std::size_t iter = 0;; ++iter) {
        if (iter >= max_iters) throw std::runtime_error("simplex iteration cap exceeded");

        std::size_t enter = total;
        for (std::size_t j = 0; j < total; ++j) {
            if (reduced[j] < -pivot_tol) {
                enter = j;
                break;
            }
        }
        if (enter == total) break;

        std::size_t leave = rows;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            const double coeff = tableau[i * total + enter];
            if (coeff <= pivot_tol) continue;
            const double ratio = rhs[i] / coeff;
            if (leave == rows || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == rows) throw std::runtime_error("phase-1 objective is unbounded");

        const double pivot = tableau[leave * total + enter];
        for (std::size_t j = 0; j < total; ++j) tableau[leave * total + j] /= pivot;
        rhs[leave] /= pivot;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == leave) continue;
            const double factor = tableau[i * total + enter];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < total; ++j) tableau[i * total + j] -= factor * tableau[leave * total + j];
            rhs[i] -= factor * rhs[leave];
        }
        const double obj_factor = reduced[enter];
        for (std::size_t j = 0; j < total; ++j) reduced[j] -= obj_factor * tableau[leave * total + j];
        basis[leave] = enter;
    }

    // The phase-1 objective is read off the final tableau rather than tracked
    // incrementally, so round-off cannot accumulate over pivots.
    double objective = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (basis[i] >= cols && rhs[i] > 0.0) objective += rhs[i];
    }

    Phase1Solution solution;
    solution.residual = objective;
    solution.x.assign(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        if (basis[i] < cols) solution.x[basis[i]] = rhs[i] < 0.0 ? 0.0 : rhs[i];
    }
    return solution;
}

}  // namespace chshlab
