#pragma once

#include "impcomp/errors.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace impcomp {

/// Solves a tridiagonal system in place (Thomas algorithm, no pivoting).
///
/// lower[i] multiplies x[i-1] (lower[0] unused), upper[i] multiplies x[i+1]
/// (upper[n-1] unused). rhs is overwritten with the solution. Intended for
/// diagonally dominant systems; a vanishing pivot is reported, not repaired.
inline void solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                              const std::vector<double>& upper, std::vector<double>& rhs,
                              std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n) {
        throw ValidationError("solve_tridiagonal: size mismatch");
    }
    if (n == 0) return;
    scratch.resize(n);
    double pivot = diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("solve_tridiagonal: zero pivot");
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i] * scratch[i];
        if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("solve_tridiagonal: zero pivot");
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
}

inline void solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                              const std::vector<double>& upper, std::vector<double>& rhs) {
    std::vector<double> scratch;
    solve_tridiagonal(lower, diag, upper, rhs, scratch);
}

}  // namespace impcomp
