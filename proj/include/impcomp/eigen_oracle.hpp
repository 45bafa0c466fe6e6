#pragma once

// Finite-difference cross-check for lambda_star. Shares nothing with
// eigen.hpp: the operator -D phi'' + alpha phi' is discretized with centered
// differences on x_i = i*l/N, i = 0..N-1, a ghost node for phi'(0) = 0 and
// phi(l) = 0 at i = N. The smallest eigenvalue comes from inverse iteration.

#include "impcomp/errors.hpp"
#include "impcomp/tridiagonal.hpp"

#include <cmath>
#include <vector>

namespace impcomp {

inline double eigen_oracle(double D, double alpha, double l, int N) {
    if (N < 100) throw ValidationError("eigen_oracle: N must be >= 100");
    if (!(D > 0.0) || !(l > 0.0)) throw ValidationError("eigen_oracle: D and l must be > 0");
    const double h = l / N;
    if (!(std::abs(alpha) * h / (2.0 * D) < 1.0)) {
        throw ValidationError("eigen_oracle: grid too coarse for the advection (cell Peclet >= 1)");
    }
    const double dd = D / (h * h);
    const double ad = alpha / (2.0 * h);
    const double lo = -dd - ad;  // coefficient of phi_{i-1}
    const double up = -dd + ad;  // coefficient of phi_{i+1}

    // Symmetrize by a diagonal similarity; off-diagonals become
    // -sqrt(lower_{i+1} * upper_i), both factors negative here.
    const auto n = static_cast<std::size_t>(N);
    std::vector<double> diag(n, 2.0 * dd), off(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double u_i = i == 0 ? -2.0 * dd : up;
        off[i] = -std::sqrt(lo * u_i);
    }
    std::vector<double> lower(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        upper[i] = off[i];
        lower[i + 1] = off[i];
    }

    auto apply = [&](const std::vector<double>& x) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += off[i - 1] * x[i - 1];
            if (i + 1 < n) s += off[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    };
    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        s = std::sqrt(s);
        for (double& v : x) v /= s;
    };

    std::vector<double> x(n, 1.0), scratch;
    normalize(x);
    double rq = 0.0;
    for (int it = 0; it < 2000; ++it) {
        std::vector<double> y = x;
        solve_tridiagonal(lower, diag, upper, y, scratch);
        normalize(y);
        const std::vector<double> Ay = apply(y);
        double next = 0.0;
        for (std::size_t i = 0; i < n; ++i) next += y[i] * Ay[i];
        x.swap(y);
        // Round-off in the quotient scales with the largest entry, dd.
        if (it > 2 && std::abs(next - rq) <= 1e-13 * std::abs(next) + 1e-15 * dd) return next;
        rq = next;
    }
    throw NumericalError("eigen_oracle: inverse iteration did not converge");
}

}  // namespace impcomp
