#pragma once

// Principal eigenvalue of  -D phi'' + alpha phi' = lambda phi  on (0, l)
// with phi'(0) = phi(l) = 0, and the impulsive periodic eigenvalue built
// from it. Everything here is a pure function of its arguments.

#include "impcomp/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace impcomp {

/// Habitat length, possibly the whole half line.
struct Length {
    double value = 0.0;
    bool infinite = false;

    static constexpr Length finite(double l) { return {l, false}; }
    static constexpr Length half_line() { return {std::numeric_limits<double>::infinity(), true}; }
};

enum class EigenCase {
    alpha_zero,               // closed form D*pi^2/(4 l^2)
    supercritical,            // alpha > 2D/l, exponential branch
    critical,                 // alpha == 2D/l, double root
    subcritical_or_negative,  // 0 < alpha < 2D/l or alpha < 0, tangent branch
};

inline std::string_view to_string(EigenCase c) {
    switch (c) {
    case EigenCase::alpha_zero: return "alpha_zero";
    case EigenCase::supercritical: return "supercritical";
    case EigenCase::critical: return "critical";
    case EigenCase::subcritical_or_negative: return "subcritical_or_negative";
    }
    return "?";
}

struct EigenResult {
    double value = 0.0;
    EigenCase case_tag = EigenCase::alpha_zero;
    std::optional<double> root;  // z1* or z2*; empty for the critical case
    double residual = 0.0;
};

namespace eigen_detail {

inline constexpr int kScanSteps = 256;
inline constexpr int kPositivitySamples = 64;
inline constexpr int kMaxBranches = 64;
inline constexpr int kMaxBisection = 300;

inline bool is_critical(double D, double alpha, double l) {
    return std::abs(alpha - 2.0 * D / l) <= 1e-12 * (1.0 + std::abs(alpha));
}

/// Supercritical branch, alpha > 2D/l. The root z1 of
///   exp(l z / D) = (alpha + z) / (alpha - z),  0 < z < alpha
/// approaches alpha exponentially fast in l, so the unknown is carried as
/// v = ln(alpha - z). In that variable the equation reads
///   q(v) = l z / D - ln(alpha + z) + v = 0,   z = alpha - e^v,
/// with q > 0 for z just above 0 and q -> -inf as z -> alpha.
inline EigenResult supercritical(double D, double alpha, double l) {
    auto q_of_z = [&](double z) {
        // q(z)/z, continuous at z = 0 where it equals l/D - 2/alpha.
        if (z <= 0.0) return l / D - 2.0 / alpha;
        if (z >= alpha) return -std::numeric_limits<double>::infinity();
        return (l * z / D - 2.0 * std::atanh(z / alpha)) / z;
    };

    // Coarse scan in z for the sign change.
    double z_lo = 0.0;
    double z_hi = alpha;
    double prev = q_of_z(0.0);
    for (int j = 1; j <= kScanSteps; ++j) {
        const double z = alpha * j / kScanSteps;
        const double cur = q_of_z(z);
        if ((prev > 0.0) != (cur > 0.0)) {
            z_lo = alpha * (j - 1) / kScanSteps;
            z_hi = z;
            break;
        }
        prev = cur;
    }

    // Bisection in v = ln(alpha - z).
    auto q_of_v = [&](double v) {
        const double w = std::exp(v);
        const double z = alpha - w;
        return l * z / D - std::log(2.0 * alpha - w) + v;
    };
    double v_hi = std::log(alpha - z_lo);  // q > 0 side (z small)
    double v_lo = z_hi >= alpha ? std::log(2.0 * alpha) - l * alpha / D - 1.0 : std::log(alpha - z_hi);
    if (!(q_of_v(v_lo) < 0.0)) {
        throw NumericalError("lambda_star: supercritical root not bracketed");
    }
    for (int it = 0; it < kMaxBisection; ++it) {
        const double mid = 0.5 * (v_lo + v_hi);
        if (mid == v_lo || mid == v_hi) break;
        if (q_of_v(mid) > 0.0) {
            v_hi = mid;
        } else {
            v_lo = mid;
        }
    }
    const double v = 0.5 * (v_lo + v_hi);
    const double w = std::exp(v);
    const double z = alpha - w;
    EigenResult out;
    out.case_tag = EigenCase::supercritical;
    out.root = z;
    out.value = w * (2.0 * alpha - w) / (4.0 * D);
    out.residual = std::abs(q_of_v(v));
    return out;
}

/// The eigenfunction of the tangent branch, up to a positive factor.
inline double tangent_eigenfunction(double D, double alpha, double z, double x) {
    const double arg = z * x / (2.0 * D);
    return std::exp(alpha * x / (2.0 * D)) * (std::cos(arg) - alpha / z * std::sin(arg));
}

/// Tangent branch: tan(l z / (2D)) = z / alpha, written without poles as
///   H(theta) = alpha sin(theta) - (2D/l) theta cos(theta) = 0,
/// theta = l z / (2D). Branches theta in ((j - 1/2) pi, (j + 1/2) pi) are
/// scanned in order; the first root whose eigenfunction is positive wins.
inline EigenResult subcritical(double D, double alpha, double l) {
    const double c = 2.0 * D / l;
    auto H = [&](double theta) {
        // Divided by theta so that the branch-0 scan starts from a nonzero
        // value; theta > 0 throughout so signs are unchanged.
        if (theta <= 0.0) return alpha - c;
        return alpha * std::sin(theta) / theta - c * std::cos(theta);
    };
    // Only the trigonometric factor can change sign; the exponential one
    // underflows for long habitats with alpha < 0.
    auto positive_on_domain = [&](double z) {
        for (int i = 0; i < kPositivitySamples; ++i) {
            const double arg = z * (l * i / kPositivitySamples) / (2.0 * D);
            if (!(std::cos(arg) - alpha / z * std::sin(arg) > 0.0)) return false;
        }
        return true;
    };

    for (int j = 0; j < kMaxBranches; ++j) {
        const double a = j == 0 ? 0.0 : (j - 0.5) * std::numbers::pi;
        const double b = (j + 0.5) * std::numbers::pi;
        double prev_t = a;
        double prev = H(a);
        for (int i = 1; i <= kScanSteps; ++i) {
            const double t = a + (b - a) * i / kScanSteps;
            const double cur = H(t);
            if (prev != 0.0 && (prev > 0.0) != (cur > 0.0)) {
                double lo = prev_t;
                double hi = t;
                const bool lo_positive = prev > 0.0;
                for (int it = 0; it < kMaxBisection; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid == lo || mid == hi) break;
                    if ((H(mid) > 0.0) == lo_positive) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                const double theta = 0.5 * (lo + hi);
                const double z = theta * c;
                if (positive_on_domain(z)) {
                    EigenResult out;
                    out.case_tag = EigenCase::subcritical_or_negative;
                    out.root = z;
                    out.value = (alpha * alpha + z * z) / (4.0 * D);
                    out.residual = std::abs(alpha * std::sin(theta) - z * std::cos(theta)) /
                                   (std::abs(alpha) + z);
                    return out;
                }
            }
            prev_t = t;
            prev = cur;
        }
    }
    throw NumericalError("lambda_star: no admissible root of the tangent equation found");
}

}  // namespace eigen_detail

/// Principal eigenvalue lambda*(D, alpha, (0, l)).
inline EigenResult lambda_star(double D, double alpha, double l) {
    if (!(D > 0.0) || !std::isfinite(D)) throw ValidationError("lambda_star: D must be > 0");
    if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("lambda_star: l must be finite and > 0");
    if (!std::isfinite(alpha)) throw ValidationError("lambda_star: alpha must be finite");

    if (alpha == 0.0) {
        EigenResult out;
        out.case_tag = EigenCase::alpha_zero;
        out.value = D * std::numbers::pi * std::numbers::pi / (4.0 * l * l);
        out.root = std::numbers::pi * D / l;
        return out;
    }
    if (eigen_detail::is_critical(D, alpha, l)) {
        EigenResult out;
        out.case_tag = EigenCase::critical;
        out.value = alpha * alpha / (4.0 * D);
        return out;
    }
    if (alpha > 2.0 * D / l) return eigen_detail::supercritical(D, alpha, l);
    return eigen_detail::subcritical(D, alpha, l);
}

/// lim_{l -> inf} lambda*(D, alpha, (0, l)).
///
/// For alpha <= 0 this is alpha^2/(4D). For alpha > 0 the supercritical root
/// z1* tends to alpha, not to 0, and the limit is 0: phi == 1 solves the
/// equation with phi'(0) = 0, and the Dirichlet end is pushed out of reach
/// by the weight exp(-alpha x / D).
inline double lambda_star_limit(double D, double alpha) {
    if (!(D > 0.0)) throw ValidationError("lambda_star_limit: D must be > 0");
    return alpha > 0.0 ? 0.0 : alpha * alpha / (4.0 * D);
}

inline double lambda_star_value(double D, double alpha, Length l) {
    return l.infinite ? lambda_star_limit(D, alpha) : lambda_star(D, alpha, l.value).value;
}

/// Periodic-impulsive principal eigenvalue
///   lambda1 = lambda*(D, alpha, l) - ln(slope)/tau - gamma * mean_a.
inline double lambda_one(double D, double alpha, double gamma_coef, double mean_a, double slope,
                         double tau, Length l) {
    if (!(slope > 0.0)) throw ValidationError("lambda_one: pulse slope must be > 0");
    if (!(tau > 0.0)) throw ValidationError("lambda_one: tau must be > 0");
    return lambda_star_value(D, alpha, l) - std::log(slope) / tau - gamma_coef * mean_a;
}

/// The habitat length at which lambda1 changes sign, or nullopt when
/// lambda1 stays nonnegative on the whole half line.
inline std::optional<double> invert_length(double D, double alpha, double gamma_coef, double mean_a,
                                           double slope, double tau) {
    auto f = [&](double l) {
        return lambda_one(D, alpha, gamma_coef, mean_a, slope, tau, Length::finite(l));
    };
    if (lambda_one(D, alpha, gamma_coef, mean_a, slope, tau, Length::half_line()) >= 0.0) {
        return std::nullopt;
    }
    double lo = 1.0;
    while (!(f(lo) > 0.0)) {
        lo *= 0.5;
        if (lo < 1e-12) throw NumericalError("invert_length: no positive lambda1 near l = 0");
    }
    double hi = 2.0 * lo;
    while (!(f(hi) < 0.0)) {
        hi *= 2.0;
        if (hi > 1e12) throw NumericalError("invert_length: lambda1 does not turn negative");
    }
    // Monotone in l, so plain bisection. Iterate well past the 1e-8 target so
    // that lambda1 at the returned length is close to round-off.
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// The pulse slope G'(0) at which lambda1 vanishes on the given habitat.
inline double threshold_pulse(double D, double alpha, double gamma_coef, double mean_a, double tau,
                              Length l) {
    if (!(tau > 0.0)) throw ValidationError("threshold_pulse: tau must be > 0");
    return std::exp(tau * (lambda_star_value(D, alpha, l) - gamma_coef * mean_a));
}

}  // namespace impcomp
