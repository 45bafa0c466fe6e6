#pragma once

// tau-periodic solutions of the impulsive logistic ODE
//   U' = gamma U (a(t) - U)  on (n tau, (n+1) tau],   U(n tau^+) = G(U(n tau)).
// Within a period the equation is Bernoulli and solved exactly:
//   U(t) = U0+ E(t) / (1 + gamma U0+ I(t)),  E = exp(gamma int_0^t a),  I = int_0^t E,
// so only the quadratures on the sample grid carry error.

#include "impcomp/errors.hpp"
#include "impcomp/model.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace impcomp {

struct PeriodicOrbit {
    double tau = 1.0;
    double gamma = 1.0;
    PulseMap pulse;
    std::vector<double> t;      // M+1 uniform nodes on [0, tau]
    std::vector<double> value;  // value[0] = fixed_point (pre-pulse), value[M] ~= fixed_point
    std::vector<double> rate;   // a(t_j); rate[0] is the right limit at 0
    double fixed_point = 0.0;   // U(0) = U(tau)
    double post_pulse = 0.0;    // U(0^+) = G(fixed_point)
    double mean = 0.0;          // (1/tau) int_0^tau U, using U(0^+) at the left end

    std::size_t intervals() const { return t.empty() ? 0 : t.size() - 1; }
    /// Right-continuous sample: the post-pulse value at node 0.
    double right_value(std::size_t j) const { return j == 0 ? post_pulse : value[j]; }
};

namespace orbit_detail {

/// Cumulative composite Simpson integral of samples f on a uniform grid with
/// an even number of intervals. Even nodes get the plain Simpson sum; odd
/// nodes add the three-point partial-panel rule to the preceding even node.
inline std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> F(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        if (j % 2 == 0) {
            F[j] = F[j - 2] + h / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
        } else {
            F[j] = F[j - 1] + h / 12.0 * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1]);
        }
    }
    return F;
}

inline double simpson(const std::vector<double>& f, double h) {
    double s = f.front() + f.back();
    for (std::size_t j = 1; j + 1 < f.size(); ++j) s += (j % 2 ? 4.0 : 2.0) * f[j];
    return s * h / 3.0;
}

inline void check_grid(int M) {
    if (M < 2 || M % 2 != 0) throw ValidationError("periodic orbit: M must be even and >= 2");
}

}  // namespace orbit_detail

/// Simpson mean over one period, using the post-pulse value at t = 0.
inline double orbit_mean(const PeriodicOrbit& o) {
    if (o.value.size() < 3) throw ValidationError("orbit_mean: orbit has no samples");
    std::vector<double> f = o.value;
    f[0] = o.post_pulse;
    return orbit_detail::simpson(f, o.tau / static_cast<double>(o.intervals())) / o.tau;
}

/// The orbit for a rate sampled at M+1 uniform nodes on [0, tau].
inline PeriodicOrbit periodic_orbit_sampled(double gamma_coef, const std::vector<double>& rate,
                                            const PulseMap& pulse, double tau) {
    if (!(gamma_coef > 0.0)) throw ValidationError("periodic_orbit: gamma must be > 0");
    if (!(tau > 0.0)) throw ValidationError("periodic_orbit: tau must be > 0");
    if (!(pulse.slope_at_zero() > 0.0)) throw ValidationError("periodic_orbit: pulse slope must be > 0");
    const int M = static_cast<int>(rate.size()) - 1;
    orbit_detail::check_grid(M);
    const double h = tau / M;

    const double mean_rate = orbit_detail::simpson(rate, h) / tau;
    const double growth = -std::log(pulse.slope_at_zero()) / tau - gamma_coef * mean_rate;
    if (!(growth < 0.0)) {
        throw ValidationError("periodic_orbit: persistence condition violated (-ln G'(0)/tau - gamma*mean(a) = " +
                              std::to_string(growth) + " >= 0)");
    }

    const std::vector<double> A = orbit_detail::cumulative_simpson(rate, h);
    std::vector<double> E(A.size());
    for (std::size_t j = 0; j < A.size(); ++j) E[j] = std::exp(gamma_coef * A[j]);
    const std::vector<double> I = orbit_detail::cumulative_simpson(E, h);
    const double E_end = E.back();
    const double I_end = I.back();

    auto period_map = [&](double u0) {
        const double up = pulse(u0);
        return up * E_end / (1.0 + gamma_coef * up * I_end);
    };

    double u0 = 0.0;
    if (pulse.is_linear()) {
        const double c = pulse.slope_at_zero();
        u0 = (c * E_end - 1.0) / (gamma_coef * c * I_end);
    } else {
        // The period map is increasing and concave with a unique positive
        // fixed point; half-damped iteration from above converges.
        u0 = 1.0;
        for (std::size_t j = 0; j < rate.size(); ++j) u0 = std::max(u0, rate[j]);
        bool converged = false;
        for (int it = 0; it < 10000; ++it) {
            const double next = 0.5 * u0 + 0.5 * period_map(u0);
            if (std::abs(next - u0) <= 1e-15 * std::abs(next)) {
                u0 = next;
                converged = true;
                break;
            }
            u0 = next;
        }
        if (!converged) throw NumericalError("periodic_orbit: fixed-point iteration did not converge in 1e4 steps");
    }
    if (!(u0 > 0.0) || !std::isfinite(u0)) throw NumericalError("periodic_orbit: nonpositive fixed point");

    PeriodicOrbit o;
    o.tau = tau;
    o.gamma = gamma_coef;
    o.pulse = pulse;
    o.rate = rate;
    o.fixed_point = u0;
    o.post_pulse = pulse(u0);
    o.t.resize(rate.size());
    o.value.resize(rate.size());
    for (std::size_t j = 0; j < rate.size(); ++j) {
        o.t[j] = h * static_cast<double>(j);
        o.value[j] = o.post_pulse * E[j] / (1.0 + gamma_coef * o.post_pulse * I[j]);
    }
    o.t.back() = tau;
    o.value[0] = u0;
    o.mean = orbit_mean(o);
    return o;
}

/// The orbit for a rate function a(t), sampled on M intervals.
inline PeriodicOrbit periodic_orbit(double gamma_coef, const std::function<double(double)>& rate,
                                    const PulseMap& pulse, double tau, int M = 2048) {
    orbit_detail::check_grid(M);
    std::vector<double> a(static_cast<std::size_t>(M) + 1);
    for (int j = 0; j <= M; ++j) a[static_cast<std::size_t>(j)] = rate(tau * j / M);
    return periodic_orbit_sampled(gamma_coef, a, pulse, tau);
}

/// Constant-rate orbit from the explicit formula
///   w(0) = A (e^{gamma A tau} - 1/g) / (e^{gamma A tau} - 1),
///   w(t) = A w0+ e^{gamma A t} / (A + w0+ (e^{gamma A t} - 1)),  w0+ = g w(0).
inline PeriodicOrbit pulsed_logistic_closed_form(double gamma_coef, double A, double slope, double tau,
                                                 int M = 2048) {
    if (!(gamma_coef > 0.0) || !(A > 0.0) || !(slope > 0.0) || !(tau > 0.0)) {
        throw ValidationError("pulsed_logistic_closed_form: gamma, A, slope, tau must be > 0");
    }
    orbit_detail::check_grid(M);
    const double growth = std::exp(gamma_coef * A * tau);
    if (!(growth * slope > 1.0)) {
        throw ValidationError("pulsed_logistic_closed_form: e^{gamma A tau} * slope must exceed 1");
    }
    const double w0 = A * (growth - 1.0 / slope) / (growth - 1.0);
    PeriodicOrbit o;
    o.tau = tau;
    o.gamma = gamma_coef;
    o.pulse = PulseMap::linear(slope);
    o.fixed_point = w0;
    o.post_pulse = slope * w0;
    const auto n = static_cast<std::size_t>(M) + 1;
    o.t.resize(n);
    o.value.resize(n);
    o.rate.assign(n, A);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = tau * static_cast<double>(j) / M;
        const double e = std::exp(gamma_coef * A * t);
        o.t[j] = t;
        o.value[j] = A * o.post_pulse * e / (A + o.post_pulse * (e - 1.0));
    }
    o.value[0] = w0;
    o.mean = orbit_mean(o);
    return o;
}

enum class Species { u, v };

/// U_* (rate 1 + eps1 - k V*) or V_* (rate 1 + eps2 - h U*), sampled on the
/// competitor orbit's own grid.
inline PeriodicOrbit competitor_suppressed_orbit(const ModelParams& p, Species which,
                                                 const PeriodicOrbit& other) {
    if (other.value.size() < 3) throw ValidationError("competitor_suppressed_orbit: empty competitor orbit");
    const Perturbation eps = which == Species::u ? p.eps_u() : p.eps_v();
    const double coupling = which == Species::u ? p.k : p.h;
    std::vector<double> rate(other.t.size());
    for (std::size_t j = 0; j < rate.size(); ++j) {
        rate[j] = 1.0 + eps(other.t[j]) - coupling * other.right_value(j);
    }
    if (which == Species::u) return periodic_orbit_sampled(p.gamma, rate, p.pulse_u, p.tau);
    return periodic_orbit_sampled(1.0, rate, p.pulse_v, p.tau);
}

/// Whether -ln(slope)/tau - gamma*mean_rate < 0, i.e. a positive orbit exists.
inline bool persists(double gamma_coef, double mean_rate, double slope, double tau) {
    return -std::log(slope) / tau - gamma_coef * mean_rate < 0.0;
}

/// Every orbit the thresholds need. An orbit is empty when its persistence
/// condition fails; a competitor-suppressed orbit is also empty when the
/// competitor orbit is.
struct OrbitSet {
    std::optional<PeriodicOrbit> u_star;   // U*
    std::optional<PeriodicOrbit> v_star;   // V*
    std::optional<PeriodicOrbit> u_lower;  // U_*, suppressed by V*
    std::optional<PeriodicOrbit> v_lower;  // V_*, suppressed by U*
};

inline OrbitSet compute_orbits(const ModelParams& p, int M = 2048) {
    OrbitSet s;
    const double g = p.pulse_u.slope_at_zero();
    const double q = p.pulse_v.slope_at_zero();
    if (persists(p.gamma, 1.0, g, p.tau)) {
        const Perturbation e = p.eps_u();
        s.u_star = periodic_orbit(p.gamma, [e](double t) { return 1.0 + e(t); }, p.pulse_u, p.tau, M);
    }
    if (persists(1.0, 1.0, q, p.tau)) {
        const Perturbation e = p.eps_v();
        s.v_star = periodic_orbit(1.0, [e](double t) { return 1.0 + e(t); }, p.pulse_v, p.tau, M);
    }
    if (s.v_star && persists(p.gamma, 1.0 - p.k * s.v_star->mean, g, p.tau)) {
        s.u_lower = competitor_suppressed_orbit(p, Species::u, *s.v_star);
    }
    if (s.u_star && persists(1.0, 1.0 - p.h * s.u_star->mean, q, p.tau)) {
        s.v_lower = competitor_suppressed_orbit(p, Species::v, *s.u_star);
    }
    return s;
}

}  // namespace impcomp
