#pragma once

#include "impcomp/eigen.hpp"
#include "impcomp/model.hpp"
#include "impcomp/periodic_orbit.hpp"

#include <optional>

namespace impcomp {

/// Habitat-length and pulse-slope thresholds. An empty length means lambda1
/// stays nonnegative on the whole half line (no finite threshold) or the
/// orbit it is built on does not exist.
struct ThresholdSet {
    std::optional<double> r_star;   // r_*: lambda1(u alone) = 0
    std::optional<double> r_upper;  // r^*: u against V*
    std::optional<double> r_hat;    // r-hat_*: u against V_*
    std::optional<double> s_star;   // s_*
    std::optional<double> s_upper;  // s^*: v against U*

    double g_star = 0.0;                // g^*: u alone on (0, r0)
    std::optional<double> g_upper;      // g^**: u against V* on (0, r0)
    double g_lower = 0.0;               // g_*: u alone on the half line
    std::optional<double> g_lowlow;     // g_**: u against V* on the half line
    double p_star = 0.0;                // p^*: v alone on (0, s0)
    double p_lower = 0.0;               // p_*: v alone on the half line

    // Period means the lengths were built from.
    double mean_a_u_upper = 1.0;  // 1 - k mean(V*)
    double mean_a_u_hat = 1.0;    // 1 - k mean(V_*)
    double mean_a_v_upper = 1.0;  // 1 - h mean(U*)
};

inline ThresholdSet compute_thresholds(const ModelParams& p, const OrbitSet& orbits) {
    ThresholdSet t;
    const double g = p.pulse_u.slope_at_zero();
    const double q = p.pulse_v.slope_at_zero();
    const Length r0 = Length::finite(p.r0);
    const Length s0 = Length::finite(p.s0);
    const Length inf = Length::half_line();

    t.r_star = invert_length(p.D, p.alpha, p.gamma, 1.0, g, p.tau);
    t.s_star = invert_length(1.0, p.beta, 1.0, 1.0, q, p.tau);
    t.g_star = threshold_pulse(p.D, p.alpha, p.gamma, 1.0, p.tau, r0);
    t.g_lower = threshold_pulse(p.D, p.alpha, p.gamma, 1.0, p.tau, inf);
    t.p_star = threshold_pulse(1.0, p.beta, 1.0, 1.0, p.tau, s0);
    t.p_lower = threshold_pulse(1.0, p.beta, 1.0, 1.0, p.tau, inf);

    if (orbits.v_star) {
        t.mean_a_u_upper = 1.0 - p.k * orbits.v_star->mean;
        t.r_upper = invert_length(p.D, p.alpha, p.gamma, t.mean_a_u_upper, g, p.tau);
        t.g_upper = threshold_pulse(p.D, p.alpha, p.gamma, t.mean_a_u_upper, p.tau, r0);
        t.g_lowlow = threshold_pulse(p.D, p.alpha, p.gamma, t.mean_a_u_upper, p.tau, inf);
    } else {
        // No V*: v cannot persist, so u faces no lasting competition.
        t.mean_a_u_upper = 1.0;
        t.r_upper = t.r_star;
        t.g_upper = t.g_star;
        t.g_lowlow = t.g_lower;
    }
    if (orbits.v_lower) {
        t.mean_a_u_hat = 1.0 - p.k * orbits.v_lower->mean;
        t.r_hat = invert_length(p.D, p.alpha, p.gamma, t.mean_a_u_hat, g, p.tau);
    }
    if (orbits.u_star) {
        t.mean_a_v_upper = 1.0 - p.h * orbits.u_star->mean;
        t.s_upper = invert_length(1.0, p.beta, 1.0, t.mean_a_v_upper, q, p.tau);
    } else {
        t.mean_a_v_upper = 1.0;
        t.s_upper = t.s_star;
    }
    return t;
}

/// r_* < r-hat_* <= r^* and s_* <= s^* whenever the lengths involved exist.
inline bool threshold_ordering_holds(const ThresholdSet& t) {
    bool ok = true;
    if (t.r_star && t.r_hat) ok = ok && *t.r_star < *t.r_hat;
    if (t.r_hat && t.r_upper) ok = ok && *t.r_hat <= *t.r_upper * (1.0 + 1e-12);
    if (t.s_star && t.s_upper) ok = ok && *t.s_star <= *t.s_upper * (1.0 + 1e-12);
    return ok;
}

}  // namespace impcomp
