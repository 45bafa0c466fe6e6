#pragma once

// Decision layer: assumption checks, finite-horizon outcome classification
// from simulated fronts and densities, and empirical critical values.

#include "impcomp/eigen.hpp"
#include "impcomp/model.hpp"
#include "impcomp/periodic_orbit.hpp"
#include "impcomp/stefan_solver.hpp"
#include "impcomp/thresholds.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace impcomp {

/// The two persistence inequalities for each species alone and against the
/// competitor, evaluated exactly as displayed (with alpha^2/(4D) and
/// beta^2/4 as the half-line eigenvalue). A flag is true when the value is < 0.
struct AssumptionReport {
    double a1_u_value = 0.0;
    double a1_v_value = 0.0;
    double a2_u_value = 0.0;
    double a2_v_value = 0.0;
    bool a1_u = false;
    bool a1_v = false;
    bool a2_u = false;
    bool a2_v = false;

    bool all() const { return a1_u && a1_v && a2_u && a2_v; }
};

inline AssumptionReport check_assumptions(const ModelParams& p) {
    const double lg = std::log(p.pulse_u.slope_at_zero());
    const double lh = std::log(p.pulse_v.slope_at_zero());
    AssumptionReport a;
    a.a1_u_value = p.alpha * p.alpha / (4.0 * p.D) - lg / p.tau - p.gamma;
    a.a1_v_value = p.beta * p.beta / 4.0 - lh / p.tau - 1.0;
    a.a2_u_value = p.alpha * p.alpha / (4.0 * p.D) - lg / p.tau + p.gamma * (p.k - 1.0) + p.k * p.gamma * lh / p.tau;
    a.a2_v_value = p.beta * p.beta / 4.0 - lh / p.tau + (p.h - 1.0) + p.h * lg / (p.gamma * p.tau);
    a.a1_u = a.a1_u_value < 0.0;
    a.a1_v = a.a1_v_value < 0.0;
    a.a2_u = a.a2_u_value < 0.0;
    a.a2_v = a.a2_v_value < 0.0;
    return a;
}

enum class OutcomeTag { co_extinction, coexistence, u_wins, v_wins, undetermined };

inline std::string_view to_string(OutcomeTag t) {
    switch (t) {
    case OutcomeTag::co_extinction: return "co_extinction";
    case OutcomeTag::coexistence: return "coexistence";
    case OutcomeTag::u_wins: return "u_wins";
    case OutcomeTag::v_wins: return "v_wins";
    case OutcomeTag::undetermined: return "undetermined";
    }
    return "?";
}

enum class Fate { spreading, vanished, pending };

inline std::string_view to_string(Fate f) {
    switch (f) {
    case Fate::spreading: return "spreading";
    case Fate::vanished: return "vanished";
    case Fate::pending: return "pending";
    }
    return "?";
}

struct SpeciesEvidence {
    Fate fate = Fate::pending;
    double front = 0.0;
    double max_density = 0.0;
    double recent_speed = 0.0;   // mean front speed over the last (up to) 5 periods
    double period_growth = 0.0;  // front increment over the last period
    bool stalled = false;        // period_growth < eps_stall * tau
    std::string basis;           // which rule fixed the fate
};

struct Outcome {
    OutcomeTag tag = OutcomeTag::undetermined;
    std::string reason;  // why the tag was chosen; always set for undetermined
    SpeciesEvidence u, v;
    double t_final = 0.0;
};

namespace classify_detail {

/// Front position at time t by linear interpolation in the recorded series.
inline double front_at(const Trajectory& tr, double t, bool first_species) {
    const auto& f = tr.fronts;
    auto val = [&](const FrontSample& s) { return first_species ? s.r : s.s; };
    if (t <= f.front().t) return val(f.front());
    if (t >= f.back().t) return val(f.back());
    std::size_t lo = 0, hi = f.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (f[mid].t <= t ? lo : hi) = mid;
    }
    const double w = (t - f[lo].t) / (f[hi].t - f[lo].t);
    return (1.0 - w) * val(f[lo]) + w * val(f[hi]);
}

inline SpeciesEvidence evidence(const Trajectory& tr, bool first, const std::vector<double>& density,
                                std::optional<double> lower, std::optional<double> upper,
                                const SolverConfig& cfg) {
    SpeciesEvidence e;
    const double t1 = tr.fronts.back().t;
    const double t0 = tr.fronts.front().t;
    e.front = first ? tr.fronts.back().r : tr.fronts.back().s;
    e.max_density = solver_detail::max_of(density);
    const double span = std::min(5.0 * tr.tau, t1 - t0);
    e.recent_speed = span > 0.0 ? (e.front - front_at(tr, t1 - span, first)) / span : 0.0;
    const double one = std::min(tr.tau, t1 - t0);
    e.period_growth = one > 0.0 ? e.front - front_at(tr, t1 - one, first) : 0.0;
    e.stalled = e.period_growth < cfg.eps_stall * tr.tau;

    if (e.max_density < cfg.eps_vanish) {
        e.fate = Fate::vanished;
        e.basis = "max density below eps_vanish";
    } else if (e.front >= cfg.L_max && e.recent_speed > cfg.eps_stall) {
        e.fate = Fate::spreading;
        e.basis = "front beyond L_max and still moving";
    } else if (upper && e.front > *upper) {
        e.fate = Fate::spreading;
        e.basis = "front beyond the competitive threshold";
    } else {
        e.fate = Fate::pending;
        if (lower && e.front <= *lower) {
            e.basis = e.stalled ? "front stalled below the lone threshold" : "front below the lone threshold";
        } else if (upper) {
            e.basis = "front between the lone and competitive thresholds";
        } else {
            e.basis = "front beyond the lone threshold, no finite competitive threshold";
        }
    }
    return e;
}

}  // namespace classify_detail

/// Finite-horizon classification.
///
/// A species spreads if its front passed L_max while still moving, or passed
/// its competitive threshold (r^* or s^*). It vanished if its maximum density
/// fell below eps_vanish. A vanished species whose front still passed its
/// lone threshold (r_* or s_*) implies the other one wins even before that
/// one has been seen to spread. Everything else is undetermined.
inline Outcome classify_outcome(const Trajectory& tr, const ThresholdSet& th, const SolverConfig& cfg) {
    if (tr.fronts.empty()) throw ValidationError("classify_outcome: empty trajectory");
    Outcome o;
    o.t_final = tr.fronts.back().t;
    o.u = classify_detail::evidence(tr, true, tr.final_state.u, th.r_star, th.r_upper, cfg);
    o.v = classify_detail::evidence(tr, false, tr.final_state.v, th.s_star, th.s_upper, cfg);
    const Fate fu = o.u.fate;
    const Fate fv = o.v.fate;

    if (fu == Fate::spreading && fv == Fate::spreading) {
        o.tag = OutcomeTag::coexistence;
        o.reason = "both fronts spreading";
    } else if (fu == Fate::spreading && fv == Fate::vanished) {
        o.tag = OutcomeTag::u_wins;
        o.reason = "u spreading, v vanished";
    } else if (fu == Fate::vanished && fv == Fate::spreading) {
        o.tag = OutcomeTag::v_wins;
        o.reason = "v spreading, u vanished";
    } else if (fu == Fate::vanished && fv == Fate::vanished) {
        o.tag = OutcomeTag::co_extinction;
        o.reason = "both densities below eps_vanish";
    } else if (fu == Fate::vanished && th.r_star && o.u.front > *th.r_star) {
        o.tag = OutcomeTag::v_wins;
        o.reason = "u vanished with its front past r_*";
    } else if (fv == Fate::vanished && th.s_star && o.v.front > *th.s_star) {
        o.tag = OutcomeTag::u_wins;
        o.reason = "v vanished with its front past s_*";
    } else {
        o.tag = OutcomeTag::undetermined;
        o.reason = "horizon too short: u " + std::string(to_string(fu)) + " (" + o.u.basis + "), v " +
                   std::string(to_string(fv)) + " (" + o.v.basis + ")";
    }
    return o;
}

/// Thresholds for a parameter set, with orbits on the default grid.
inline ThresholdSet thresholds_for(const ModelParams& p, int M = 2048) {
    return compute_thresholds(p, compute_orbits(p, M));
}

/// Simulates and classifies in one go.
inline Outcome run_and_classify(const ModelParams& p, const SolverConfig& cfg, const InitialData& ic) {
    const Trajectory tr = simulate(p, cfg, ic);
    return classify_outcome(tr, thresholds_for(p), cfg);
}

struct CriticalValue {
    double value = 0.0;  // bracket midpoint
    double lo = 0.0;     // largest probed value that did not spread
    double hi = 0.0;     // smallest probed value that spread
    int probes = 0;
};

namespace classify_detail {

/// Bisection on a monotone spread/no-spread predicate to 1% relative width.
inline CriticalValue bisect_fate(const std::function<bool(double)>& spreads, double lo, double hi,
                                 const std::string& what) {
    if (!(lo > 0.0) || !(hi > lo)) throw ValidationError(what + ": need 0 < lo < hi");
    CriticalValue cv;
    const bool s_lo = spreads(lo);
    const bool s_hi = spreads(hi);
    cv.probes = 2;
    if (s_lo && s_hi) throw NumericalError(what + ": spreads for all values in range");
    if (!s_lo && !s_hi) throw NumericalError(what + ": vanishes for all values in range");
    if (s_lo && !s_hi) throw NumericalError(what + ": outcome decreases along the range");
    while (hi - lo > 0.01 * hi) {
        const double mid = 0.5 * (lo + hi);
        ++cv.probes;
        (spreads(mid) ? hi : lo) = mid;
    }
    cv.lo = lo;
    cv.hi = hi;
    cv.value = 0.5 * (lo + hi);
    return cv;
}

/// Whether u spreads in a run, treating undetermined runs as errors.
inline bool u_spreads(const ModelParams& p, const SolverConfig& cfg, const InitialData& ic, bool single) {
    if (single) {
        const Trajectory tr = simulate_single(p, cfg, ic.u);
        ModelParams q = p;
        q.k = 0.0;
        const ThresholdSet th = thresholds_for(q);
        const SpeciesEvidence e = evidence(tr, true, tr.final_state.u, th.r_star, th.r_star, cfg);
        if (e.fate == Fate::pending) throw NumericalError("critical value probe undetermined: " + e.basis);
        return e.fate == Fate::spreading;
    }
    const Outcome o = run_and_classify(p, cfg, ic);
    if (o.tag == OutcomeTag::undetermined) {
        if (o.u.fate != Fate::pending) return o.u.fate == Fate::spreading;
        throw NumericalError("critical value probe undetermined: " + o.reason);
    }
    return o.tag == OutcomeTag::u_wins || o.tag == OutcomeTag::coexistence;
}

}  // namespace classify_detail

/// Empirical sharp expanding capability mu1* (which = u) or mu2* (which = v).
/// With single set, v is removed and u evolves alone.
inline CriticalValue critical_mu(const ModelParams& p, Species which, double lo, double hi, const SolverConfig& cfg,
                                 const InitialData& ic, bool single = false) {
    auto spreads = [&](double mu) {
        ModelParams q = p;
        if (which == Species::u) {
            q.mu1 = mu;
            return classify_detail::u_spreads(q, cfg, ic, single);
        }
        q.mu2 = mu;
        const Outcome o = run_and_classify(q, cfg, ic);
        if (o.v.fate == Fate::pending) throw NumericalError("critical value probe undetermined: " + o.reason);
        return o.v.fate == Fate::spreading;
    };
    return classify_detail::bisect_fate(spreads, lo, hi, "critical_mu");
}

/// Empirical minimal linear pulse slope on u at which u spreads.
inline CriticalValue critical_pulse(const ModelParams& p, double lo, double hi, const SolverConfig& cfg,
                                    const InitialData& ic, bool single = false) {
    auto spreads = [&](double c) {
        ModelParams q = p;
        q.pulse_u = PulseMap::linear(c);
        return classify_detail::u_spreads(q, cfg, ic, single);
    };
    return classify_detail::bisect_fate(spreads, lo, hi, "critical_pulse");
}

/// Half-line lambda1 of each species as tau -> 0+ and tau -> infinity, and
/// the outcome each sign pattern points to. "unpulsed" means both species can
/// persist alone and the outcome follows the pulse-free competition.
struct TauLimitPrediction {
    double u_small = 0.0, v_small = 0.0;  // tau -> 0+
    double u_large = 0.0, v_large = 0.0;  // tau -> infinity
    double u_large_displayed = 0.0;       // alpha^2/(4D) - gamma
    double v_large_displayed = 0.0;       // beta^2/4 - 1
    std::string small_tau;
    std::string large_tau;
    bool caveat = false;  // nonlinear pulses or positive advection: signs only
};

inline TauLimitPrediction tau_limit_predictions(const ModelParams& p) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    TauLimitPrediction t;
    const double g = p.pulse_u.slope_at_zero();
    const double q = p.pulse_v.slope_at_zero();
    const double lu = lambda_star_limit(p.D, p.alpha);
    const double lv = lambda_star_limit(1.0, p.beta);
    auto small = [](double base, double slope) { return slope < 1.0 ? inf : slope > 1.0 ? -inf : base; };
    t.u_small = small(lu - p.gamma, g);
    t.v_small = small(lv - 1.0, q);
    t.u_large = lu - p.gamma;
    t.v_large = lv - 1.0;
    t.u_large_displayed = p.alpha * p.alpha / (4.0 * p.D) - p.gamma;
    t.v_large_displayed = p.beta * p.beta / 4.0 - 1.0;
    auto predict = [](double lu_, double lv_) -> std::string {
        const bool u_ok = lu_ < 0.0;
        const bool v_ok = lv_ < 0.0;
        if (u_ok && v_ok) return "unpulsed";
        if (u_ok) return "u_wins";
        if (v_ok) return "v_wins";
        return "co_extinction";
    };
    t.small_tau = predict(t.u_small, t.v_small);
    t.large_tau = predict(t.u_large, t.v_large);
    t.caveat = !p.pulse_u.is_linear() || !p.pulse_v.is_linear() || p.alpha > 0.0 || p.beta > 0.0;
    return t;
}

}  // namespace impcomp
