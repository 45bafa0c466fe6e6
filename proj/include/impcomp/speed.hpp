#pragma once

#include "impcomp/classify.hpp"
#include "impcomp/errors.hpp"
#include "impcomp/model.hpp"
#include "impcomp/stefan_solver.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace impcomp {

/// (front(t) - front(t - tau)) / tau from the recorded series, interpolating
/// linearly between samples.
inline double average_speed(const Trajectory& tr, double t, double tau, Species which = Species::u) {
    if (tr.fronts.empty()) throw ValidationError("average_speed: empty trajectory");
    if (!(tau > 0.0)) throw ValidationError("average_speed: tau must be > 0");
    const double t0 = tr.fronts.front().t;
    const double t1 = tr.fronts.back().t;
    const double slack = 1e-9 * std::max(1.0, std::abs(t1));
    if (t - tau < t0 - slack || t > t1 + slack) {
        throw ValidationError("average_speed: [t - tau, t] outside the recorded range");
    }
    const bool first = which == Species::u;
    return (classify_detail::front_at(tr, t, first) - classify_detail::front_at(tr, t - tau, first)) / tau;
}

/// Recorded Stefan speed at the sample nearest to t.
inline double instantaneous_speed(const Trajectory& tr, double t, Species which = Species::u) {
    if (tr.fronts.empty()) throw ValidationError("instantaneous_speed: empty trajectory");
    const FrontSample* best = &tr.fronts.front();
    for (const auto& f : tr.fronts) {
        if (std::abs(f.t - t) < std::abs(best->t - t)) best = &f;
    }
    return which == Species::u ? best->rprime : best->sprime;
}

/// 2 sqrt(D (gamma + ln G'(0)/tau)) + alpha for u; the v analogue uses
/// (1, 1, H'(0), beta). The period mean of the growth rate is 1.
inline double speed_bound_upper(const ModelParams& p, Species which) {
    const double D = which == Species::u ? p.D : 1.0;
    const double g = which == Species::u ? p.gamma : 1.0;
    const double adv = which == Species::u ? p.alpha : p.beta;
    const double slope = which == Species::u ? p.pulse_u.slope_at_zero() : p.pulse_v.slope_at_zero();
    if (adv < 0.0) throw ValidationError("speed_bound_upper: advection must be >= 0");
    const double rate = g + std::log(slope) / p.tau;
    if (!(rate > 0.0)) throw ValidationError("speed_bound_upper: growth plus pulse term must be > 0");
    return 2.0 * std::sqrt(D * rate) + adv;
}

struct SpeedReport {
    bool applicable = false;  // preconditions held
    bool pass = false;
    std::string note;
    double max_ratio = 0.0;   // max front(t)/t over the window
    double bound = 0.0;
    double slack = 0.05;
};

/// Checks front(t)/t <= bound (1 + slack) over [t_lo, t_hi]. The lower bound
/// needs the semi-wave speed and is not computed.
inline SpeedReport check_speed_bounds(const Trajectory& tr, const ModelParams& p, double t_lo, double t_hi,
                                      Species which = Species::u) {
    SpeedReport rep;
    if (p.alpha < 0.0 || p.beta < 0.0) {
        rep.note = "precondition failed: alpha, beta must be >= 0";
        return rep;
    }
    const double rate = (which == Species::u ? p.gamma : 1.0) +
                        std::log((which == Species::u ? p.pulse_u : p.pulse_v).slope_at_zero()) / p.tau;
    if (!(rate > 0.0)) {
        rep.note = "precondition failed: growth plus pulse term must be > 0";
        return rep;
    }
    rep.applicable = true;
    rep.bound = speed_bound_upper(p, which);
    bool any = false;
    for (const auto& f : tr.fronts) {
        if (f.t < t_lo || f.t > t_hi || f.t <= 0.0) continue;
        any = true;
        rep.max_ratio = std::max(rep.max_ratio, (which == Species::u ? f.r : f.s) / f.t);
    }
    if (!any) {
        rep.applicable = false;
        rep.note = "no samples in window";
        return rep;
    }
    rep.pass = rep.max_ratio <= rep.bound * (1.0 + rep.slack);
    rep.note = "lower bound not computed";
    return rep;
}

struct SpeedRow {
    double sigma, rprime, sprime, ravg, savg, ratio_u, ratio_v, bound_u, bound_v;
};

/// One row per sigma (sigma1 = sigma2 = sigma), read at the final time; the
/// first row is the sigma = 0 reference.
inline std::vector<SpeedRow> sigma_speed_sweep(const ModelParams& p, const std::vector<double>& sigmas,
                                               const SolverConfig& cfg, const InitialData& ic) {
    for (double s : sigmas) {
        if (!(s > 0.0 && s < 1.0)) throw ValidationError("sigma_speed_sweep: sigma values must lie in (0, 1)");
    }
    std::vector<double> all = {0.0};
    all.insert(all.end(), sigmas.begin(), sigmas.end());
    std::vector<SpeedRow> rows;
    for (double s : all) {
        ModelParams q = p;
        q.sigma1 = s;
        q.sigma2 = s;
        const Trajectory tr = simulate(q, cfg, ic);
        const FrontSample& last = tr.fronts.back();
        double bu = std::nan(""), bv = std::nan("");
        try { bu = speed_bound_upper(q, Species::u); } catch (const ValidationError&) {}
        try { bv = speed_bound_upper(q, Species::v); } catch (const ValidationError&) {}
        rows.push_back({s, last.rprime, last.sprime, average_speed(tr, last.t, q.tau, Species::u),
                        average_speed(tr, last.t, q.tau, Species::v), last.r / last.t, last.s / last.t, bu, bv});
    }
    return rows;
}

}  // namespace impcomp
