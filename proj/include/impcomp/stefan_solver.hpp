#pragma once

// Two-species impulsive free-boundary solver. Each species lives on its own
// front-fixed grid y = x / front in [0, 1] with N cells; node N is the front
// where the density is zero. One step of size dt:
//   1. Stefan speeds from the one-sided derivative at y = 1;
//   2. explicit front update;
//   3. explicit upwind advection (coefficient adv/R - y R'/R) and explicit
//      reaction with the competitor interpolated at the physical x;
//   4. implicit diffusion D/R_new^2 with a ghost node at y = 0.
// Steps whose advective Courant number would exceed kCflTarget are split into
// equal substeps. Pulses act after the step that lands on n*tau, and at t = 0.

#include "impcomp/errors.hpp"
#include "impcomp/model.hpp"
#include "impcomp/periodic_orbit.hpp"
#include "impcomp/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

namespace impcomp {

enum class ProfileKind { cosine, quartic };

/// Initial density on (0, front): amplitude * cos(pi x / (2 front)) or
/// amplitude * (1 - (x/front)^2)^2. Both have zero slope at 0 and vanish at
/// the front.
struct InitialProfile {
    ProfileKind kind = ProfileKind::cosine;
    double amplitude = 1.0;

    double operator()(double y) const {
        switch (kind) {
        case ProfileKind::cosine: return amplitude * std::cos(std::numbers::pi * y / 2.0);
        case ProfileKind::quartic: return amplitude * (1.0 - y * y) * (1.0 - y * y);
        }
        return 0.0;
    }

    std::string to_string() const {
        std::string s = kind == ProfileKind::cosine ? "cos:" : "quartic:";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", amplitude);
        return s + buf;
    }
};

struct InitialData {
    InitialProfile u;
    InitialProfile v;
};

struct SolverConfig {
    int N = 256;
    double dt = 0.0;  // 0 selects tau / 400
    double t_end = 40.0;
    int snapshot_every = 0;  // base steps between snapshots; 0 selects one per period
    double L_max = 40.0;
    double eps_vanish = 1e-4;
    double eps_stall = 1e-3;
};

/// Base step count per period. dt must divide tau up to round-off.
inline int steps_per_period(double tau, const SolverConfig& cfg) {
    if (!(tau > 0.0)) throw ValidationError("steps_per_period: tau must be > 0");
    if (cfg.dt == 0.0) return 400;
    if (!(cfg.dt > 0.0)) throw ValidationError("dt must be > 0");
    const double m = tau / cfg.dt;
    const double mr = std::round(m);
    if (mr < 1.0 || std::abs(m - mr) > 1e-9 * m) {
        throw ValidationError("dt must divide tau exactly (dt = tau/m for integer m)");
    }
    return static_cast<int>(mr);
}

inline void validate_config(const SolverConfig& cfg, double tau) {
    if (cfg.N < 64) throw ValidationError("N must be >= 64");
    if (!(cfg.t_end > 0.0)) throw ValidationError("t_end must be > 0");
    if (cfg.snapshot_every < 0) throw ValidationError("snapshot_every must be >= 0");
    if (!(cfg.L_max > 0.0)) throw ValidationError("L_max must be > 0");
    if (!(cfg.eps_vanish > 0.0)) throw ValidationError("eps_vanish must be > 0");
    if (!(cfg.eps_stall > 0.0)) throw ValidationError("eps_stall must be > 0");
    (void)steps_per_period(tau, cfg);
}

/// Coefficients of one species' equation
///   w_t = D w_xx - adv w_x + growth w (1 + eps(t) - w - coupling * other).
struct SpeciesModel {
    double D = 1.0;
    double adv = 0.0;
    double growth = 1.0;
    double coupling = 0.0;
    double mu = 1.0;
    Perturbation eps;
    PulseMap pulse;
};

inline SpeciesModel species_model(const ModelParams& p, Species which) {
    if (which == Species::u) return {p.D, p.alpha, p.gamma, p.k, p.mu1, p.eps_u(), p.pulse_u};
    return {1.0, p.beta, 1.0, p.h, p.mu2, p.eps_v(), p.pulse_v};
}

struct SimState {
    double t = 0.0;
    long step_index = 0;
    double r = 0.0;
    double s = 0.0;
    std::vector<double> u;  // N+1 nodes on y in [0, 1]; u.back() == 0
    std::vector<double> v;  // empty when v is absent (fixed-domain runs)
};

struct FrontSample {
    double t, r, s, rprime, sprime;
};

struct Snapshot {
    double t, r, s;
    std::vector<double> u, v;
};

struct PulseEvent {
    double t;
    Species species;
    std::string pulse_kind;
    double pre_max, post_max;
};

struct Trajectory {
    double tau = 1.0;
    int N = 0;
    std::vector<FrontSample> fronts;
    std::vector<Snapshot> snapshots;
    std::vector<PulseEvent> events;
    SimState final_state;
    std::string stop_reason;
    double max_cfl = 0.0;       // largest Courant number actually stepped with
    int max_substeps = 1;       // largest subcycling factor used
    long cfl_violations = 0;    // substeps that ran with Courant number > 1
    long reversed_gradient = 0; // steps where a front derivative had the wrong sign
    double max_front_slope = 0.0;  // largest -w_x seen at either front

    double umax_final() const;
    double vmax_final() const;
};

namespace solver_detail {

inline double max_of(const std::vector<double>& w) {
    double m = 0.0;
    for (double x : w) m = std::max(m, x);
    return m;
}

/// -w_x at the front by the second-order one-sided difference; w_N = 0.
inline double front_slope(const std::vector<double>& w, double front) {
    const std::size_t n = w.size() - 1;
    const double dy = 1.0 / static_cast<double>(n);
    return -(3.0 * w[n] - 4.0 * w[n - 1] + w[n - 2]) / (2.0 * dy * front);
}

struct Workspace {
    std::vector<double> lower, diag, upper, scratch, next;
};

}  // namespace solver_detail

inline double Trajectory::umax_final() const { return solver_detail::max_of(final_state.u); }
inline double Trajectory::vmax_final() const { return solver_detail::max_of(final_state.v); }

/// Stefan speed -mu w_x(front); zero when the discrete slope has the wrong sign.
inline double stefan_speed(const std::vector<double>& w, double front, double mu, bool* reversed = nullptr) {
    if (w.size() < 3) return 0.0;
    const double slope = solver_detail::front_slope(w, front);
    if (slope < 0.0) {
        if (reversed) *reversed = true;
        return 0.0;
    }
    return mu * slope;
}

/// Linear interpolation of a front-fixed profile at physical x; zero past the front.
inline double sample_competitor(const std::vector<double>& w, double front, double x_phys) {
    if (w.empty() || !(x_phys < front)) return 0.0;
    if (x_phys <= 0.0) return w[0];
    const double n = static_cast<double>(w.size() - 1);
    const double pos = x_phys / front * n;
    const auto i = static_cast<std::size_t>(pos);
    if (i >= w.size() - 1) return w.back();
    const double f = pos - static_cast<double>(i);
    return (1.0 - f) * w[i] + f * w[i + 1];
}

inline SimState initialize(const ModelParams& p, const InitialData& ic, const SolverConfig& cfg,
                           bool with_v = true) {
    for (const InitialProfile* prof : {&ic.u, &ic.v}) {
        if (!(prof->amplitude > 0.0) || !std::isfinite(prof->amplitude)) {
            throw ValidationError("initial profile amplitude must be > 0 (nontrivial nonnegative data)");
        }
    }
    if (cfg.N < 64) throw ValidationError("N must be >= 64");
    SimState st;
    st.r = p.r0;
    st.s = p.s0;
    const auto n = static_cast<std::size_t>(cfg.N);
    st.u.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) st.u[i] = ic.u(static_cast<double>(i) / cfg.N);
    st.u[n] = 0.0;
    if (with_v) {
        st.v.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) st.v[i] = ic.v(static_cast<double>(i) / cfg.N);
        st.v[n] = 0.0;
    }
    return st;
}

namespace solver_detail {

/// Advective Courant number on the front-fixed grid for one species.
inline double courant(const SpeciesModel& m, double front, double speed, double dt, int N) {
    // |adv/R - y R'/R| is largest at one of y = 0, 1.
    const double a = std::max(std::abs(m.adv / front), std::abs((m.adv - speed) / front));
    return a * dt * N;
}

/// Explicit advection/reaction then implicit diffusion for one species.
inline void advance_species(const SpeciesModel& m, std::vector<double>& w, double R, double R_new,
                            double Rp, const std::vector<double>& other, double other_front, double t,
                            double dt, Workspace& ws) {
    const std::size_t n = w.size() - 1;
    const double dy = 1.0 / static_cast<double>(n);
    const double eps = m.eps(t);
    std::vector<double>& rhs = ws.next;
    rhs.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = static_cast<double>(i) * dy;
        double adv_term = 0.0;
        if (i > 0) {
            const double a = m.adv / R - y * Rp / R;
            const double dw = a > 0.0 ? (w[i] - w[i - 1]) / dy : (w[i + 1] - w[i]) / dy;
            adv_term = -a * dw;
        }
        const double comp = m.coupling == 0.0 ? 0.0 : sample_competitor(other, other_front, y * R);
        const double react = m.growth * w[i] * (1.0 + eps - w[i] - m.coupling * comp);
        rhs[i] = w[i] + dt * (adv_term + react);
    }

    const double kd = dt * m.D / (R_new * R_new * dy * dy);
    ws.lower.assign(n, -kd);
    ws.diag.assign(n, 1.0 + 2.0 * kd);
    ws.upper.assign(n, -kd);
    ws.upper[0] = -2.0 * kd;  // ghost node w_{-1} = w_1
    solve_tridiagonal(ws.lower, ws.diag, ws.upper, rhs, ws.scratch);

    for (std::size_t i = 0; i < n; ++i) {
        double x = rhs[i];
        if (x < 0.0) {
            if (x < -1e-12) throw NumericalError("negative density " + std::to_string(x) + " beyond round-off");
            x = 0.0;
        }
        if (!std::isfinite(x)) throw NumericalError("non-finite density");
        w[i] = x;
    }
    w[n] = 0.0;
}

struct StepStats {
    double cfl = 0.0;
    int substeps = 1;
    bool cfl_violation = false;
    bool reversed = false;
    double front_slope = 0.0;
};

inline constexpr double kCflTarget = 0.9;

/// One substep of size dt. Fronts move unless frozen.
inline void substep(const SpeciesModel& mu_, const SpeciesModel& mv, SimState& st, double t, double dt,
                    bool frozen, Workspace& ws, StepStats& stats) {
    const bool has_v = !st.v.empty();
    bool rev = false;
    const double rp = frozen ? 0.0 : stefan_speed(st.u, st.r, mu_.mu, &rev);
    const double sp = (frozen || !has_v) ? 0.0 : stefan_speed(st.v, st.s, mv.mu, &rev);
    stats.reversed = stats.reversed || rev;
    stats.front_slope = std::max({stats.front_slope, rp / mu_.mu, has_v ? sp / mv.mu : 0.0});
    const int N = static_cast<int>(st.u.size()) - 1;
    double c = courant(mu_, st.r, rp, dt, N);
    if (has_v) c = std::max(c, courant(mv, st.s, sp, dt, N));
    stats.cfl = std::max(stats.cfl, c);
    if (c > 1.0) stats.cfl_violation = true;

    const double r_new = st.r + dt * rp;
    const double s_new = st.s + dt * sp;
    if (has_v) {
        std::vector<double> u_old = st.u;
        advance_species(mu_, st.u, st.r, r_new, rp, st.v, st.s, t, dt, ws);
        advance_species(mv, st.v, st.s, s_new, sp, u_old, st.r, t, dt, ws);
    } else {
        static const std::vector<double> none;
        advance_species(mu_, st.u, st.r, r_new, rp, none, 0.0, t, dt, ws);
    }
    st.r = r_new;
    st.s = s_new;
}

inline StepStats step_impl(const ModelParams& p, SimState& st, double dt, bool frozen, Workspace& ws) {
    const SpeciesModel mu_ = species_model(p, Species::u);
    const SpeciesModel mv = species_model(p, Species::v);
    const int N = static_cast<int>(st.u.size()) - 1;
    const bool has_v = !st.v.empty();

    // Subcycling factor from the Courant number at the start of the step.
    double c = courant(mu_, st.r, frozen ? 0.0 : stefan_speed(st.u, st.r, mu_.mu), dt, N);
    if (has_v) c = std::max(c, courant(mv, st.s, frozen ? 0.0 : stefan_speed(st.v, st.s, mv.mu), dt, N));
    const int m = c > kCflTarget ? static_cast<int>(std::ceil(c / kCflTarget)) : 1;

    StepStats stats;
    stats.substeps = m;
    const double h = dt / m;
    for (int j = 0; j < m; ++j) substep(mu_, mv, st, st.t + j * h, h, frozen, ws, stats);
    return stats;
}

}  // namespace solver_detail

/// Advances the state by one base step of size dt (subcycled if needed).
/// The caller owns time bookkeeping: st.t is the time at the start.
inline SimState step(const SimState& state, const ModelParams& p, double dt) {
    SimState st = state;
    solver_detail::Workspace ws;
    solver_detail::step_impl(p, st, dt, false, ws);
    st.t = state.t + dt;
    st.step_index = state.step_index + 1;
    return st;
}

/// u <- G(u), v <- H(v) pointwise; fronts unchanged. Appends to log if given.
inline SimState apply_impulses(const SimState& state, const ModelParams& p,
                               std::vector<PulseEvent>* log = nullptr) {
    SimState st = state;
    auto pulse_one = [&](std::vector<double>& w, const PulseMap& g, Species sp) {
        if (w.empty()) return;
        const double pre = solver_detail::max_of(w);
        for (double& x : w) x = g(x);
        if (log) log->push_back({st.t, sp, g.to_string(), pre, solver_detail::max_of(w)});
    };
    pulse_one(st.u, p.pulse_u, Species::u);
    pulse_one(st.v, p.pulse_v, Species::v);
    return st;
}

namespace solver_detail {

inline Trajectory run(const ModelParams& p, const SolverConfig& cfg, SimState st, bool frozen) {
    const ValidationReport rep = validate_params(p);
    if (!rep.empty()) throw ValidationError(format_report(rep));
    validate_config(cfg, p.tau);

    const int m = steps_per_period(p.tau, cfg);
    const double dt = p.tau / m;
    const long total = static_cast<long>(std::ceil(cfg.t_end / dt - 1e-9));
    const int snap_every = cfg.snapshot_every > 0 ? cfg.snapshot_every : m;
    const bool has_v = !st.v.empty();
    const SpeciesModel mu_ = species_model(p, Species::u);
    const SpeciesModel mv = species_model(p, Species::v);

    Trajectory tr;
    tr.tau = p.tau;
    tr.N = cfg.N;
    Workspace ws;

    auto record = [&](const SimState& s) {
        const double rp = frozen ? 0.0 : stefan_speed(s.u, s.r, mu_.mu);
        const double sp = (frozen || !has_v) ? 0.0 : stefan_speed(s.v, s.s, mv.mu);
        tr.fronts.push_back({s.t, s.r, s.s, rp, sp});
    };
    auto snapshot = [&](const SimState& s) { tr.snapshots.push_back({s.t, s.r, s.s, s.u, s.v}); };

    record(st);
    snapshot(st);
    st = apply_impulses(st, p, &tr.events);

    tr.stop_reason = "t_end";
    for (long n = 1; n <= total; ++n) {
        const StepStats stats = step_impl(p, st, dt, frozen, ws);
        st.step_index = n;
        st.t = static_cast<double>(n) * dt;
        tr.max_cfl = std::max(tr.max_cfl, stats.cfl);
        tr.max_substeps = std::max(tr.max_substeps, stats.substeps);
        if (stats.cfl_violation) ++tr.cfl_violations;
        if (stats.reversed) ++tr.reversed_gradient;
        tr.max_front_slope = std::max(tr.max_front_slope, stats.front_slope);

        record(st);
        if (n % snap_every == 0 || n == total) snapshot(st);
        if (n % m == 0) st = apply_impulses(st, p, &tr.events);

        const bool vanished = max_of(st.u) < cfg.eps_vanish && (!has_v || max_of(st.v) < cfg.eps_vanish);
        if (vanished) {
            tr.stop_reason = "both_vanished";
            if (n % snap_every != 0 && n != total) snapshot(st);
            break;
        }
        if (!frozen && st.r >= cfg.L_max && (!has_v || st.s >= cfg.L_max)) {
            tr.stop_reason = "both_fronts_beyond_L_max";
            if (n % snap_every != 0 && n != total) snapshot(st);
            break;
        }
    }
    tr.final_state = st;
    return tr;
}

}  // namespace solver_detail

/// Full two-species run from the initial data to t_end or a terminal event.
inline Trajectory simulate(const ModelParams& p, const SolverConfig& cfg, const InitialData& ic) {
    return solver_detail::run(p, cfg, initialize(p, ic, cfg, true), false);
}

/// Species u alone with a moving front; v is absent.
inline Trajectory simulate_single(const ModelParams& p, const SolverConfig& cfg, const InitialProfile& ic) {
    return solver_detail::run(p, cfg, initialize(p, {ic, ic}, cfg, false), false);
}

/// Species u alone on the fixed interval (0, l): no Stefan update, no competitor.
inline Trajectory simulate_fixed_domain(const ModelParams& p, double l, const SolverConfig& cfg,
                                        const InitialProfile& ic) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("simulate_fixed_domain: l must be > 0");
    ModelParams q = p;
    q.r0 = l;
    return solver_detail::run(q, cfg, initialize(q, {ic, ic}, cfg, false), true);
}

}  // namespace impcomp
