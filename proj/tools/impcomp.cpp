// Command-line front end: eigen, orbit, thresholds, simulate, classify,
// speed, sweep. Exit status 0 ok, 1 validation, 2 numerical failure,
// 3 undetermined classification under --assert.

#include "impcomp/classify.hpp"
#include "impcomp/config.hpp"
#include "impcomp/csv.hpp"
#include "impcomp/eigen.hpp"
#include "impcomp/periodic_orbit.hpp"
#include "impcomp/speed.hpp"
#include "impcomp/stefan_solver.hpp"
#include "impcomp/thresholds.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace impcomp;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitUndetermined = 3;

std::string opt_len(const std::optional<double>& x) { return x ? fmt17(*x) : "none"; }

void print_kv(std::ostream& os, const std::string& key, const std::string& value) {
    os << key << std::string(key.size() < 22 ? 22 - key.size() : 1, ' ') << "= " << value << '\n';
}

void print_thresholds(std::ostream& os, const ThresholdSet& t) {
    print_kv(os, "r_star", opt_len(t.r_star));
    print_kv(os, "r_hat", opt_len(t.r_hat));
    print_kv(os, "r_upper", opt_len(t.r_upper));
    print_kv(os, "s_star", opt_len(t.s_star));
    print_kv(os, "s_upper", opt_len(t.s_upper));
    print_kv(os, "g_star", fmt17(t.g_star));
    print_kv(os, "g_upper", opt_len(t.g_upper));
    print_kv(os, "g_lower", fmt17(t.g_lower));
    print_kv(os, "g_lowlow", opt_len(t.g_lowlow));
    print_kv(os, "p_star", fmt17(t.p_star));
    print_kv(os, "p_lower", fmt17(t.p_lower));
    print_kv(os, "mean_a_u_upper", fmt17(t.mean_a_u_upper));
    print_kv(os, "mean_a_u_hat", fmt17(t.mean_a_u_hat));
    print_kv(os, "mean_a_v_upper", fmt17(t.mean_a_v_upper));
    print_kv(os, "ordering_holds", threshold_ordering_holds(t) ? "true" : "false");
}

void print_assumptions(std::ostream& os, const AssumptionReport& a) {
    print_kv(os, "a1_u", fmt17(a.a1_u_value) + (a.a1_u ? " (holds)" : " (fails)"));
    print_kv(os, "a1_v", fmt17(a.a1_v_value) + (a.a1_v ? " (holds)" : " (fails)"));
    print_kv(os, "a2_u", fmt17(a.a2_u_value) + (a.a2_u ? " (holds)" : " (fails)"));
    print_kv(os, "a2_v", fmt17(a.a2_v_value) + (a.a2_v ? " (holds)" : " (fails)"));
}

void print_evidence(std::ostream& os, const std::string& prefix, const SpeciesEvidence& e) {
    print_kv(os, prefix + "_fate", std::string(to_string(e.fate)));
    print_kv(os, prefix + "_basis", e.basis);
    print_kv(os, prefix + "_front", fmt17(e.front));
    print_kv(os, prefix + "_max_density", fmt17(e.max_density));
    print_kv(os, prefix + "_recent_speed", fmt17(e.recent_speed));
    print_kv(os, prefix + "_period_growth", fmt17(e.period_growth));
}

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out = ".";
};

Scenario load(const Common& c) {
    if (c.config.empty()) return parse_config_text("", c.sets, "--set");
    return parse_config(c.config, c.sets);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(config_detail::parse_double("list", config_detail::trim(item)));
    }
    return out;
}

int run_sweep(const Scenario& sc, const fs::path& out, int workers) {
    if (sc.grid.empty()) throw ValidationError("sweep: no axis declared (use key=start:stop:count)");
    std::size_t total = 1;
    for (const auto& a : sc.grid) total *= static_cast<std::size_t>(a.count);

    struct Row {
        std::vector<double> values;
        std::string tag, error;
        double r = 0, s = 0;
    };
    std::vector<Row> rows(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            Scenario local = sc;
            Row& row = rows[idx];
            std::size_t rem = idx;
            // Last axis varies fastest.
            std::vector<int> pos(sc.grid.size());
            for (std::size_t a = sc.grid.size(); a-- > 0;) {
                pos[a] = static_cast<int>(rem % static_cast<std::size_t>(sc.grid[a].count));
                rem /= static_cast<std::size_t>(sc.grid[a].count);
            }
            try {
                for (std::size_t a = 0; a < sc.grid.size(); ++a) {
                    const double v = sc.grid[a].at(pos[a]);
                    row.values.push_back(v);
                    apply_setting(local, sc.grid[a].key, fmt17(v));
                }
                const ValidationReport rep = validate_params(local.params);
                if (!rep.empty()) throw ValidationError(format_report(rep));
                const Trajectory tr = simulate(local.params, local.solver, local.ic);
                const Outcome o = classify_outcome(tr, thresholds_for(local.params), local.solver);
                row.tag = std::string(to_string(o.tag));
                row.r = tr.fronts.back().r;
                row.s = tr.fronts.back().s;
            } catch (const std::exception& e) {
                row.tag = "error";
                row.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = std::max(1, workers);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    fs::create_directories(out);
    std::ofstream f(out / "outcomes.csv", std::ios::binary);
    if (!f) throw ValidationError("cannot write outcomes.csv");
    for (const auto& a : sc.grid) f << a.key << ',';
    f << "tag,r_final,s_final\n";
    int errors = 0;
    for (const auto& row : rows) {
        for (double v : row.values) f << fmt17(v) << ',';
        f << row.tag << ',' << fmt17(row.r) << ',' << fmt17(row.s) << '\n';
        if (!row.error.empty()) {
            std::cerr << "sweep point failed: " << row.error << '\n';
            ++errors;
        }
    }
    std::cout << "wrote " << (out / "outcomes.csv").string() << " (" << total << " rows)\n";
    return errors ? kExitNumerical : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"impulsive two-species competition with free boundaries"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub, bool needs_out) {
        sub->add_option("--config", common.config, "scenario file (key=value lines)");
        sub->add_option("--set", common.sets, "override key=value (repeatable)")->take_all();
        if (needs_out) sub->add_option("--out", common.out, "output path");
    };

    // eigen
    auto* eig = app.add_subcommand("eigen", "principal eigenvalue lambda* and optionally lambda1");
    double eD = 1.0, ealpha = 0.0;
    std::string el = "1";
    std::optional<double> eslope, etau, egamma, emean;
    eig->add_option("--D", eD, "diffusion");
    eig->add_option("--alpha", ealpha, "advection");
    eig->add_option("--l", el, "habitat length or 'inf'");
    eig->add_option("--slope", eslope, "pulse slope G'(0); prints lambda1 when given");
    eig->add_option("--tau", etau, "period");
    eig->add_option("--gamma", egamma, "growth ratio");
    eig->add_option("--mean-a", emean, "period mean of the growth rate");

    // orbit
    auto* orb = app.add_subcommand("orbit", "periodic impulsive orbit as t,value CSV");
    add_common(orb, true);
    std::string which = "u_star";
    int M = 2048;
    orb->add_option("--which", which, "u_star, v_star, u_lower, v_lower")
        ->check(CLI::IsMember({"u_star", "v_star", "u_lower", "v_lower"}));
    orb->add_option("--M", M, "samples per period (even)");

    auto* thr = app.add_subcommand("thresholds", "habitat and pulse thresholds");
    add_common(thr, false);

    auto* sim = app.add_subcommand("simulate", "run the free-boundary solver, write fronts/events/snapshots");
    add_common(sim, true);

    auto* cls = app.add_subcommand("classify", "simulate and classify the competition outcome");
    add_common(cls, false);
    bool assert_flag = false;
    cls->add_flag("--assert", assert_flag, "exit 3 when the outcome is undetermined");

    auto* spd = app.add_subcommand("speed", "sigma sweep of front speeds, writes speeds.csv");
    add_common(spd, true);
    std::string sigmas = "0.01,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.99";
    spd->add_option("--sigmas", sigmas, "comma separated sigma values in (0,1)");

    auto* swp = app.add_subcommand("sweep", "outcome grid over key=start:stop:count axes, writes outcomes.csv");
    add_common(swp, true);
    int workers = 1;
    swp->add_option("--workers", workers, "parallel simulations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*eig) {
            const bool inf = el == "inf";
            const Length L = inf ? Length::half_line() : Length::finite(config_detail::parse_double("l", el));
            if (inf) {
                print_kv(std::cout, "lambda_star", fmt17(lambda_star_limit(eD, ealpha)));
                print_kv(std::cout, "case", "half_line_limit");
            } else {
                const EigenResult r = lambda_star(eD, ealpha, L.value);
                print_kv(std::cout, "lambda_star", fmt17(r.value));
                print_kv(std::cout, "case", std::string(to_string(r.case_tag)));
                print_kv(std::cout, "root", r.root ? fmt17(*r.root) : "none");
                print_kv(std::cout, "residual", fmt17(r.residual));
            }
            if (eslope) {
                const double l1 = lambda_one(eD, ealpha, egamma.value_or(1.0), emean.value_or(1.0), *eslope,
                                             etau.value_or(1.0), L);
                print_kv(std::cout, "lambda_one", fmt17(l1));
            }
            return 0;
        }
        const Scenario sc = load(common);
        if (*orb) {
            const OrbitSet os = compute_orbits(sc.params, M);
            const std::optional<PeriodicOrbit>* o = which == "u_star"    ? &os.u_star
                                                    : which == "v_star"  ? &os.v_star
                                                    : which == "u_lower" ? &os.u_lower
                                                                         : &os.v_lower;
            if (!*o) throw ValidationError("orbit " + which + ": persistence condition fails, no positive orbit");
            fs::path out = common.out;
            if (fs::is_directory(out)) out /= "orbit_" + which + ".csv";
            write_orbit_csv(out, **o);
            print_kv(std::cout, "fixed_point", fmt17((*o)->fixed_point));
            print_kv(std::cout, "post_pulse", fmt17((*o)->post_pulse));
            print_kv(std::cout, "mean", fmt17((*o)->mean));
            print_kv(std::cout, "file", out.string());
            return 0;
        }
        if (*thr) {
            print_thresholds(std::cout, thresholds_for(sc.params));
            return 0;
        }
        if (*sim) {
            const Trajectory tr = simulate(sc.params, sc.solver, sc.ic);
            write_trajectory(common.out, tr);
            print_kv(std::cout, "stop_reason", tr.stop_reason);
            print_kv(std::cout, "t_final", fmt17(tr.fronts.back().t));
            print_kv(std::cout, "r_final", fmt17(tr.fronts.back().r));
            print_kv(std::cout, "s_final", fmt17(tr.fronts.back().s));
            print_kv(std::cout, "u_max_final", fmt17(tr.umax_final()));
            print_kv(std::cout, "v_max_final", fmt17(tr.vmax_final()));
            print_kv(std::cout, "max_cfl", fmt17(tr.max_cfl));
            print_kv(std::cout, "max_substeps", std::to_string(tr.max_substeps));
            print_kv(std::cout, "reversed_gradient", std::to_string(tr.reversed_gradient));
            return 0;
        }
        if (*cls) {
            const Trajectory tr = simulate(sc.params, sc.solver, sc.ic);
            const ThresholdSet th = thresholds_for(sc.params);
            const Outcome o = classify_outcome(tr, th, sc.solver);
            print_kv(std::cout, "outcome", std::string(to_string(o.tag)));
            print_kv(std::cout, "reason", o.reason);
            print_kv(std::cout, "t_final", fmt17(o.t_final));
            print_evidence(std::cout, "u", o.u);
            print_evidence(std::cout, "v", o.v);
            print_assumptions(std::cout, check_assumptions(sc.params));
            print_thresholds(std::cout, th);
            if (assert_flag && o.tag == OutcomeTag::undetermined) return kExitUndetermined;
            return 0;
        }
        if (*spd) {
            const auto rows = sigma_speed_sweep(sc.params, parse_list(sigmas), sc.solver, sc.ic);
            fs::create_directories(common.out);
            write_speeds_csv(fs::path(common.out) / "speeds.csv", rows);
            print_kv(std::cout, "file", (fs::path(common.out) / "speeds.csv").string());
            return 0;
        }
        if (*swp) return run_sweep(sc, common.out, workers);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
