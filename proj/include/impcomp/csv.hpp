#pragma once

// CSV artifacts. Floats are printed with 17 significant digits so that two
// runs of the same scenario give byte-identical files.

#include "impcomp/errors.hpp"
#include "impcomp/periodic_orbit.hpp"
#include "impcomp/speed.hpp"
#include "impcomp/stefan_solver.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace impcomp {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace csv_detail {

inline std::ofstream open(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path.string() + "'");
    return f;
}

inline const char* species_name(Species s) { return s == Species::u ? "u" : "v"; }

}  // namespace csv_detail

inline void write_fronts_csv(const std::filesystem::path& path, const Trajectory& tr) {
    auto f = csv_detail::open(path);
    f << "t,r,s,rprime,sprime\n";
    for (const auto& s : tr.fronts) {
        f << fmt17(s.t) << ',' << fmt17(s.r) << ',' << fmt17(s.s) << ',' << fmt17(s.rprime) << ','
          << fmt17(s.sprime) << '\n';
    }
}

/// One file per snapshot: a comment header with t, r, s, then y, x_u, u, x_v, v.
inline void write_snapshots(const std::filesystem::path& dir, const Trajectory& tr) {
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
        const Snapshot& sn = tr.snapshots[k];
        auto f = csv_detail::open(dir / ("snap_" + std::to_string(k) + ".csv"));
        f << "# t=" << fmt17(sn.t) << " r=" << fmt17(sn.r) << " s=" << fmt17(sn.s) << '\n';
        f << "y,x_u,u,x_v,v\n";
        const std::size_t n = sn.u.size() - 1;
        for (std::size_t i = 0; i <= n; ++i) {
            const double y = static_cast<double>(i) / static_cast<double>(n);
            const bool has_v = !sn.v.empty();
            f << fmt17(y) << ',' << fmt17(y * sn.r) << ',' << fmt17(sn.u[i]) << ','
              << (has_v ? fmt17(y * sn.s) : std::string("nan")) << ',' << (has_v ? fmt17(sn.v[i]) : std::string("nan"))
              << '\n';
        }
    }
}

inline void write_events_csv(const std::filesystem::path& path, const Trajectory& tr) {
    auto f = csv_detail::open(path);
    f << "t,species,pulse_kind,pre_max,post_max\n";
    for (const auto& e : tr.events) {
        f << fmt17(e.t) << ',' << csv_detail::species_name(e.species) << ',' << e.pulse_kind << ','
          << fmt17(e.pre_max) << ',' << fmt17(e.post_max) << '\n';
    }
}

inline void write_orbit_csv(const std::filesystem::path& path, const PeriodicOrbit& o) {
    auto f = csv_detail::open(path);
    f << "t,value\n";
    for (std::size_t j = 0; j < o.t.size(); ++j) f << fmt17(o.t[j]) << ',' << fmt17(o.value[j]) << '\n';
}

inline void write_speeds_csv(const std::filesystem::path& path, const std::vector<SpeedRow>& rows) {
    auto f = csv_detail::open(path);
    f << "sigma,rprime,sprime,ravg,savg,ratio_u,ratio_v,bound_u,bound_v\n";
    for (const auto& r : rows) {
        f << fmt17(r.sigma) << ',' << fmt17(r.rprime) << ',' << fmt17(r.sprime) << ',' << fmt17(r.ravg) << ','
          << fmt17(r.savg) << ',' << fmt17(r.ratio_u) << ',' << fmt17(r.ratio_v) << ',' << fmt17(r.bound_u) << ','
          << fmt17(r.bound_v) << '\n';
    }
}

/// Writes fronts.csv, events.csv and snapshots/ under dir.
inline void write_trajectory(const std::filesystem::path& dir, const Trajectory& tr) {
    std::filesystem::create_directories(dir);
    write_fronts_csv(dir / "fronts.csv", tr);
    write_events_csv(dir / "events.csv", tr);
    write_snapshots(dir / "snapshots", tr);
}

}  // namespace impcomp
