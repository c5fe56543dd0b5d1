// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include "qtsim/collision.hpp"
#include "qtsim/diagnostics.hpp"
#include "qtsim/errors.hpp"
#include "qtsim/potential.hpp"
#include "qtsim/propagator.hpp"
#include "qtsim/scenario.hpp"
#include "qtsim/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qtsim;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int n, const char* what, bool ok, const std::string& detail) {
    std::printf("%s  criterion %2d: %s  [%s]\n", ok ? "PASS" : "FAIL", n, what,
                detail.c_str());
    if (!ok) ++failures;
}

std::string str(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ScenarioConfig load(const char* name) {
    return load_config_file(std::string(QTSIM_SCENARIO_DIR) + "/" + name);
}

const SnapshotResult& snapshot_at(const ScenarioResult& r, double t) {
    for (const auto& s : r.snapshots)
        if (std::abs(s.requested_time - t) < 1e-9) return s;
    throw std::runtime_error("missing snapshot");
}

bool violation_near(const NegativityReport& r, double x, double window) {
    for (const auto& v : r.violations)
        if (std::abs(v.x - x) <= window) return true;
    return false;
}

double marginal_mismatch(const SignedEnsemble& e) {
    const MomentumGrid kg = conjugate_momentum_grid(e.terms.front().state.grid);
    WignerField f = wigner_from_ensemble(e, kg, WignerRows::nodes_only);
    ChargeDensity m = marginal_position(f);
    ChargeDensity q = charge_density(e);
    double err = 0.0;
    for (size_t j = 0; j < q.values.size(); ++j)
        err = std::max(err, std::abs(m.values[j] - q.values[j]));
    return err;
}

} // namespace

int main() {
    const ScenarioConfig he_cfg = load("he_double_barrier.json");
    const ScenarioConfig gs_cfg = load("gs_double_barrier.json");
    const ScenarioConfig oracle_cfg = load("free_oracle.json");
    const double mass = he_cfg.mass * units::electron_rest_mass;

    // ---- criterion 1: Table-2 H.E. row via bisection calibration --------
    ScenarioConfig he_run = he_cfg;
    double w_cal = 0.0;
    ScenarioResult he;
    try {
        w_cal = calibrate_he_weight(he_cfg, -0.025);
        he_run.collision.weight_mode = ExplicitWeight{w_cal};
        he = execute_scenario(he_run);
        const NormDecomposition d = snapshot_at(he, 660.0).decomposition;
        report(1, "H.E. decomposition at t3 is (1.025, -0.025, 1)",
               std::abs(d.negative + 0.025) <= 0.005 &&
                   std::abs(d.total - 1.0) <= 1e-8,
               "w=" + str(w_cal) + " pos=" + str(d.positive) +
                   " neg=" + str(d.negative) + " tot=" + str(d.total));
    } catch (const ConfigError& e) {
        // the achievable range must be surfaced, never papered over
        report(1, "H.E. decomposition at t3 is (1.025, -0.025, 1)", false,
               e.what());
        he = execute_scenario(he_cfg);
        w_cal = he.resolved_weight.value_or(0.0);
    }

    // ---- criterion 2: Table-2 G.S. row at every snapshot -----------------
    const ScenarioResult gs = execute_scenario(gs_cfg);
    {
        bool ok = true;
        double worst_neg = 0.0, worst_tot = 0.0;
        for (const auto& s : gs.snapshots) {
            worst_neg = std::min(worst_neg, s.decomposition.negative);
            worst_tot = std::max(worst_tot, std::abs(s.decomposition.total - 1.0));
            if (std::abs(s.decomposition.negative) >= 1e-10 ||
                std::abs(s.decomposition.total - 1.0) > 1e-8)
                ok = false;
        }
        report(2, "G.S. decomposition is (1, 0, 1) at every snapshot", ok,
               "min neg=" + str(worst_neg) + " max |tot-1|=" + str(worst_tot));
    }

    // ---- criterion 3: negativity locations -------------------------------
    {
        const auto& t2 = snapshot_at(he, 315.0).negativity;
        const auto& t3 = snapshot_at(he, 660.0).negativity;
        const bool ok = violation_near(t2, 300.0, 15.0) &&
                        violation_near(t3, 492.0, 15.0);
        report(3, "H.E. negativity near x=300 at t2 and x=492 at t3", ok,
               "t2 min at x=" + str(t2.global_min.x) +
                   ", t3 min at x=" + str(t3.global_min.x));
    }

    // ---- criterion 4: temporal ordering of the pathology ------------------
    {
        const double q_ts = snapshot_at(he, 6.0).negativity.global_min.q;
        const double q_t2 = snapshot_at(he, 315.0).negativity.global_min.q;
        const double q_t3 = snapshot_at(he, 660.0).negativity.global_min.q;
        const bool ok = q_ts >= -1e-14 && q_t2 < 0.0 && q_t3 < 0.0;
        report(4, "min Q >= 0 at t_S+ but < 0 at t2 and t3", ok,
               "minQ(t_S+)=" + str(q_ts) + " minQ(t2)=" + str(q_t2) +
                   " minQ(t3)=" + str(q_t3));
    }

    // ---- criterion 5: kinetic energy of the initial packets ---------------
    {
        const SpatialGrid g =
            make_grid(he_cfg.grid.x_min, he_cfg.grid.x_max, he_cfg.grid.n_points);
        bool ok = true;
        double worst = 0.0;
        for (const auto& p : he_cfg.packets) {
            const double ke =
                mean_kinetic_energy(gaussian_packet(g, p.x0, p.k0, p.a0), mass);
            worst = std::max(worst, std::abs(ke - 0.09));
            if (std::abs(ke - 0.09) > 0.002) ok = false;
        }
        report(5, "each initial packet has E = 0.09 eV +- 0.002", ok,
               "max |KE-0.09|=" + str(worst));
    }

    // ---- criterion 6: unitarity over the full scenario --------------------
    {
        const SpatialGrid g =
            make_grid(he_cfg.grid.x_min, he_cfg.grid.x_max, he_cfg.grid.n_points);
        const Potential v =
            double_barrier(g, he_cfg.potential.center, he_cfg.potential.barrier_width,
                           he_cfg.potential.height, he_cfg.potential.well_width);
        const Propagator prop(g, v, he_cfg.evolution.dt, mass,
                              he_cfg.evolution.substeps);
        std::vector<PureState> packets;
        std::vector<cdouble> coeffs;
        for (const auto& p : he_cfg.packets) {
            packets.push_back(gaussian_packet(g, p.x0, p.k0, p.a0));
            coeffs.emplace_back(1.0, 0.0);
        }
        SignedEnsemble pre;
        pre.terms = {{1.0, superpose(packets, coeffs)}};
        HeCollisionSpec spec{he_cfg.collision.t_S, he_cfg.packets[0].k0,
                             he_cfg.collision.k_F, ExplicitWeight{w_cal}};
        // reach t_S, then track all three constituents
        PureState psi_B = pre.terms[0].state;
        const int pre_steps = int(std::lround(he_cfg.collision.t_S /
                                              he_cfg.evolution.dt));
        double per_step_max = 0.0;
        auto track = [&](PureState psi, int steps) {
            const double n0 = norm_squared(psi);
            double prev = n0;
            for (int s = 0; s < steps; ++s) {
                psi = prop.step(psi);
                const double n = norm_squared(psi);
                per_step_max = std::max(per_step_max, std::abs(n - prev));
                prev = n;
            }
            return std::abs(prev - n0);
        };
        const int total_steps = int(std::lround(he_cfg.evolution.t_end /
                                                he_cfg.evolution.dt));
        double cumulative = track(psi_B, total_steps);
        SignedEnsemble at_ts = pre;
        for (int s = 0; s < pre_steps; ++s)
            at_ts.terms[0].state = prop.step(at_ts.terms[0].state);
        CollisionPackets cp = build_collision_packets(
            at_ts, spec, mass, he_cfg.packets[0].a0, *he_cfg.collision.x0_ref);
        cumulative = std::max(cumulative, track(cp.psi_P, total_steps - pre_steps));
        cumulative = std::max(cumulative, track(cp.psi_N, total_steps - pre_steps));
        report(6, "norm drift < 1e-12 per step, < 1e-9 cumulative",
               per_step_max < 1e-12 && cumulative < 1e-9,
               "per-step=" + str(per_step_max) + " cumulative=" + str(cumulative));
    }

    // ---- criterion 7: analytic free-spreading oracle -----------------------
    {
        const ScenarioResult free_run = execute_scenario(oracle_cfg);
        const SnapshotResult& last = free_run.snapshots.back();
        const PacketSpec p = oracle_cfg.packets[0];
        const PureState oracle = analytic_free_gaussian(
            last.q.grid, p.x0, p.k0, p.a0, oracle_cfg.mass * units::electron_rest_mass,
            last.time);
        const double f =
            std::abs(inner_product(oracle, last.ensemble.terms[0].state));
        report(7, "free evolution fidelity vs analytic oracle >= 1 - 1e-4",
               f >= 1.0 - 1e-4, "1-f=" + str(1.0 - f));
    }

    // ---- criterion 8: Wigner roundtrip vs brute-force oracle ---------------
    {
        const SpatialGrid g = make_grid(0.0, 63.0, 64);
        const MomentumGrid kg = conjugate_momentum_grid(g);
        std::mt19937 rng(73201);
        std::uniform_real_distribution<double> ux(26.0, 38.0), ua(3.0, 5.0),
            uk(-1.0, 1.0), uw(-1.0, 1.0);
        double err = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            SignedEnsemble e;
            const int rank = 1 + trial % 3;
            for (int i = 0; i < rank; ++i)
                e.terms.push_back(
                    {uw(rng), gaussian_packet(g, ux(rng), uk(rng), ua(rng))});
            DensityMatrixGrid rho =
                density_matrix_from_wigner(wigner_from_ensemble(e, kg));
            for (int a = 0; a < 64; ++a)
                for (int b = 0; b < 64; ++b) {
                    cdouble direct = 0.0;
                    for (const auto& t : e.terms)
                        direct += t.weight * t.state.amplitudes[a] *
                                  std::conj(t.state.amplitudes[b]);
                    err = std::max(err, std::abs(rho.at(a, b) - direct));
                }
        }
        report(8, "Wigner forward+inverse matches brute-force rho within 1e-10",
               err < 1e-10, "max-abs=" + str(err));
    }

    // ---- criterion 9: marginal consistency at every snapshot ---------------
    {
        double err = 0.0;
        for (const auto& s : he.snapshots)
            err = std::max(err, marginal_mismatch(s.ensemble));
        for (const auto& s : gs.snapshots)
            err = std::max(err, marginal_mismatch(s.ensemble));
        report(9, "Wigner position marginal equals Q within 1e-10", err < 1e-10,
               "max-abs=" + str(err));
    }

    // ---- criterion 10: collision trace conservation -------------------------
    {
        double worst = 0.0;
        for (const auto& s : he.snapshots)
            worst = std::max(worst, std::abs(s.ensemble.total_weight() - 1.0));
        for (const auto& s : gs.snapshots)
            worst = std::max(worst, std::abs(s.ensemble.total_weight() - 1.0));

        const SpatialGrid g = make_grid(0.0, 600.0, 601);
        std::mt19937 rng(41507);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        SignedEnsemble e;
        for (int i = 0; i < 5; ++i)
            e.terms.push_back(
                {u(rng), gaussian_packet(g, 150.0 + 60.0 * i, 0.3, 15.0)});
        RateMatrix z;
        z.Z.assign(5, std::vector<double>(5, 0.0));
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                if (i != j) z.Z[i][j] = 0.3 * u(rng);
        const double w0 = e.total_weight();
        bool nonneg = true;
        for (int s = 0; s < 1000; ++s) {
            e = general_collision_step(e, z, 1.0);
            for (const auto& t : e.terms) nonneg = nonneg && t.weight >= 0.0;
        }
        worst = std::max(worst, std::abs(e.total_weight() - w0));
        report(10, "collision operators conserve the trace within 1e-12",
               worst < 1e-12 && nonneg,
               "max drift=" + str(worst) +
                   std::string(nonneg ? "" : " (negative weight seen)"));
    }

    // ---- criterion 11: cancellation identity --------------------------------
    {
        const SpatialGrid g = make_grid(0.0, 255.0, 256);
        const Potential v = double_barrier(g, 128.0, 2.0, 0.15, 8.0);
        const Propagator prop(g, v, 2.0, mass, 2);
        const PureState phi = gaussian_packet(g, 100.0, 0.3, 10.0);
        const PureState psi = gaussian_packet(g, 160.0, -0.2, 8.0);
        SignedEnsemble padded, plain;
        padded.terms = {{1.0, psi}, {-1.0, psi}, {1.0, phi}};
        plain.terms = {{1.0, phi}};
        const std::vector<double> times = {0.0, 20.0, 60.0};
        Trajectory ta = evolve_ensemble(prop, padded, 0.0, 60.0, times);
        Trajectory tb = evolve_ensemble(prop, plain, 0.0, 60.0, times);
        const MomentumGrid kg = conjugate_momentum_grid(g);
        double err = 0.0;
        for (size_t i = 0; i < times.size(); ++i) {
            ChargeDensity qa = charge_density(ta.snapshots[i]);
            ChargeDensity qb = charge_density(tb.snapshots[i]);
            for (int j = 0; j < g.n_points; ++j)
                err = std::max(err, std::abs(qa.values[j] - qb.values[j]));
            WignerField fa =
                wigner_from_ensemble(ta.snapshots[i], kg, WignerRows::nodes_only);
            WignerField fb =
                wigner_from_ensemble(tb.snapshots[i], kg, WignerRows::nodes_only);
            for (size_t j = 0; j < fa.values.size(); ++j)
                err = std::max(err, std::abs(fa.values[j] - fb.values[j]));
            NormDecomposition da = norm_decomposition(qa);
            NormDecomposition db = norm_decomposition(qb);
            err = std::max({err, std::abs(da.positive - db.positive),
                            std::abs(da.negative - db.negative),
                            std::abs(da.total - db.total)});
            err = std::max(err, std::abs(scan_negativity(qa, 0.0).global_min.q -
                                         scan_negativity(qb, 0.0).global_min.q));
        }
        report(11, "{(1,psi),(-1,psi),(1,phi)} is indistinguishable from {(1,phi)}",
               err < 1e-12, "max-abs=" + str(err));
    }

    // ---- criterion 12: bitwise determinism ----------------------------------
    {
        const fs::path base = fs::temp_directory_path() / "qtsim_acceptance";
        fs::remove_all(base);
        const std::string run_a = (base / "a").string();
        const std::string run_b = (base / "b").string();
        run_scenario(he_run, run_a);
        run_scenario(he_run, run_b);
        bool identical = true;
        std::string offender;
        for (const auto& entry : fs::directory_iterator(run_a)) {
            const fs::path other = fs::path(run_b) / entry.path().filename();
            std::ifstream fa(entry.path(), std::ios::binary);
            std::ifstream fb(other, std::ios::binary);
            std::ostringstream sa, sb;
            sa << fa.rdbuf();
            sb << fb.rdbuf();
            if (!fb || sa.str() != sb.str()) {
                identical = false;
                offender = entry.path().filename().string();
            }
        }
        report(12, "two runs of the bundled scenario are bitwise identical",
               identical,
               identical ? "all files match" : "mismatch in " + offender);
    }

    std::printf("%d/12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
