#include "qtsim/scenario.hpp"
#include "qtsim/errors.hpp"
#include "qtsim/potential.hpp"
#include "qtsim/wigner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qtsim {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

/// Collects every validation problem instead of stopping at the first.
struct Checker {
    std::vector<std::string>& errors;

    void fail(const std::string& msg) { errors.push_back(msg); }

    /// Rejects keys not in `allowed` (typo guard).
    void only_keys(const json& obj, const std::string& where,
                   std::initializer_list<const char*> allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool known = false;
            for (const char* k : allowed)
                if (it.key() == k) { known = true; break; }
            if (!known) fail(where + ": unknown key '" + it.key() + "'");
        }
    }

    bool require(const json& obj, const std::string& where, const char* key,
                 json::value_t kind) {
        if (!obj.contains(key)) {
            fail(where + ": missing required field '" + key + "'");
            return false;
        }
        const json& v = obj.at(key);
        const bool numeric_ok =
            kind == json::value_t::number_float && v.is_number();
        if (v.type() != kind && !numeric_ok) {
            fail(where + ": field '" + key + "' has wrong type");
            return false;
        }
        return true;
    }

    double num(const json& obj, const std::string& where, const char* key,
               bool& ok) {
        if (!require(obj, where, key, json::value_t::number_float)) {
            ok = false;
            return 0.0;
        }
        return obj.at(key).get<double>();
    }

    int integer(const json& obj, const std::string& where, const char* key,
                bool& ok) {
        if (!obj.contains(key) || !obj.at(key).is_number_integer()) {
            fail(where + ": missing or non-integer field '" + key + "'");
            ok = false;
            return 0;
        }
        return obj.at(key).get<int>();
    }
};

void parse_grid(Checker& ck, const json& j, ScenarioConfig& cfg) {
    if (!j.contains("grid") || !j["grid"].is_object()) {
        ck.fail("config: missing required block 'grid'");
        return;
    }
    const json& g = j["grid"];
    ck.only_keys(g, "grid", {"x_min", "x_max", "n_points"});
    bool ok = true;
    cfg.grid.x_min = ck.num(g, "grid", "x_min", ok);
    cfg.grid.x_max = ck.num(g, "grid", "x_max", ok);
    cfg.grid.n_points = ck.integer(g, "grid", "n_points", ok);
    if (!ok) return;
    if (!(cfg.grid.x_max > cfg.grid.x_min))
        ck.fail("grid: x_max must exceed x_min");
    if (cfg.grid.n_points < 2) ck.fail("grid: n_points must be at least 2");
}

void parse_packets(Checker& ck, const json& j, ScenarioConfig& cfg) {
    if (!j.contains("packets") || !j["packets"].is_array() ||
        j["packets"].empty()) {
        ck.fail("config: missing required non-empty array 'packets'");
        return;
    }
    int idx = 0;
    for (const json& p : j["packets"]) {
        const std::string where = "packets[" + std::to_string(idx++) + "]";
        if (!p.is_object()) {
            ck.fail(where + ": must be an object");
            continue;
        }
        ck.only_keys(p, where, {"x0", "k0", "a0"});
        bool ok = true;
        PacketSpec ps;
        ps.x0 = ck.num(p, where, "x0", ok);
        ps.k0 = ck.num(p, where, "k0", ok);
        ps.a0 = ck.num(p, where, "a0", ok);
        if (ok && ps.a0 <= 0.0) ck.fail(where + ": a0 must be positive");
        cfg.packets.push_back(ps);
    }
    if (!j.contains("coefficients") || !j["coefficients"].is_array()) {
        ck.fail("config: missing required array 'coefficients'");
        return;
    }
    for (const json& c : j["coefficients"]) {
        if (!c.is_number()) {
            ck.fail("coefficients: entries must be numbers");
            return;
        }
        cfg.coefficients.push_back(c.get<double>());
    }
    if (cfg.coefficients.size() != cfg.packets.size())
        ck.fail("coefficients: length must match the packet list");
}

void parse_potential(Checker& ck, const json& j, ScenarioConfig& cfg) {
    if (!j.contains("potential") || !j["potential"].is_object()) {
        ck.fail("config: missing required block 'potential'");
        return;
    }
    const json& p = j["potential"];
    if (!ck.require(p, "potential", "type", json::value_t::string)) return;
    cfg.potential.type = p["type"].get<std::string>();
    if (cfg.potential.type == "free") {
        ck.only_keys(p, "potential", {"type"});
    } else if (cfg.potential.type == "double_barrier") {
        ck.only_keys(p, "potential",
                     {"type", "center", "barrier_width", "height", "well_width"});
        bool ok = true;
        cfg.potential.center = ck.num(p, "potential", "center", ok);
        cfg.potential.barrier_width = ck.num(p, "potential", "barrier_width", ok);
        cfg.potential.height = ck.num(p, "potential", "height", ok);
        cfg.potential.well_width = ck.num(p, "potential", "well_width", ok);
        if (ok && (cfg.potential.barrier_width <= 0.0 ||
                   cfg.potential.well_width <= 0.0))
            ck.fail("potential: widths must be positive");
    } else {
        ck.fail("potential: type must be 'free' or 'double_barrier'");
    }
}

void parse_evolution(Checker& ck, const json& j, ScenarioConfig& cfg) {
    if (!j.contains("evolution") || !j["evolution"].is_object()) {
        ck.fail("config: missing required block 'evolution'");
        return;
    }
    const json& e = j["evolution"];
    ck.only_keys(e, "evolution", {"dt", "t_end", "substeps", "snapshot_times"});
    bool ok = true;
    cfg.evolution.dt = ck.num(e, "evolution", "dt", ok);
    cfg.evolution.t_end = ck.num(e, "evolution", "t_end", ok);
    if (e.contains("substeps"))
        cfg.evolution.substeps = ck.integer(e, "evolution", "substeps", ok);
    if (ok && cfg.evolution.dt <= 0.0) ck.fail("evolution: dt must be positive");
    if (ok && cfg.evolution.t_end < 0.0)
        ck.fail("evolution: t_end must be non-negative");
    if (ok && cfg.evolution.substeps < 1)
        ck.fail("evolution: substeps must be at least 1");
    if (!e.contains("snapshot_times") || !e["snapshot_times"].is_array()) {
        ck.fail("evolution: missing required array 'snapshot_times'");
        return;
    }
    for (const json& t : e["snapshot_times"]) {
        if (!t.is_number()) {
            ck.fail("evolution: snapshot_times entries must be numbers");
            return;
        }
        const double tv = t.get<double>();
        if (ok && (tv < 0.0 || tv > cfg.evolution.t_end))
            ck.fail("evolution: snapshot time " + std::to_string(tv) +
                    " outside [0, t_end]");
        cfg.evolution.snapshot_times.push_back(tv);
    }
    std::sort(cfg.evolution.snapshot_times.begin(),
              cfg.evolution.snapshot_times.end());
}

void parse_collision(Checker& ck, const json& j, ScenarioConfig& cfg) {
    if (!j.contains("collision") || !j["collision"].is_object()) {
        ck.fail("config: missing required block 'collision'");
        return;
    }
    const json& c = j["collision"];
    if (!ck.require(c, "collision", "mode", json::value_t::string)) return;
    cfg.collision.mode = c["mode"].get<std::string>();
    bool ok = true;
    if (cfg.collision.mode == "none") {
        ck.only_keys(c, "collision", {"mode"});
        return;
    }
    if (cfg.collision.mode != "he" && cfg.collision.mode != "gs") {
        ck.fail("collision: mode must be 'none', 'he' or 'gs'");
        return;
    }
    cfg.collision.t_S = ck.num(c, "collision", "t_S", ok);
    cfg.collision.k_F = ck.num(c, "collision", "k_F", ok);
    if (c.contains("x0_ref")) {
        if (c["x0_ref"].is_number())
            cfg.collision.x0_ref = c["x0_ref"].get<double>();
        else
            ck.fail("collision: x0_ref must be a number");
    }
    if (ok && (cfg.collision.t_S <= 0.0 ||
               cfg.collision.t_S > cfg.evolution.t_end))
        ck.fail("collision: t_S must lie in (0, t_end]");

    if (cfg.collision.mode == "he") {
        ck.only_keys(c, "collision",
                     {"mode", "t_S", "k_F", "weight_mode", "x0_ref"});
        if (!c.contains("weight_mode") || !c["weight_mode"].is_object()) {
            ck.fail("collision: he mode requires a 'weight_mode' object");
            return;
        }
        const json& wm = c["weight_mode"];
        if (!ck.require(wm, "weight_mode", "type", json::value_t::string))
            return;
        const std::string type = wm["type"].get<std::string>();
        if (type == "auto_max_safe") {
            ck.only_keys(wm, "weight_mode", {"type", "beta"});
            AutoMaxSafe am;
            if (wm.contains("beta")) am.beta = ck.num(wm, "weight_mode", "beta", ok);
            if (ok && !(am.beta > 0.0 && am.beta <= 1.0))
                ck.fail("weight_mode: beta must be in (0, 1]");
            cfg.collision.weight_mode = am;
        } else if (type == "explicit") {
            ck.only_keys(wm, "weight_mode", {"type", "w"});
            ExplicitWeight ew{ck.num(wm, "weight_mode", "w", ok)};
            if (ok && ew.w <= 0.0) ck.fail("weight_mode: w must be positive");
            cfg.collision.weight_mode = ew;
        } else {
            ck.fail("weight_mode: type must be 'auto_max_safe' or 'explicit'");
        }
    } else { // gs
        ck.only_keys(c, "collision",
                     {"mode", "t_S", "k_F", "x0_ref", "electron_count",
                      "source_index", "occupation"});
        cfg.collision.electron_count =
            ck.integer(c, "collision", "electron_count", ok);
        cfg.collision.source_index =
            ck.integer(c, "collision", "source_index", ok);
        cfg.collision.occupation = ck.integer(c, "collision", "occupation", ok);
        if (ok) {
            if (cfg.collision.electron_count < 1)
                ck.fail("collision: electron_count must be at least 1");
            if (cfg.collision.occupation < 1)
                ck.fail("collision: occupation must be at least 1");
            if (cfg.collision.source_index != 0)
                ck.fail("collision: source_index must reference the single "
                        "pre-collision state (0)");
        }
    }
}

void parse_output(Checker& ck, const json& j, ScenarioConfig& cfg) {
    if (!j.contains("output")) return; // all defaults
    if (!j["output"].is_object()) {
        ck.fail("config: 'output' must be an object");
        return;
    }
    const json& o = j["output"];
    ck.only_keys(o, "output", {"wigner_stride", "wigner_format"});
    bool ok = true;
    if (o.contains("wigner_stride"))
        cfg.output.wigner_stride = ck.integer(o, "output", "wigner_stride", ok);
    if (ok && cfg.output.wigner_stride < 1)
        ck.fail("output: wigner_stride must be at least 1");
    if (o.contains("wigner_format")) {
        if (!o["wigner_format"].is_string())
            ck.fail("output: wigner_format must be a string");
        else
            cfg.output.wigner_format = o["wigner_format"].get<std::string>();
    }
    if (cfg.output.wigner_format != "text" && cfg.output.wigner_format != "binary")
        ck.fail("output: wigner_format must be 'text' or 'binary'");
}

} // namespace

ValidationResult validate_config(const std::string& raw) {
    ValidationResult r;
    json j;
    try {
        j = json::parse(raw);
    } catch (const json::parse_error& e) {
        r.errors.push_back(std::string("config: not valid JSON (") + e.what() +
                           ")");
        return r;
    }
    if (!j.is_object()) {
        r.errors.push_back("config: top level must be an object");
        return r;
    }
    ScenarioConfig cfg;
    Checker ck{r.errors};
    ck.only_keys(j, "config",
                 {"grid", "mass", "packets", "coefficients", "potential",
                  "evolution", "collision", "output"});
    parse_grid(ck, j, cfg);
    if (!j.contains("mass") || !j["mass"].is_number())
        ck.fail("config: missing required number 'mass' (m*/m0)");
    else {
        cfg.mass = j["mass"].get<double>();
        if (cfg.mass <= 0.0) ck.fail("mass: must be positive");
    }
    parse_packets(ck, j, cfg);
    parse_potential(ck, j, cfg);
    parse_evolution(ck, j, cfg);
    parse_collision(ck, j, cfg);
    parse_output(ck, j, cfg);

    // cross-block checks that need parsed values
    if (r.errors.empty()) {
        const double dx =
            (cfg.grid.x_max - cfg.grid.x_min) / (cfg.grid.n_points - 1);
        const double k_nyquist = std::numbers::pi / dx;
        for (size_t i = 0; i < cfg.packets.size(); ++i)
            if (std::abs(cfg.packets[i].k0) >= k_nyquist)
                ck.fail("packets[" + std::to_string(i) +
                        "]: k0 outside the grid's momentum window");
        if (cfg.collision.mode != "none" &&
            std::abs(cfg.collision.k_F) >= k_nyquist)
            ck.fail("collision: k_F outside the grid's momentum window");
    }

    if (r.errors.empty()) r.config = std::move(cfg);
    return r;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    ValidationResult r = validate_config(ss.str());
    if (!r.ok()) {
        std::string msg = "invalid config " + path + ":";
        for (const auto& e : r.errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return *r.config;
}

// ---------------------------------------------------------------------------
// pipeline

namespace {

struct BuiltScenario {
    SpatialGrid grid;
    Potential potential;
    Propagator propagator;
    SignedEnsemble initial;
};

BuiltScenario build(const ScenarioConfig& cfg) {
    SpatialGrid g = make_grid(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_points);
    std::vector<PureState> packets;
    std::vector<cdouble> coeffs;
    for (size_t i = 0; i < cfg.packets.size(); ++i) {
        const auto& p = cfg.packets[i];
        packets.push_back(gaussian_packet(g, p.x0, p.k0, p.a0));
        coeffs.emplace_back(cfg.coefficients[i], 0.0);
    }
    PureState psi_B = packets.size() == 1 && cfg.coefficients[0] == 1.0
                          ? packets[0]
                          : superpose(packets, coeffs);
    Potential v = cfg.potential.type == "free"
                      ? free_potential(g)
                      : double_barrier(g, cfg.potential.center,
                                       cfg.potential.barrier_width,
                                       cfg.potential.height,
                                       cfg.potential.well_width);
    const double mass = cfg.mass * units::electron_rest_mass;
    Propagator prop(g, v, cfg.evolution.dt, mass, cfg.evolution.substeps);
    SignedEnsemble e;
    e.terms.push_back({1.0, std::move(psi_B)});
    e.electron_count =
        cfg.collision.mode == "gs" ? cfg.collision.electron_count : 1;
    return {g, std::move(v), std::move(prop), std::move(e)};
}

HeCollisionSpec he_spec_from(const ScenarioConfig& cfg) {
    HeCollisionSpec s;
    s.t_S = cfg.collision.t_S;
    s.k0 = cfg.packets.front().k0;
    s.k_F = cfg.collision.k_F;
    s.weight_mode = cfg.collision.weight_mode;
    return s;
}

void append_snapshots(std::vector<SnapshotResult>& out, const Trajectory& traj) {
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
        SnapshotResult s;
        s.requested_time = traj.requested_times[i];
        s.time = traj.times[i];
        s.ensemble = traj.snapshots[i];
        s.q = charge_density(s.ensemble);
        s.decomposition = norm_decomposition(s.q);
        s.negativity = scan_negativity(s.q, 1e-10, s.time);
        out.push_back(std::move(s));
    }
}

} // namespace

ScenarioResult execute_scenario(const ScenarioConfig& cfg) {
    BuiltScenario b = build(cfg);
    ScenarioResult res;
    const auto& times = cfg.evolution.snapshot_times;

    if (cfg.collision.mode == "none") {
        Trajectory t = evolve_ensemble(b.propagator, b.initial, 0.0,
                                       cfg.evolution.t_end, times);
        append_snapshots(res.snapshots, t);
        res.final_state = std::move(t.final_state);
        res.t_final = t.t_final;
        return res;
    }

    const double t_S = cfg.collision.t_S;
    std::vector<double> pre, post;
    for (double t : times) (t < t_S ? pre : post).push_back(t);

    Trajectory leg1 = evolve_ensemble(b.propagator, b.initial, 0.0, t_S, pre);
    append_snapshots(res.snapshots, leg1);
    const SignedEnsemble& at_tS = leg1.final_state;

    res.resolved_x0_ref = cfg.collision.x0_ref
                              ? *cfg.collision.x0_ref
                              : centroid(charge_density(at_tS));

    SignedEnsemble collided;
    const double a0 = cfg.packets.front().a0;
    const double mass = cfg.mass * units::electron_rest_mass;
    if (cfg.collision.mode == "he") {
        HeCollisionResult hc = apply_he_collision(at_tS, he_spec_from(cfg),
                                                  mass, a0, res.resolved_x0_ref);
        res.resolved_weight = hc.resolved_weight;
        collided = std::move(hc.ensemble);
    } else {
        CollisionPackets p = build_collision_packets(
            at_tS, he_spec_from(cfg), mass, a0, res.resolved_x0_ref);
        GsCollisionSpec gs{t_S, cfg.collision.source_index,
                           cfg.collision.occupation};
        collided = apply_gs_collision(at_tS, gs, p.psi_P);
    }

    Trajectory leg2 = evolve_ensemble(b.propagator, collided, t_S,
                                      cfg.evolution.t_end, post);
    append_snapshots(res.snapshots, leg2);
    res.final_state = std::move(leg2.final_state);
    res.t_final = leg2.t_final;
    return res;
}

// ---------------------------------------------------------------------------
// calibration

double calibrate_he_weight(const ScenarioConfig& cfg, double target_negative,
                           double w_max, double tol) {
    if (cfg.collision.mode != "he")
        throw ConfigError("calibrate_he_weight: scenario is not in he mode");
    if (!(target_negative < 0.0))
        throw ConfigError("calibrate_he_weight: target must be negative");

    BuiltScenario b = build(cfg);
    const double t_S = cfg.collision.t_S;
    const double t_end = cfg.evolution.t_end;
    const double mass = cfg.mass * units::electron_rest_mass;

    Trajectory leg1 = evolve_ensemble(b.propagator, b.initial, 0.0, t_S, {});
    const SignedEnsemble& at_tS = leg1.final_state;
    const double x0_ref = cfg.collision.x0_ref
                              ? *cfg.collision.x0_ref
                              : centroid(charge_density(at_tS));
    CollisionPackets p =
        build_collision_packets(at_tS, he_spec_from(cfg), mass, cfg.packets.front().a0,
                                x0_ref);

    // Evolve the three constituents once; negativity is then algebraic in w.
    SignedEnsemble parts;
    parts.terms = {{1.0, at_tS.terms.front().state},
                   {1.0, p.psi_P},
                   {1.0, p.psi_N}};
    Trajectory leg2 = evolve_ensemble(b.propagator, parts, t_S, t_end, {});
    const auto& fs = leg2.final_state.terms;
    const SpatialGrid& g = b.grid;

    auto negative_norm = [&](double w) {
        double neg = 0.0;
        for (int j = 0; j < g.n_points; ++j) {
            const double q = std::norm(fs[0].state.amplitudes[j]) +
                             w * (std::norm(fs[1].state.amplitudes[j]) -
                                  std::norm(fs[2].state.amplitudes[j]));
            if (q < 0.0) neg += q;
        }
        return neg * g.dx;
    };

    if (negative_norm(w_max) > target_negative)
        throw ConfigError(
            "calibrate_he_weight: target negativity unreachable; at w_max the "
            "negative norm is only " + std::to_string(negative_norm(w_max)));

    double lo = 0.0, hi = w_max; // negative_norm decreases with w
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (negative_norm(mid) > target_negative ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// emission

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("write failed: " + path.string());
}

json config_to_json(const ScenarioConfig& cfg, const ScenarioResult& res) {
    json j;
    j["grid"] = {{"x_min", cfg.grid.x_min},
                 {"x_max", cfg.grid.x_max},
                 {"n_points", cfg.grid.n_points}};
    j["mass"] = cfg.mass;
    j["packets"] = json::array();
    for (const auto& p : cfg.packets)
        j["packets"].push_back({{"x0", p.x0}, {"k0", p.k0}, {"a0", p.a0}});
    j["coefficients"] = cfg.coefficients;
    if (cfg.potential.type == "free")
        j["potential"] = {{"type", "free"}};
    else
        j["potential"] = {{"type", "double_barrier"},
                          {"center", cfg.potential.center},
                          {"barrier_width", cfg.potential.barrier_width},
                          {"height", cfg.potential.height},
                          {"well_width", cfg.potential.well_width}};
    j["evolution"] = {{"dt", cfg.evolution.dt},
                      {"t_end", cfg.evolution.t_end},
                      {"substeps", cfg.evolution.substeps},
                      {"snapshot_times", cfg.evolution.snapshot_times}};
    json c = {{"mode", cfg.collision.mode}};
    if (cfg.collision.mode != "none") {
        c["t_S"] = cfg.collision.t_S;
        c["k_F"] = cfg.collision.k_F;
        c["x0_ref"] = res.resolved_x0_ref;
        if (cfg.collision.mode == "he") {
            if (const auto* am = std::get_if<AutoMaxSafe>(&cfg.collision.weight_mode))
                c["weight_mode"] = {{"type", "auto_max_safe"}, {"beta", am->beta}};
            else
                c["weight_mode"] =
                    {{"type", "explicit"},
                     {"w", std::get<ExplicitWeight>(cfg.collision.weight_mode).w}};
            if (res.resolved_weight) c["resolved_weight"] = *res.resolved_weight;
        } else {
            c["electron_count"] = cfg.collision.electron_count;
            c["source_index"] = cfg.collision.source_index;
            c["occupation"] = cfg.collision.occupation;
        }
    }
    j["collision"] = c;
    j["output"] = {{"wigner_stride", cfg.output.wigner_stride},
                   {"wigner_format", cfg.output.wigner_format}};
    return j;
}

std::string charge_text(const ChargeDensity& q) {
    std::string s = "# x_nm Q_per_nm\n";
    for (int j = 0; j < q.grid.n_points; ++j)
        s += fmt(q.grid.x(j)) + " " + fmt(q.values[j]) + "\n";
    return s;
}

std::string negativity_text(const NegativityReport& r) {
    std::string s = "# negativity report, t_fs=" + fmt(r.time) + "\n";
    s += "# global_min: x_nm=" + fmt(r.global_min.x) +
         " Q_per_nm=" + fmt(r.global_min.q) + "\n";
    s += "# violations: " + std::to_string(r.violations.size()) + "\n";
    for (const auto& v : r.violations)
        s += fmt(v.x) + " " + fmt(v.q) + "\n";
    return s;
}

/// Dense dump of a (possibly row-decimated) nodes-only field; the k axis
/// is decimated here with the same stride. Text: one header line, then one
/// line per row. Binary: the same header line, then row-major doubles.
std::string wigner_bytes(const WignerField& f, int stride, bool binary) {
    const int n_rows = f.n_rows();
    const int n_cols = (f.kgrid.n_points + stride - 1) / stride;
    std::string s = "# wigner convention=" + f.convention +
                    " rows=" + std::to_string(n_rows) +
                    " cols=" + std::to_string(n_cols) + " x0_nm=" +
                    fmt(f.grid.x_min) +
                    " dx_nm=" + fmt(f.grid.dx * f.row_stride) +
                    " k0_per_nm=" + fmt(f.kgrid.k_min) +
                    " dk_per_nm=" + fmt(f.kgrid.dk * stride) +
                    " layout=" + (binary ? "binary-f64" : "text") + "\n";
    if (binary) {
        s.reserve(s.size() + size_t(n_rows) * n_cols * 8);
        for (int r = 0; r < n_rows; ++r)
            for (int ik = 0; ik < f.kgrid.n_points; ik += stride) {
                const double v = f.at(r, ik);
                const char* b = reinterpret_cast<const char*>(&v);
                s.append(b, 8);
            }
    } else {
        for (int r = 0; r < n_rows; ++r) {
            for (int ik = 0; ik < f.kgrid.n_points; ik += stride) {
                if (ik) s += ' ';
                s += fmt(f.at(r, ik));
            }
            s += '\n';
        }
    }
    return s;
}

} // namespace

std::string run_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
    ScenarioResult res = execute_scenario(cfg);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    const MomentumGrid kg =
        conjugate_momentum_grid(res.snapshots.empty()
                                    ? make_grid(cfg.grid.x_min, cfg.grid.x_max,
                                                cfg.grid.n_points)
                                    : res.snapshots.front().q.grid);

    json manifest;
    manifest["format"] = "qtsim-manifest-v1";
    manifest["convention"] = "aux2x-v1";
    manifest["config"] = config_to_json(cfg, res);
    manifest["files"] = json::array();
    manifest["snapshots"] = json::array();

    auto emit = [&](const fs::path& name, const std::string& bytes,
                    const char* role, double time = -1.0) {
        write_file(dir / name, bytes);
        json f = {{"path", name.string()},
                  {"checksum", "fnv1a64:" + fnv1a_hex(bytes)},
                  {"role", role}};
        if (time >= 0.0) f["time_fs"] = time;
        manifest["files"].push_back(f);
    };

    std::string decomp = "# t_fs positive negative total\n";
    for (size_t i = 0; i < res.snapshots.size(); ++i) {
        const SnapshotResult& s = res.snapshots[i];
        char tag[16];
        std::snprintf(tag, sizeof tag, "snap%02zu", i);
        emit(std::string(tag) + "_charge.dat", charge_text(s.q), "charge",
             s.time);
        emit(std::string(tag) + "_negativity.dat", negativity_text(s.negativity),
             "negativity", s.time);
        const WignerField f = wigner_from_ensemble(
            s.ensemble, kg, WignerRows::nodes_only, cfg.output.wigner_stride);
        emit(std::string(tag) + "_wigner.dat",
             wigner_bytes(f, cfg.output.wigner_stride,
                          cfg.output.wigner_format == "binary"),
             "wigner", s.time);
        decomp += fmt(s.time) + " " + fmt(s.decomposition.positive) + " " +
                  fmt(s.decomposition.negative) + " " +
                  fmt(s.decomposition.total) + "\n";

        json snap = {{"index", i},
                     {"requested_time_fs", s.requested_time},
                     {"time_fs", s.time},
                     {"decomposition",
                      {{"positive", s.decomposition.positive},
                       {"negative", s.decomposition.negative},
                       {"total", s.decomposition.total}}},
                     {"negativity",
                      {{"violation_count", s.negativity.violations.size()},
                       {"global_min_x_nm", s.negativity.global_min.x},
                       {"global_min_q_per_nm", s.negativity.global_min.q}}},
                     {"boundary_leak_5nm", boundary_leak(s.q, 5.0)},
                     {"total_weight", s.ensemble.total_weight()}};
        manifest["snapshots"].push_back(snap);
    }
    emit("decomposition.dat", decomp, "decomposition");

    const std::string manifest_path = (dir / "manifest.json").string();
    write_file(manifest_path, manifest.dump(2) + "\n");
    return manifest_path;
}

} // namespace qtsim
