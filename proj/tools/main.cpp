// Scenario runner: run / validate / compare.
#include "qtsim/errors.hpp"
#include "qtsim/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qtsim::ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Applies `key=value` to the raw config; the key is a dotted path
/// (e.g. collision.weight_mode.w). Values parse as JSON when possible,
/// otherwise as strings.
void apply_override(json& j, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw qtsim::ConfigError("override must look like key=value: " + kv);
    std::string path = "/" + kv.substr(0, eq);
    for (auto& c : path)
        if (c == '.') c = '/';
    const std::string raw = kv.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    j[json::json_pointer(path)] = value;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& snapshots,
            const std::vector<std::string>& overrides) {
    json raw;
    try {
        raw = json::parse(slurp(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        for (const auto& ov : overrides) apply_override(raw, ov);
        if (!snapshots.empty()) {
            json times = json::array();
            std::stringstream ss(snapshots);
            std::string tok;
            while (std::getline(ss, tok, ','))
                times.push_back(std::stod(tok));
            raw["evolution"]["snapshot_times"] = times;
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    qtsim::ValidationResult v = qtsim::validate_config(raw.dump());
    if (!v.ok()) {
        std::cerr << "config error(s) in " << config_path << ":\n";
        for (const auto& e : v.errors) std::cerr << "  - " << e << "\n";
        return kExitConfig;
    }
    try {
        const std::string manifest = qtsim::run_scenario(*v.config, out_dir);
        std::cout << "wrote " << manifest << "\n";
        return 0;
    } catch (const qtsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_validate(const std::string& config_path) {
    std::string raw;
    try {
        raw = slurp(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    qtsim::ValidationResult v = qtsim::validate_config(raw);
    if (v.ok()) {
        std::cout << config_path << ": ok\n";
        return 0;
    }
    std::cerr << config_path << ": " << v.errors.size() << " error(s)\n";
    for (const auto& e : v.errors) std::cerr << "  - " << e << "\n";
    return kExitConfig;
}

int cmd_compare(const std::string& a_path, const std::string& b_path,
                const std::string& field) {
    if (field != "decomposition") {
        std::cerr << "unsupported --field: " << field << "\n";
        return kExitConfig;
    }
    try {
        const json a = json::parse(slurp(a_path));
        const json b = json::parse(slurp(b_path));
        std::printf("%-12s %-30s %-30s\n", "t_fs", a_path.c_str(), b_path.c_str());
        const auto& sa = a.at("snapshots");
        const auto& sb = b.at("snapshots");
        for (size_t i = 0; i < std::max(sa.size(), sb.size()); ++i) {
            auto cell = [&](const json& s, size_t idx) -> std::string {
                if (idx >= s.size()) return "-";
                const json& d = s[idx]["decomposition"];
                char buf[64];
                std::snprintf(buf, sizeof buf, "%+.4f %+.4f %+.4f",
                              d["positive"].get<double>(),
                              d["negative"].get<double>(),
                              d["total"].get<double>());
                return buf;
            };
            const double t = i < sa.size() ? sa[i]["time_fs"].get<double>()
                                           : sb[i]["time_fs"].get<double>();
            std::printf("%-12g %-30s %-30s\n", t, cell(sa, i).c_str(),
                        cell(sb, i).c_str());
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "compare failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D quantum transport scenario runner"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", snapshots;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "execute a scenario and emit files");
    run->add_option("config", config_path, "scenario config (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (default: out)");
    run->add_option("--snapshots", snapshots, "comma-separated snapshot times, fs");
    run->add_option("--override", overrides, "key=value config override (dotted path)");

    std::string v_path;
    auto* validate = app.add_subcommand("validate", "check a config, report all errors");
    validate->add_option("config", v_path, "scenario config (JSON)")->required();

    std::string cmp_a, cmp_b, field = "decomposition";
    auto* compare = app.add_subcommand("compare", "compare two run manifests");
    compare->add_option("manifestA", cmp_a)->required();
    compare->add_option("manifestB", cmp_b)->required();
    compare->add_option("--field", field, "field to compare (decomposition)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_dir, snapshots, overrides);
    if (validate->parsed()) return cmd_validate(v_path);
    return cmd_compare(cmp_a, cmp_b, field);
}
