// pabosim: scenario runner for the packet-bounce link-layer simulator.
//
//   pabosim run <config|preset> --out DIR [--seed N] [--mode pabo|baseline] [--trace]
//   pabosim sweep <config|preset> [--theta a,b,..] [--lambda x,y,..]
//          [--servers n,m,..] --out DIR [--jobs N]
//   pabosim presets list
//   pabosim validate <config>
//   pabosim topology <tree|fattree> --out DIR

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pabo/pabo.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw pabo::ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// A scenario argument is either a preset name or a path to a config file.
pabo::ScenarioConfig load_scenario(const std::string& arg) {
    auto all = pabo::presets();
    if (auto it = all.find(arg); it != all.end()) return it->second;
    if (!fs::exists(arg))
        throw pabo::ConfigError(arg + ": not a preset and not a config file (see `pabosim presets list`)");
    return pabo::parse_config(slurp(arg));
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    for (const auto& tok : pabo::detail::split_list(csv)) out.push_back(std::stod(tok));
    return out;
}

std::vector<int> parse_ints(const std::string& csv) {
    std::vector<int> out;
    for (const auto& tok : pabo::detail::split_list(csv)) out.push_back(std::stoi(tok));
    return out;
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PABO link-layer simulator"};
    app.require_subcommand(1);

    std::string scenario_arg, out_dir, mode_override, theta_csv, lambda_csv, servers_csv;
    long long seed_override = -1;
    bool trace = false;
    int jobs = 0;

    auto* run = app.add_subcommand("run", "run one scenario and write its metric files");
    run->add_option("config", scenario_arg, "preset name or config file")->required();
    run->add_option("--out", out_dir, "output directory (or $PABOSIM_OUT)");
    run->add_option("--seed", seed_override, "override the scenario seed");
    run->add_option("--mode", mode_override, "override the mode: pabo or baseline");
    run->add_flag("--trace", trace, "also write the event-level trace.csv");

    auto* sweep = app.add_subcommand("sweep", "run a parameter grid and write sweep.csv");
    sweep->add_option("config", scenario_arg, "preset name or config file")->required();
    sweep->add_option("--out", out_dir, "output directory (or $PABOSIM_OUT)");
    sweep->add_option("--theta", theta_csv, "comma-separated theta values");
    sweep->add_option("--lambda", lambda_csv, "comma-separated lambda values");
    sweep->add_option("--servers", servers_csv, "comma-separated many-to-one server counts");
    sweep->add_option("--seed", seed_override, "override the base seed");
    sweep->add_option("--mode", mode_override, "override the mode: pabo or baseline");
    sweep->add_option("--jobs", jobs, "parallel workers (or $PABOSIM_JOBS; default: cores)");

    auto* presets_cmd = app.add_subcommand("presets", "preset scenarios");
    std::string presets_verb = "list";
    presets_cmd->add_option("verb", presets_verb, "list")->required();

    auto* validate_cmd = app.add_subcommand("validate", "check a config file");
    validate_cmd->add_option("config", scenario_arg, "config file or preset")->required();

    auto* topo_cmd = app.add_subcommand("topology", "export a topology as node/edge CSV");
    std::string topo_kind;
    topo_cmd->add_option("kind", topo_kind, "tree or fattree")->required();
    topo_cmd->add_option("--out", out_dir, "output directory (or $PABOSIM_OUT)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed() || sweep->parsed()) {
            pabo::ScenarioConfig cfg = load_scenario(scenario_arg);
            if (seed_override >= 0) cfg.seed = static_cast<uint64_t>(seed_override);
            if (!mode_override.empty()) cfg.mode = mode_override;
            out_dir = out_dir.empty() ? env_or("PABOSIM_OUT", "") : out_dir;
            if (out_dir.empty()) {
                std::cerr << "error: no output directory (--out or $PABOSIM_OUT)\n";
                return 1;
            }
            pabo::validate(cfg);

            if (run->parsed()) {
                auto r = pabo::run_and_write(cfg, out_dir, trace);
                std::cout << cfg.name << ": " << r.engine.dispatched << " events, created "
                          << r.created << ", delivered " << r.delivered << ", dropped "
                          << r.dropped << ", bounce events " << r.bounce_events << "\n"
                          << "outputs in " << out_dir << "\n";
            } else {
                pabo::GridSpec grid;
                if (!theta_csv.empty()) grid.thetas = parse_doubles(theta_csv);
                if (!lambda_csv.empty()) grid.lambdas = parse_doubles(lambda_csv);
                if (!servers_csv.empty()) grid.servers = parse_ints(servers_csv);
                if (jobs == 0) jobs = std::atoi(env_or("PABOSIM_JOBS", "0").c_str());
                auto rows = pabo::run_sweep(cfg, grid, jobs);
                fs::create_directories(out_dir);
                pabo::write_sweep_csv(rows, fs::path(out_dir) / "sweep.csv");
                size_t failed = 0;
                for (auto& r : rows)
                    if (!r.ok) ++failed;
                std::cout << rows.size() << " grid points, " << failed << " failed; sweep.csv in "
                          << out_dir << "\n";
            }
        } else if (presets_cmd->parsed()) {
            if (presets_verb != "list") {
                std::cerr << "error: unknown presets verb " << presets_verb << "\n";
                return 1;
            }
            for (const auto& [name, cfg] : pabo::presets())
                std::cout << name << "\t" << cfg.topology << "\t"
                          << (cfg.traffic.front().kind == pabo::TrafficBlock::Kind::burst
                                  ? "burst"
                                  : "request-reply")
                          << "\ttheta=" << cfg.theta << " lambda=" << cfg.lambda << "\n";
        } else if (validate_cmd->parsed()) {
            pabo::ScenarioConfig cfg = load_scenario(scenario_arg);
            pabo::validate(cfg);
            std::cout << cfg.name << ": valid (hash "
                      << pabo::detail::hash_hex(pabo::config_hash(cfg)) << ")\n";
        } else if (topo_cmd->parsed()) {
            out_dir = out_dir.empty() ? env_or("PABOSIM_OUT", "") : out_dir;
            if (out_dir.empty()) {
                std::cerr << "error: no output directory (--out or $PABOSIM_OUT)\n";
                return 1;
            }
            pabo::write_topology_csv(pabo::build_topology(topo_kind), out_dir);
            std::cout << "nodes.csv and edges.csv in " << out_dir << "\n";
        }
    } catch (const pabo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const pabo::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
