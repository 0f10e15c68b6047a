// ampsim: command-line front end for the Early-model amplifier toolkit.
//
//   ampsim <command> [--config FILE] [--out DIR] [--nt N] [--scheme euler|trapezoidal]
//                    [--set key=value]...
//
// Precedence: built-in defaults < config file < AMPSIM_<KEY> environment < flags.

#include "ampsim/commands.hpp"
#include "ampsim/config.hpp"
#include "ampsim/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Early-model common-emitter amplifier simulator"};

    std::string command;
    std::string config_path;
    std::string out_dir;
    std::size_t nt = 0;
    std::string scheme;
    std::vector<std::string> sets;

    app.add_option("command", command,
                   "op-point | transient | thd | spectrum | sweep | beta-scan | figures")
        ->required();
    app.add_option("--config", config_path, "key-value configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--nt", nt, "number of time steps");
    app.add_option("--scheme", scheme, "integration scheme")
        ->check(CLI::IsMember({"euler", "trapezoidal"}));
    app.add_option("--set", sets, "override one configuration key (key=value)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ampsim::kExitOk : ampsim::kExitInvalid;
    }

    const auto cmd = ampsim::parse_command(command);
    if (!cmd) {
        std::cerr << "unknown command '" << command << "'\n";
        return ampsim::kExitInvalid;
    }

    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::cerr << "--set expects key=value, got '" << s << "'\n";
            return ampsim::kExitInvalid;
        }
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!out_dir.empty()) overrides.emplace_back("out", out_dir);
    if (nt != 0) overrides.emplace_back("nt", std::to_string(nt));
    if (!scheme.empty()) overrides.emplace_back("scheme", scheme);

    ampsim::RunConfig cfg;
    try {
        std::optional<std::string> text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ampsim::ConfigError("cannot read config " + config_path);
            std::ostringstream buf;
            buf << in.rdbuf();
            text = buf.str();
        }
        cfg = ampsim::resolve_run_config(text ? std::optional<std::string_view>(*text)
                                              : std::nullopt,
                                         ampsim::process_environment(), overrides);
    } catch (const ampsim::ConfigError& e) {
        std::cerr << (config_path.empty() ? "config" : config_path) << ": " << e.what() << '\n';
        return ampsim::kExitInvalid;
    }

    return ampsim::run_command(*cmd, cfg, std::cout, std::cerr);
}
