#include "qtc/config.hpp"
#include "qtc/errors.hpp"
#include "qtc/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using json = nlohmann::json;

struct Options {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string backend;
};

json read_document(const Options& opt)
{
    std::filesystem::path path;
    if (!opt.config.empty()) {
        path = opt.config;
    } else {
        path = qtc::preset_directory() / (opt.preset + ".json");
        if (!std::filesystem::exists(path)) {
            qtc::load_preset(opt.preset); // throws ConfigError listing the presets
        }
    }
    std::ifstream in(path);
    if (!in) {
        throw qtc::IoError("cannot read config file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw qtc::ConfigError("", std::string("malformed document: ") + e.what());
    }
}

int execute(qtc::Command cmd, const Options& opt)
{
    try {
        auto doc = read_document(opt);
        if (!doc.is_object()) {
            throw qtc::ConfigError("", "expected a JSON object");
        }
        if (opt.seed) {
            doc["seed"] = *opt.seed;
        }
        if (!opt.out.empty()) {
            doc["output"] = {{"directory", opt.out}};
        }
        if (!opt.backend.empty()) {
            doc["backend"] = opt.backend;
        }
        const auto cfg = qtc::validate_config(doc);
        const auto result = qtc::run_experiment(cfg, cmd);
        std::cout << result.summary.dump(2) << '\n';
        std::cout << "manifest: " << result.manifest.string() << '\n';
        if (result.exit_code == qtc::exit_halt) {
            std::cerr << "numerical halt in " << result.halt_message << '\n';
        }
        return result.exit_code;
    } catch (const qtc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return qtc::exit_config;
    } catch (const qtc::NumericalHalt& e) {
        std::cerr << "numerical halt in " << e.what() << '\n';
        return qtc::exit_halt;
    } catch (const qtc::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return qtc::exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Continuously measured quantum and classical trajectories of driven 1-D oscillators"};
    app.set_version_flag("--version", std::string(qtc::version()));
    app.require_subcommand(0, 1);
    bool list = false;
    app.add_flag("--list-presets", list, "List bundled presets");

    Options opt;
    const std::vector<std::pair<qtc::Command, std::string>> commands = {
        {qtc::Command::simulate, "Integrate one trajectory and write trajectory.csv"},
        {qtc::Command::lyapunov, "Estimate the maximal Lyapunov exponent (divergence.csv)"},
        {qtc::Command::strobe, "Record the stroboscopic map (strobe.csv)"},
        {qtc::Command::wigner_snapshot, "Write Wigner-function snapshots (quantum backends)"},
        {qtc::Command::check_classicality, "Evaluate the classicality conditions and k window"},
    };
    std::vector<std::pair<CLI::App*, qtc::Command>> subs;
    for (const auto& [cmd, help] : commands) {
        auto* sub = app.add_subcommand(std::string(qtc::command_name(cmd)), help);
        auto* cfg = sub->add_option("--config", opt.config, "Config file (JSON)");
        auto* pre = sub->add_option("--preset", opt.preset, "Bundled preset name");
        cfg->excludes(pre);
        sub->add_option("--seed", opt.seed, "Override the seed");
        sub->add_option("--out", opt.out, "Override the output directory");
        sub->add_option("--backend", opt.backend, "Override the backend");
        subs.emplace_back(sub, cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qtc::exit_config;
    }

    if (list) {
        for (const auto& p : qtc::list_presets()) {
            std::cout << p << '\n';
        }
        return 0;
    }
    for (const auto& [sub, cmd] : subs) {
        if (sub->parsed()) {
            if (opt.config.empty() && opt.preset.empty()) {
                std::cerr << "config error: give --config FILE or --preset NAME\n";
                return qtc::exit_config;
            }
            return execute(cmd, opt);
        }
    }
    std::cout << app.help();
    return 0;
}
