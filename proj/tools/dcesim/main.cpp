#include "analyses.hpp"
#include "config.hpp"
#include "scenario.hpp"

#include <CLI11.hpp>

#include <deque>
#include <iostream>
#include <optional>

using namespace dcesim;

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> assignments;
    std::optional<std::string> output_dir;
    std::optional<std::string> name;
};

// Numeric flags forwarded as config overrides.
struct Overrides {
    std::deque<std::pair<std::string, std::optional<double>>> numbers; // deque: options hold pointers
    std::deque<std::pair<std::string, std::optional<long>>> integers;
    bool scan = false;
    std::optional<std::string> field;
};

void add_common(CLI::App* sub, Common& common) {
    sub->add_option("-c,--config", common.config_path, "Scenario config file");
    sub->add_option("-s,--set", common.assignments, "Override a config value, e.g. --set wall.dL=0.02")
        ->type_name("SECTION.KEY=VALUE");
    sub->add_option("-o,--output-dir", common.output_dir, "Directory for CSV and metadata output");
    sub->add_option("--name", common.name, "Scenario name written into the outputs");
}

Config merged_config(Common const& common, Overrides const& flags, std::string const& analysis) {
    Config config = common.config_path.empty() ? Config{} : Config::load(common.config_path);
    if (!analysis.empty())
        config.set("analysis", analysis);
    for (auto const& a : common.assignments) {
        auto const eq = a.find('=');
        if (eq == std::string::npos)
            throw ConfigError("command line: --set expects SECTION.KEY=VALUE, got '" + a + "'");
        config.set(a.substr(0, eq), a.substr(eq + 1));
    }
    if (common.output_dir)
        config.set("output_dir", *common.output_dir);
    if (common.name)
        config.set("name", *common.name);
    char buffer[64];
    for (auto const& [key, value] : flags.numbers)
        if (value) {
            std::snprintf(buffer, sizeof buffer, "%.17g", *value);
            config.set(key, buffer);
        }
    for (auto const& [key, value] : flags.integers)
        if (value)
            config.set(key, std::to_string(*value));
    if (flags.scan)
        config.set("numeric.scan", "true");
    if (flags.field)
        config.set("numeric.field", *flags.field);
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamical Casimir effect in one-dimensional cavities with moving walls"};
    app.require_subcommand(1);
    app.fallthrough(false);

    std::string run_path;
    auto* run = app.add_subcommand("run", "Run the analysis named in a scenario config");
    run->add_option("config", run_path, "Scenario config file")->required();
    Common run_common;
    run->add_option("-s,--set", run_common.assignments, "Override a config value")->type_name("SECTION.KEY=VALUE");
    run->add_option("-o,--output-dir", run_common.output_dir, "Directory for CSV and metadata output");

    struct Sub {
        CLI::App* app;
        std::string analysis;
        Common common;
        Overrides flags;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    auto make = [&](char const* name, char const* analysis, char const* help) {
        auto sub = std::make_unique<Sub>();
        sub->app = app.add_subcommand(name, help);
        sub->analysis = analysis;
        add_common(sub->app, sub->common);
        subs.push_back(std::move(sub));
        return subs.back().get();
    };
    auto number = [](Sub* sub, char const* flag, char const* key, char const* help) {
        sub->flags.numbers.emplace_back(key, std::nullopt);
        sub->app->add_option(flag, sub->flags.numbers.back().second, help);
    };
    auto integer = [](Sub* sub, char const* flag, char const* key, char const* help) {
        sub->flags.integers.emplace_back(key, std::nullopt);
        sub->app->add_option(flag, sub->flags.integers.back().second, help);
    };

    auto* table = make("billiard-table", "billiard-table", "Tabulate f, f^-1 and the Doppler factor");
    number(table, "--tau-min", "numeric.tau_min", "First light-cone coordinate");
    number(table, "--tau-max", "numeric.tau_max", "Last light-cone coordinate");
    integer(table, "--points", "numeric.points", "Number of grid points");

    auto* tr = make("trace", "trace", "Trace one ray through n round trips");
    number(tr, "--tau", "numeric.tau", "Starting light-cone coordinate");
    integer(tr, "--n", "numeric.n", "Number of round trips");

    auto* res = make("resonance", "resonance", "Periodic trajectories, exponents and the detuning window");
    res->app->add_flag("--scan-domega", res->flags.scan, "Scan detunings dw/w and locate the window edges");
    number(res, "--scan-min", "numeric.scan_min", "Smallest detuning ratio");
    number(res, "--scan-max", "numeric.scan_max", "Largest detuning ratio");
    integer(res, "--scan-points", "numeric.scan_points", "Number of detuning samples");

    auto* en = make("energy", "classical-energy", "Classical energy once per resonance period");
    integer(en, "--periods", "numeric.periods", "Number of periods");

    auto* qu = make("quantum", "quantum-energy", "Vacuum energy once per resonance period");
    integer(qu, "--periods", "numeric.periods", "Number of periods");

    auto* dm = make("density-map", "density-map", "Energy density T00 on a (t, x) grid");
    number(dm, "--t-max", "numeric.t_max", "Last snapshot time");
    integer(dm, "--nx", "numeric.nx", "Points across the cavity");
    integer(dm, "--nt", "numeric.nt", "Number of snapshots");
    dm->app->add_option("--field", dm->flags.field, "classical or quantum")
        ->check(CLI::IsMember({"classical", "quantum"}));

    auto* tw = make("twowall", "twowall-modes", "Two-wall periodic trajectories, exponents and energy");
    integer(tw, "--periods", "numeric.periods", "Number of periods");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        return app.exit(e);
    }

    try {
        Config config;
        if (run->parsed()) {
            config = merged_config(run_common, {}, "");
            Config file = Config::load(run_path);
            for (auto const& [key, value] : config.values())
                file.set(key, value);
            config = file;
        } else {
            for (auto const& sub : subs)
                if (sub->app->parsed())
                    config = merged_config(sub->common, sub->flags, sub->analysis);
        }
        auto const scenario = make_scenario(config);
        return run_scenario(scenario, std::cerr);
    } catch (ConfigError const& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ConfigFailure;
    }
}
