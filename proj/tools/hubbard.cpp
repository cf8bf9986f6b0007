#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hubbard/app.hpp"

using namespace hubbard;

namespace {

// Flags that map onto config keys; each overrides the value from --config.
const std::map<std::string, std::string> overrides{
    {"J", "lattice.J"},           {"U", "lattice.U"},           {"L", "lattice.extent"},
    {"boundary", "lattice.boundary"}, {"t-final", "numeric.t_final"}, {"dt", "numeric.dt"},
    {"grid", "numeric.grid"},     {"E0", "numeric.E0"},         {"tau", "numeric.tau"},
    {"a", "numeric.a"},           {"T", "numeric.T"},           {"samples", "numeric.samples"},
    {"pulse", "numeric.pulse"},   {"k", "numeric.k"},           {"range", "numeric.range"},
    {"particles", "numeric.particles"}, {"output", "output.path"}, {"format", "output.format"},
    {"model", "model"},           {"experiment", "experiment"},
};

void emit(const io::Table& t, const io::RunConfig& cfg) {
    auto path = cfg.text("output.path");
    auto format = io::format_from_string(cfg.text("output.format"));
    if (path.empty())
        std::cout << io::render(t, format);
    else
        io::write_file(path, io::render(t, format));
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return app::ok;
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return app::budget_failure;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return app::numeric_failure;
    } catch (const domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return app::config_failure;
    } catch (const io::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return app::config_failure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Bose- and Fermi-Hubbard dynamics: first-order 1/Z analytics, Floquet analysis and exact diagonalisation"};
    cli.require_subcommand(0, 1);
    cli.fallthrough();

    std::string config_path, scan;
    std::map<std::string, std::string> given;
    cli.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    for (const auto& [flag, key] : overrides)
        cli.add_option("--" + flag, given[flag], "overrides " + key);
    cli.add_option("--scan", scan, "parameter scanned by bose floquet (only U)");

    std::string bose_exp, fermi_exp, ed_exp, figure;
    auto* bose = cli.add_subcommand("bose", "first-order bosonic experiments");
    bose->add_option("experiment", bose_exp)->required()->check(CLI::IsMember({"ground", "quench", "equilibrate", "tilt", "floquet"}));
    auto* fermi = cli.add_subcommand("fermi", "first-order fermionic experiments");
    fermi->add_option("experiment", fermi_exp)->required()->check(CLI::IsMember({"ground", "quench", "equilibrate", "tilt", "staggered"}));
    auto* ed = cli.add_subcommand("ed", "exact diagonalisation");
    ed->add_option("experiment", ed_exp)->required()->check(CLI::IsMember({"spectrum", "ground", "thermal", "quench", "tilt"}));
    auto* compare = cli.add_subcommand("compare-ed-z1", "ED versus first-order ground-state P(k)");
    auto* reproduce = cli.add_subcommand("reproduce", "emit the data table of a figure recipe");
    std::string catalog;
    for (const auto& [id, fn] : app::recipes()) catalog += (catalog.empty() ? "" : ", ") + id;
    reproduce->add_option("id", figure, "one of: " + catalog)->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = cli.exit(e);
        return code == 0 ? 0 : app::config_failure;
    }

    return guarded([&] {
        io::RunConfig cfg = config_path.empty() ? io::RunConfig() : io::RunConfig::from_file(config_path);
        for (const auto& [flag, value] : given)
            if (!value.empty()) cfg.set(overrides.at(flag), value);
        if (!scan.empty() && scan != "U") throw io::config_error("key 'scan': only U can be scanned");

        if (*bose) {
            cfg.set("model", "bose");
            cfg.set("experiment", bose_exp);
        } else if (*fermi) {
            cfg.set("model", "fermi");
            cfg.set("experiment", fermi_exp);
        } else if (*ed) {
            cfg.set("model", "bose");
            cfg.set("experiment", "ed-" + ed_exp);
        } else if (*compare) {
            cfg.set("model", "bose");
            cfg.set("experiment", "compare-ed-z1");
        }
        if (*reproduce) {
            cfg.validate();
            emit(app::reproduce(figure, cfg), cfg);
            return;
        }
        emit(app::run(cfg), cfg);
    });
}
