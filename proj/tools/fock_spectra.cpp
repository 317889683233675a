#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fockspectra/errors.hpp"
#include "fockspectra/report.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw fockspectra::IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis of a three-particle Fock-space Hamiltonian"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format;  // per-subcommand default below
    bool deterministic = false;
    std::vector<double> z_override;

    const std::vector<std::string> names = {"classify",    "ess-spectrum",   "bound-states",
                                            "count",       "fock-oracle",    "efimov-coef",
                                            "sr-convergence", "report"};
    for (const auto& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--deterministic", deterministic, "omit the timing block");
        if (name == "count" || name == "fock-oracle")
            sub->add_option("--z", z_override, "override bs.z_list");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // command-line problems are configuration errors
    }
    const std::string subcommand = app.get_subcommands().front()->get_name();
    if (format.empty())
        format = (subcommand == "count" || subcommand == "sr-convergence") ? "csv" : "json";

    try {
        fockspectra::RunConfig cfg = fockspectra::parse_config(read_file(config_path));
        if (!z_override.empty()) {
            for (double z : z_override)
                if (!(z < 0.0)) throw fockspectra::ConfigError("--z entries must be strictly negative");
            cfg.bs.z_list = z_override;
        }
        fockspectra::Report rep = fockspectra::run_pipeline(cfg, subcommand);
        fockspectra::write_report(rep, format, out_path, deterministic);
        return 0;
    } catch (const fockspectra::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const fockspectra::NumericalError& e) {
        std::cerr << "numerical error [" << subcommand << "]: " << e.what() << "\n";
        return 3;
    } catch (const fockspectra::PreconditionViolation& e) {
        std::cerr << "numerical error [" << subcommand << "]: " << e.what() << "\n";
        return 3;
    } catch (const fockspectra::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
