// dickespec: truncated open-Dicke pipeline driver.
//
//   dickespec build     construct the Liouvillian sector and store it
//   dickespec diag      diagonalize the stored Liouvillian
//   dickespec converge  tag converged eigenstates and summarize
//   dickespec scan      moving-window spectral statistics
//   dickespec calibrate synthetic Poisson / Ginibre reference run
//
// Exit codes: 0 ok, 2 configuration, 3 solver, 4 missing or foreign artifact.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "dicke/errors.hpp"
#include "dicke/pipeline.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    double gamma = 0;
    int n_max = 0;
    int two_j = 0;
    std::string sector;
    double delta = 0;
    int window = 0;
    int step = 0;
    std::uint64_t seed = 0;
    std::string out;
    bool no_cache = false;
};

// Config file first, then explicit flags on top.
dicke::RunConfig resolve_config(const CLI::App& app, const CliOptions& opt) {
    dicke::RunConfig config;
    if (app.count("--config") > 0) config = dicke::load_config(opt.config_path);
    if (app.count("--gamma") > 0) config.model.gamma = opt.gamma;
    if (app.count("--nmax") > 0) config.model.n_max = opt.n_max;
    if (app.count("--two-j") > 0) config.model.two_j = opt.two_j;
    if (app.count("--sector") > 0) config.sector = dicke::sector_from_string(opt.sector);
    if (app.count("--delta") > 0) config.delta = opt.delta;
    if (app.count("--window") > 0) config.window_size = opt.window;
    if (app.count("--step") > 0) config.window_step = opt.step;
    if (app.count("--seed") > 0) config.seed = opt.seed;
    if (app.count("--out") > 0) config.output_dir = opt.out;
    if (opt.no_cache) config.use_cache = false;
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral toolkit for the truncated open Dicke model"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON run configuration");
    app.add_option("--gamma", opt.gamma, "coupling strength");
    app.add_option("--nmax", opt.n_max, "photon truncation n_max");
    app.add_option("--two-j", opt.two_j, "twice the collective spin");
    app.add_option("--sector", opt.sector, "parity sector: +, - or full");
    app.add_option("--delta", opt.delta, "convergence tolerance Delta");
    app.add_option("--window", opt.window, "window size for the scan");
    app.add_option("--step", opt.step, "window step (0: single window)");
    app.add_option("--seed", opt.seed, "RNG seed for calibration");
    app.add_option("--out", opt.out, "output directory");
    app.add_flag("--no-cache", opt.no_cache, "ignore existing artifacts");

    CLI::App* build = app.add_subcommand("build", "construct and store the Liouvillian");
    CLI::App* diag = app.add_subcommand("diag", "diagonalize the stored Liouvillian");
    CLI::App* converge = app.add_subcommand("converge", "filter converged eigenstates");
    CLI::App* scan = app.add_subcommand("scan", "windowed spectral statistics");
    CLI::App* calibrate = app.add_subcommand("calibrate", "synthetic reference ensembles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const dicke::RunConfig config = resolve_config(app, opt);
        if (build->parsed()) dicke::cmd_build(config);
        if (diag->parsed()) dicke::cmd_diag(config);
        if (converge->parsed()) dicke::cmd_converge(config);
        if (scan->parsed()) dicke::cmd_scan(config);
        if (calibrate->parsed()) dicke::cmd_calibrate(config);
        return 0;
    } catch (const dicke::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const dicke::DimensionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const dicke::SolverError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const dicke::SymmetryError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const dicke::DependencyError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const dicke::ProvenanceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const dicke::FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
