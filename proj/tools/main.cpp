#include "commands.hpp"

#include <cosshell/errors.hpp>
#include <cosshell/version.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

int main(int argc, char** argv) {
    CLI::App app{"Batch driver for the Cosserat shell library"};
    app.set_version_flag("--version", cosshell::kVersion);
    app.require_subcommand(1);

    cosshell::tool::CommandOptions opts;
    auto add_common = [&opts](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "INI configuration file")
            ->required();
        cmd->add_option("--seed", opts.seed,
                        "Seed for sample points and the synthetic field");
        cmd->add_option("--out", opts.out,
                        "Output directory; overrides the config's [output] dir");
        cmd->add_option("--tol", opts.tol, "Override the strict check tolerance")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--threads", opts.threads,
                        "Worker threads; outputs are identical for any count")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* verify =
        app.add_subcommand("verify", "Run the geometric and kinematic identity suites");
    CLI::App* reduce =
        app.add_subcommand("reduce", "Tabulate the thickness-integrated energy density");
    CLI::App* integrate = app.add_subcommand(
        "integrate", "Compare the reduced energy against 3D quadrature over a thickness sweep");
    CLI::App* solve =
        app.add_subcommand("solve", "Minimize the shell energy on a structured grid");
    CLI::App* compare = app.add_subcommand(
        "compare", "Identify 6-parameter coefficients and check them against the model");
    for (CLI::App* cmd : {verify, reduce, integrate, solve, compare}) add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (CLI::App* cmd : {verify, reduce, integrate, solve, compare}) {
        if (cmd->parsed()) opts.seed_given = cmd->count("--seed") > 0;
    }

    try {
        if (verify->parsed()) return cosshell::tool::run_verify(opts);
        if (reduce->parsed()) return cosshell::tool::run_reduce(opts);
        if (integrate->parsed()) return cosshell::tool::run_integrate(opts);
        if (solve->parsed()) return cosshell::tool::run_solve(opts);
        if (compare->parsed()) return cosshell::tool::run_compare(opts);
    } catch (const cosshell::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
    return 2;
}
