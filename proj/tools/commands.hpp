#pragma once

#include <cstdint>
#include <string>

namespace cosshell::tool {

/// Shared command-line options. tol = 0 means "use the built-in
/// tolerance of each check".
struct CommandOptions {
    std::string config_path;
    std::uint64_t seed = 1;
    /// True when --seed was passed explicitly; it then overrides the
    /// config's seed.
    bool seed_given = false;
    std::string out;
    double tol = 0.0;
    int threads = 1;
};

/// Each command returns the process exit code: 0 on success, 1 when a
/// numerical check fails. Configuration problems throw Error, which the
/// driver maps to exit code 2.
int run_verify(const CommandOptions& opts);
int run_reduce(const CommandOptions& opts);
int run_integrate(const CommandOptions& opts);
int run_solve(const CommandOptions& opts);
int run_compare(const CommandOptions& opts);

}  // namespace cosshell::tool
