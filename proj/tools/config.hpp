#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cosshell/integrate.hpp"
#include "cosshell/material.hpp"
#include "cosshell/minimize.hpp"
#include "cosshell/surface.hpp"

namespace cosshell::tool {

/// Everything a batch run needs, filled from an INI file with flat
/// sections. Every field has a usable default so a minimal config only
/// names what it changes.
struct RunConfig {
    MaterialParams material;

    std::string surface_kind = "plate";
    SurfaceParams surface;

    /// Amplitude of the seeded synthetic test field.
    double field_amplitude = 0.05;

    /// Seed for the synthetic field and all sampled points. An explicit
    /// --seed flag takes precedence.
    std::uint64_t seed = 1;

    QuadratureSpec quadrature;

    /// Thickness sweep of the integrate command.
    std::vector<double> study_h = {0.02, 0.01, 0.005};

    /// Solver grid resolution (nodes per direction).
    int grid_n1 = 17;
    int grid_n2 = 17;

    SolverConfig solver;

    /// Clamped edges; the remaining boundary carries the edge loads.
    std::vector<GridEdge> clamped = {GridEdge::X1Min};
    /// Prescribed clamp deformation m0 = stretch * y0. The value 1
    /// prescribes the reference position.
    double stretch = 1.0;

    LoadResultants loads;

    /// Sample count per verification suite.
    int verify_points = 64;

    /// Shear correction factors of the classical comparison density.
    ShearCorrection shear;

    /// Output directory; the --out flag overrides it. Empty means stdout.
    std::string out_dir;
};

/// Parses the INI file. Unknown sections or keys, malformed values, and
/// invalid parameter combinations all throw Error with the offending
/// name in the message.
RunConfig parse_config(const std::string& path);

/// Parses from a string (same rules); used by the round-trip checks.
RunConfig parse_config_text(const std::string& text);

/// Canonical INI serialization with every key written explicitly.
/// parse(serialize(c)) reproduces c exactly; numbers use the shortest
/// round-trip form.
std::string serialize_config(const RunConfig& config);

/// Builds the catalog surface named by the config.
Surface make_surface(const RunConfig& config);

/// FNV-1a hash of the raw config bytes plus the seed and tolerance
/// overrides. Thread count is deliberately excluded so outputs are
/// byte-identical across thread counts.
std::uint64_t config_hash(const std::string& config_bytes, std::uint64_t seed, double tol);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

std::string edge_name(GridEdge edge);

} // namespace cosshell::tool
