#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cosshell/errors.hpp"

namespace cosshell::tool {

namespace {

namespace pt = boost::property_tree;

/// Allowed keys per section. Parsing rejects anything outside this table
/// so typos fail loudly instead of silently keeping a default.
const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> table = {
        {"material", {"mu", "lambda", "mu_c", "L_c", "b1", "b2", "b3", "h"}},
        {"surface", {"kind", "radius", "a", "b", "domain", "poly_x", "poly_y", "poly_z"}},
        {"field", {"amplitude", "seed"}},
        {"quadrature", {"n1", "n2", "n_gauss_cell", "n_gauss_x3"}},
        {"study", {"h_values"}},
        {"grid", {"n1", "n2"}},
        {"solver",
         {"method", "max_iters", "grad_tol", "armijo_c", "backtrack", "max_backtracks",
          "fd_step", "memory"}},
        {"bcs", {"clamped", "stretch"}},
        {"loads", {"f_bar", "t_bar", "c_omega", "c_gamma"}},
        {"verify", {"points"}},
        {"comparison", {"alpha_s", "alpha_t"}},
        {"output", {"dir"}},
    };
    return table;
}

double parse_number(const std::string& text, const std::string& where) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) {
        ++begin;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error("config: " + where + ": cannot parse number from '" + text + "'");
    }
    return value;
}

long parse_integer(const std::string& text, const std::string& where) {
    const double value = parse_number(text, where);
    const long rounded = static_cast<long>(value);
    if (static_cast<double>(rounded) != value) {
        throw Error("config: " + where + ": expected an integer, got '" + text + "'");
    }
    return rounded;
}

/// Seeds parse as full-width unsigned integers, not through double.
std::uint64_t parse_uint64(const std::string& text, const std::string& where) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) {
        ++begin;
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error("config: " + where + ": expected an unsigned integer, got '" + text +
                    "'");
    }
    return value;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& where) {
    std::vector<double> out;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) {
        out.push_back(parse_number(token, where));
    }
    return out;
}

Vec3 parse_vec3(const std::string& text, const std::string& where) {
    const std::vector<double> values = parse_numbers(text, where);
    if (values.size() != 3) {
        throw Error("config: " + where + ": expected 3 numbers, got " +
                    std::to_string(values.size()));
    }
    return {values[0], values[1], values[2]};
}

Rect parse_rect(const std::string& text, const std::string& where) {
    const std::vector<double> values = parse_numbers(text, where);
    if (values.size() != 4) {
        throw Error("config: " + where + ": expected 'a1 b1 a2 b2', got " +
                    std::to_string(values.size()) + " numbers");
    }
    Rect r{values[0], values[1], values[2], values[3]};
    if (!(r.a1 < r.b1) || !(r.a2 < r.b2)) {
        throw Error("config: " + where + ": domain bounds must be increasing");
    }
    return r;
}

/// Monomial tables are written as semicolon-separated 'j k c' triples.
MonomialTable parse_monomials(const std::string& text, const std::string& where) {
    MonomialTable table;
    std::string chunk;
    std::istringstream stream(text);
    while (std::getline(stream, chunk, ';')) {
        if (chunk.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        const std::vector<double> values = parse_numbers(chunk, where);
        if (values.size() != 3) {
            throw Error("config: " + where + ": each term needs 'j k c', got '" + chunk +
                        "'");
        }
        MonomialTerm term;
        term.j = static_cast<int>(values[0]);
        term.k = static_cast<int>(values[1]);
        if (static_cast<double>(term.j) != values[0] ||
            static_cast<double>(term.k) != values[1] || term.j < 0 || term.k < 0) {
            throw Error("config: " + where + ": exponents must be nonnegative integers");
        }
        term.c = values[2];
        table.push_back(term);
    }
    return table;
}

GridEdge parse_edge(const std::string& name, const std::string& where) {
    if (name == "x1min") {
        return GridEdge::X1Min;
    }
    if (name == "x1max") {
        return GridEdge::X1Max;
    }
    if (name == "x2min") {
        return GridEdge::X2Min;
    }
    if (name == "x2max") {
        return GridEdge::X2Max;
    }
    throw Error("config: " + where + ": unknown edge '" + name +
                "', expected x1min, x1max, x2min or x2max");
}

std::string monomials_text(const MonomialTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (i > 0) {
            out += "; ";
        }
        out += std::to_string(table[i].j) + " " + std::to_string(table[i].k) + " " +
               format_double(table[i].c);
    }
    return out;
}

RunConfig from_tree(const pt::ptree& tree) {
    for (const auto& [section, keys] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end()) {
            throw Error("config: unknown section [" + section + "]");
        }
        for (const auto& [key, value] : keys) {
            if (it->second.count(key) == 0) {
                throw Error("config: unknown key '" + key + "' in section [" + section +
                            "]");
            }
        }
    }

    RunConfig c;
    c.surface.domain = {-0.5, 0.5, -0.5, 0.5};

    auto number = [&tree](const char* section, const char* key, double fallback) {
        const auto node = tree.get_optional<std::string>(std::string(section) + "." + key);
        return node ? parse_number(*node, std::string(section) + "." + key) : fallback;
    };
    auto integer = [&tree](const char* section, const char* key, long fallback) {
        const auto node = tree.get_optional<std::string>(std::string(section) + "." + key);
        return node ? parse_integer(*node, std::string(section) + "." + key) : fallback;
    };
    auto text = [&tree](const char* section, const char* key,
                        const std::string& fallback) {
        return tree.get<std::string>(std::string(section) + "." + key, fallback);
    };

    c.material.mu = number("material", "mu", c.material.mu);
    c.material.lambda = number("material", "lambda", c.material.lambda);
    c.material.mu_c = number("material", "mu_c", c.material.mu_c);
    c.material.L_c = number("material", "L_c", c.material.L_c);
    c.material.b1 = number("material", "b1", c.material.b1);
    c.material.b2 = number("material", "b2", c.material.b2);
    c.material.b3 = number("material", "b3", c.material.b3);
    c.material.h = number("material", "h", c.material.h);
    c.material.validate();

    c.surface_kind = text("surface", "kind", c.surface_kind);
    c.surface.radius = number("surface", "radius", c.surface.radius);
    c.surface.a = number("surface", "a", c.surface.a);
    c.surface.b = number("surface", "b", c.surface.b);
    if (const auto node = tree.get_optional<std::string>("surface.domain")) {
        c.surface.domain = parse_rect(*node, "surface.domain");
    }
    if (const auto node = tree.get_optional<std::string>("surface.poly_x")) {
        c.surface.poly[0] = parse_monomials(*node, "surface.poly_x");
    }
    if (const auto node = tree.get_optional<std::string>("surface.poly_y")) {
        c.surface.poly[1] = parse_monomials(*node, "surface.poly_y");
    }
    if (const auto node = tree.get_optional<std::string>("surface.poly_z")) {
        c.surface.poly[2] = parse_monomials(*node, "surface.poly_z");
    }

    c.field_amplitude = number("field", "amplitude", c.field_amplitude);
    if (const auto node = tree.get_optional<std::string>("field.seed")) {
        c.seed = parse_uint64(*node, "field.seed");
    }

    c.quadrature.n1 = static_cast<int>(integer("quadrature", "n1", c.quadrature.n1));
    c.quadrature.n2 = static_cast<int>(integer("quadrature", "n2", c.quadrature.n2));
    c.quadrature.n_gauss_cell =
        static_cast<int>(integer("quadrature", "n_gauss_cell", c.quadrature.n_gauss_cell));
    c.quadrature.n_gauss_x3 =
        static_cast<int>(integer("quadrature", "n_gauss_x3", c.quadrature.n_gauss_x3));

    if (const auto node = tree.get_optional<std::string>("study.h_values")) {
        c.study_h = parse_numbers(*node, "study.h_values");
        if (c.study_h.size() < 2) {
            throw Error("config: study.h_values needs at least 2 thicknesses");
        }
        for (double h : c.study_h) {
            if (h <= 0.0) {
                throw Error("config: study.h_values must be positive");
            }
        }
    }

    c.grid_n1 = static_cast<int>(integer("grid", "n1", c.grid_n1));
    c.grid_n2 = static_cast<int>(integer("grid", "n2", c.grid_n2));
    if (c.grid_n1 < 2 || c.grid_n2 < 2) {
        throw Error("config: grid.n1 and grid.n2 must be at least 2");
    }

    const std::string method = text("solver", "method", "lbfgs");
    if (method == "lbfgs") {
        c.solver.method = SolverConfig::Method::LBfgs;
    } else if (method == "gd") {
        c.solver.method = SolverConfig::Method::GradientDescent;
    } else {
        throw Error("config: solver.method must be 'lbfgs' or 'gd', got '" + method + "'");
    }
    c.solver.max_iters = static_cast<int>(integer("solver", "max_iters", c.solver.max_iters));
    c.solver.grad_tol = number("solver", "grad_tol", c.solver.grad_tol);
    c.solver.armijo_c = number("solver", "armijo_c", c.solver.armijo_c);
    c.solver.backtrack = number("solver", "backtrack", c.solver.backtrack);
    c.solver.max_backtracks =
        static_cast<int>(integer("solver", "max_backtracks", c.solver.max_backtracks));
    c.solver.fd_step = number("solver", "fd_step", c.solver.fd_step);
    c.solver.memory = static_cast<int>(integer("solver", "memory", c.solver.memory));
    if (c.solver.max_iters < 1) {
        throw Error("config: solver.max_iters must be positive");
    }
    if (c.solver.grad_tol <= 0.0) {
        throw Error("config: solver.grad_tol must be positive");
    }

    if (const auto node = tree.get_optional<std::string>("bcs.clamped")) {
        c.clamped.clear();
        std::istringstream stream(*node);
        std::string name;
        while (stream >> name) {
            c.clamped.push_back(parse_edge(name, "bcs.clamped"));
        }
        if (c.clamped.empty()) {
            throw Error("config: bcs.clamped names no edges");
        }
    }
    c.stretch = number("bcs", "stretch", c.stretch);
    if (c.stretch <= 0.0) {
        throw Error("config: bcs.stretch must be positive");
    }

    if (const auto node = tree.get_optional<std::string>("loads.f_bar")) {
        c.loads.f_bar = parse_vec3(*node, "loads.f_bar");
    }
    if (const auto node = tree.get_optional<std::string>("loads.t_bar")) {
        c.loads.t_bar = parse_vec3(*node, "loads.t_bar");
    }
    if (const auto node = tree.get_optional<std::string>("loads.c_omega")) {
        c.loads.c_omega = parse_vec3(*node, "loads.c_omega");
    }
    if (const auto node = tree.get_optional<std::string>("loads.c_gamma")) {
        c.loads.c_gamma = parse_vec3(*node, "loads.c_gamma");
    }

    c.verify_points = static_cast<int>(integer("verify", "points", c.verify_points));
    if (c.verify_points < 1) {
        throw Error("config: verify.points must be positive");
    }

    c.shear.alpha_s = number("comparison", "alpha_s", c.shear.alpha_s);
    c.shear.alpha_t = number("comparison", "alpha_t", c.shear.alpha_t);
    if (c.shear.alpha_s <= 0.0 || c.shear.alpha_t <= 0.0) {
        throw Error("config: comparison.alpha_s and comparison.alpha_t must be positive");
    }

    c.out_dir = text("output", "dir", c.out_dir);

    make_surface(c);
    return c;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    pt::ptree tree;
    std::istringstream stream(text);
    try {
        pt::read_ini(stream, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(std::string("config: ") + e.what());
    }
    return from_tree(tree);
}

RunConfig parse_config(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw Error("config: cannot open '" + path + "'");
    }
    std::ostringstream content;
    content << file.rdbuf();
    return parse_config_text(content.str());
}

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string edge_name(GridEdge edge) {
    switch (edge) {
    case GridEdge::X1Min:
        return "x1min";
    case GridEdge::X1Max:
        return "x1max";
    case GridEdge::X2Min:
        return "x2min";
    case GridEdge::X2Max:
        return "x2max";
    }
    return "x1min";
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    auto vec3_text = [](const Vec3& v) {
        return format_double(v(0)) + " " + format_double(v(1)) + " " + format_double(v(2));
    };

    out << "[material]\n";
    out << "mu = " << format_double(c.material.mu) << "\n";
    out << "lambda = " << format_double(c.material.lambda) << "\n";
    out << "mu_c = " << format_double(c.material.mu_c) << "\n";
    out << "L_c = " << format_double(c.material.L_c) << "\n";
    out << "b1 = " << format_double(c.material.b1) << "\n";
    out << "b2 = " << format_double(c.material.b2) << "\n";
    out << "b3 = " << format_double(c.material.b3) << "\n";
    out << "h = " << format_double(c.material.h) << "\n";

    out << "\n[surface]\n";
    out << "kind = " << c.surface_kind << "\n";
    out << "radius = " << format_double(c.surface.radius) << "\n";
    out << "a = " << format_double(c.surface.a) << "\n";
    out << "b = " << format_double(c.surface.b) << "\n";
    out << "domain = " << format_double(c.surface.domain.a1) << " "
        << format_double(c.surface.domain.b1) << " " << format_double(c.surface.domain.a2)
        << " " << format_double(c.surface.domain.b2) << "\n";
    if (!c.surface.poly[0].empty()) {
        out << "poly_x = " << monomials_text(c.surface.poly[0]) << "\n";
    }
    if (!c.surface.poly[1].empty()) {
        out << "poly_y = " << monomials_text(c.surface.poly[1]) << "\n";
    }
    if (!c.surface.poly[2].empty()) {
        out << "poly_z = " << monomials_text(c.surface.poly[2]) << "\n";
    }

    out << "\n[field]\n";
    out << "amplitude = " << format_double(c.field_amplitude) << "\n";
    out << "seed = " << c.seed << "\n";

    out << "\n[quadrature]\n";
    out << "n1 = " << c.quadrature.n1 << "\n";
    out << "n2 = " << c.quadrature.n2 << "\n";
    out << "n_gauss_cell = " << c.quadrature.n_gauss_cell << "\n";
    out << "n_gauss_x3 = " << c.quadrature.n_gauss_x3 << "\n";

    out << "\n[study]\n";
    out << "h_values =";
    for (double h : c.study_h) {
        out << " " << format_double(h);
    }
    out << "\n";

    out << "\n[grid]\n";
    out << "n1 = " << c.grid_n1 << "\n";
    out << "n2 = " << c.grid_n2 << "\n";

    out << "\n[solver]\n";
    out << "method = "
        << (c.solver.method == SolverConfig::Method::LBfgs ? "lbfgs" : "gd") << "\n";
    out << "max_iters = " << c.solver.max_iters << "\n";
    out << "grad_tol = " << format_double(c.solver.grad_tol) << "\n";
    out << "armijo_c = " << format_double(c.solver.armijo_c) << "\n";
    out << "backtrack = " << format_double(c.solver.backtrack) << "\n";
    out << "max_backtracks = " << c.solver.max_backtracks << "\n";
    out << "fd_step = " << format_double(c.solver.fd_step) << "\n";
    out << "memory = " << c.solver.memory << "\n";

    out << "\n[bcs]\n";
    out << "clamped =";
    for (GridEdge edge : c.clamped) {
        out << " " << edge_name(edge);
    }
    out << "\n";
    out << "stretch = " << format_double(c.stretch) << "\n";

    out << "\n[loads]\n";
    out << "f_bar = " << vec3_text(c.loads.f_bar) << "\n";
    out << "t_bar = " << vec3_text(c.loads.t_bar) << "\n";
    out << "c_omega = " << vec3_text(c.loads.c_omega) << "\n";
    out << "c_gamma = " << vec3_text(c.loads.c_gamma) << "\n";

    out << "\n[verify]\n";
    out << "points = " << c.verify_points << "\n";

    out << "\n[comparison]\n";
    out << "alpha_s = " << format_double(c.shear.alpha_s) << "\n";
    out << "alpha_t = " << format_double(c.shear.alpha_t) << "\n";

    if (!c.out_dir.empty()) {
        out << "\n[output]\n";
        out << "dir = " << c.out_dir << "\n";
    }
    return out.str();
}

Surface make_surface(const RunConfig& config) {
    return builtin_surface(config.surface_kind, config.surface);
}

std::uint64_t config_hash(const std::string& config_bytes, std::uint64_t seed, double tol) {
    std::uint64_t hash = 1469598103934665603ull;
    auto absorb = [&hash](const std::string& bytes) {
        for (const char byte : bytes) {
            hash ^= static_cast<unsigned char>(byte);
            hash *= 1099511628211ull;
        }
    };
    absorb(config_bytes);
    absorb("|seed=" + std::to_string(seed));
    absorb("|tol=" + format_double(tol));
    return hash;
}

} // namespace cosshell::tool
