#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "cosshell/energy.hpp"
#include "cosshell/kinematics.hpp"
#include "cosshell/linalg.hpp"
#include "cosshell/material.hpp"
#include "cosshell/surface.hpp"

namespace cosshell {

/// Node layout of the structured grid over the parameter rectangle.
/// Each node carries 7 raw DOFs: the midsurface displacement u = m - y0
/// and the rotation as a quaternion (w, x, y, z).
struct ShellGrid {
    int n1 = 17;
    int n2 = 17;
    Rect domain;

    int node(int i1, int i2) const { return i2 * n1 + i1; }
    int node_count() const { return n1 * n2; }
    double spacing1() const { return domain.width1() / (n1 - 1); }
    double spacing2() const { return domain.width2() / (n2 - 1); }
    Vec2 coords(int i1, int i2) const {
        return {domain.a1 + i1 * spacing1(), domain.a2 + i2 * spacing2()};
    }
};

inline constexpr int kDofsPerNode = 7;

enum class GridEdge { X1Min, X1Max, X2Min, X2Max };

/// Prescribed deformation and rotation along one grid edge. Null
/// functions prescribe the reference values.
struct ClampSpec {
    GridEdge edge = GridEdge::X1Min;
    std::function<Vec3(const GeometryFrame&)> m0;
    std::function<Mat3(const GeometryFrame&)> rotation;
};

/// Dirichlet data and dead loads. A node on any clamped edge has all its
/// DOFs fixed; edge loads act on the remaining boundary sides.
struct BoundaryConditions {
    std::vector<ClampSpec> clamps;
    LoadResultants loads;
};

struct SolverConfig {
    enum class Method { GradientDescent, LBfgs };
    Method method = Method::LBfgs;
    int max_iters = 500;
    /// Termination threshold on the free-DOF gradient norm.
    double grad_tol = 1e-8;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 60;
    /// Central-difference step for the rotation DOFs.
    double fd_step = 1e-6;
    /// History length of the limited-memory quasi-Newton update.
    int memory = 10;
    /// Worker threads for energy and gradient assembly. Results are
    /// bitwise independent of this value.
    int threads = 1;
};

struct SolveReport {
    bool converged = false;
    bool line_search_stalled = false;
    int iterations = 0;
    /// Final objective, elastic energy minus load potential.
    double energy = 0.0;
    double gradient_norm = 0.0;
    /// Objective after the initial point and each accepted step.
    std::vector<double> energy_history;
    /// Integrated elastic parts and load potential; area_element carries
    /// the total midsurface area.
    EnergyBreakdown breakdown;
};

/// Discretized functional: precomputed reference frames and shape data
/// per quadrature point, exposing the objective and its gradient over the
/// raw DOF vector. Immutable after construction and safe to share across
/// threads.
class Problem {
public:
    Problem(const ShellGrid& grid, const BoundaryConditions& bcs, const Surface& surface,
            const MaterialParams& params);

    const ShellGrid& grid() const { return grid_; }
    const MaterialParams& material() const { return params_; }
    int dof_count() const { return kDofsPerNode * grid_.node_count(); }
    /// True for DOFs eliminated by the Dirichlet data.
    const std::vector<bool>& fixed() const { return fixed_; }

    /// Reference DOFs (u = 0, identity quaternions) with the Dirichlet
    /// values written in.
    std::vector<double> reference_dofs() const;
    /// Overwrites the fixed DOFs with their prescribed values.
    void apply_dirichlet(std::vector<double>& dofs) const;
    /// Rescales every quaternion block to unit norm.
    void renormalize(std::vector<double>& dofs) const;

    /// Objective value: elastic energy minus the dead-load potential.
    double energy(const std::vector<double>& dofs, int threads = 1) const;
    /// Objective gradient; entries of fixed DOFs are zero. Displacement
    /// entries and all load terms are assembled analytically, rotation
    /// entries of the elastic part by cellwise central differences.
    std::vector<double> gradient(const std::vector<double>& dofs, double fd_step = 1e-6,
                                 int threads = 1) const;
    /// Integrated energy parts at the given DOFs.
    EnergyBreakdown breakdown(const std::vector<double>& dofs, int threads = 1) const;

    /// Interpolated state at a parameter point, evaluated in the cell
    /// containing it.
    ShellPointState state_at(const std::vector<double>& dofs, double x1, double x2) const;
    /// Strain measures at a grid node, using the shape gradients of an
    /// adjacent cell.
    StrainMeasures strain_at_node(const std::vector<double>& dofs, int i1, int i2) const;
    /// Reference frame stored for a node.
    const GeometryFrame& node_frame(int i1, int i2) const;

private:
    struct QuadPoint {
        GeometryFrame frame;
        std::array<double, 4> shape{};
        std::array<Vec2, 4> shape_grad{};
        double weight = 0.0;
    };
    struct Cell {
        std::array<int, 4> nodes{};
        std::array<QuadPoint, 4> points{};
    };
    struct EdgePoint {
        GeometryFrame frame;
        std::array<int, 2> nodes{};
        std::array<double, 2> shape{};
        double weight = 0.0;
    };
    /// Interpolated state plus the blended raw quaternion.
    struct PointState {
        ShellPointState state;
        Vec4 q_raw = Vec4::Zero();
    };

    static std::array<double, 28> gather(const Cell& cell, const std::vector<double>& dofs);
    static PointState blend(const QuadPoint& point, const std::array<double, 28>& local);
    double cell_elastic(const Cell& cell, const std::array<double, 28>& local) const;

    ShellGrid grid_;
    Surface surface_;
    MaterialParams params_;
    LoadResultants loads_;
    std::vector<bool> fixed_;
    std::vector<double> dirichlet_values_;
    std::vector<Cell> cells_;
    std::vector<EdgePoint> edge_points_;
    std::vector<GeometryFrame> node_frames_;
};

/// Builds the discrete problem. Throws InvalidBcs when no edge is
/// clamped and Inadmissible when the reference geometry violates the
/// thickness bound at a quadrature point.
Problem assemble(const ShellGrid& grid, const BoundaryConditions& bcs,
                 const Surface& surface, const MaterialParams& params);

/// Quaternion update by the rotation increment w: q composed with the
/// exponential of anti(w), renormalized.
Vec4 rotation_retraction(const Vec4& q, const Vec3& w);

/// Descent on the raw DOFs with backtracking line search; quaternions are
/// pulled back to unit norm before each trial evaluation. The energy over
/// accepted iterations never increases.
std::pair<std::vector<double>, SolveReport> minimize(const Problem& problem,
                                                     const SolverConfig& config,
                                                     std::vector<double> initial = {});

} // namespace cosshell
