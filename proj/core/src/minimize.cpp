#include "cosshell/minimize.hpp"

#include <cmath>
#include <deque>
#include <utility>

#include "cosshell/integrate.hpp"
#include "parallel_for.hpp"

namespace cosshell {

namespace {

template <typename Fn>
void for_each_edge_node(const ShellGrid& grid, GridEdge edge, Fn&& fn) {
    switch (edge) {
    case GridEdge::X1Min:
        for (int i2 = 0; i2 < grid.n2; ++i2) fn(0, i2);
        break;
    case GridEdge::X1Max:
        for (int i2 = 0; i2 < grid.n2; ++i2) fn(grid.n1 - 1, i2);
        break;
    case GridEdge::X2Min:
        for (int i1 = 0; i1 < grid.n1; ++i1) fn(i1, 0);
        break;
    case GridEdge::X2Max:
        for (int i1 = 0; i1 < grid.n1; ++i1) fn(i1, grid.n2 - 1);
        break;
    }
}

const std::array<double, 2> kGauss2 = {0.5 - 0.5 / std::sqrt(3.0),
                                       0.5 + 0.5 / std::sqrt(3.0)};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(std::vector<double>& out, double alpha, const std::vector<double>& v) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += alpha * v[i];
    }
}

using CurvaturePair = std::pair<std::vector<double>, std::vector<double>>;

/// Two-loop recursion of the limited-memory inverse Hessian applied to g.
std::vector<double> two_loop(const std::vector<double>& g,
                             const std::deque<CurvaturePair>& pairs) {
    std::vector<double> q = g;
    const int m = static_cast<int>(pairs.size());
    std::vector<double> alpha(m, 0.0);
    std::vector<double> rho(m, 0.0);
    for (int i = m - 1; i >= 0; --i) {
        const auto& [s, y] = pairs[i];
        rho[i] = 1.0 / dot(s, y);
        alpha[i] = rho[i] * dot(s, q);
        axpy(q, -alpha[i], y);
    }
    const auto& [s_last, y_last] = pairs.back();
    const double gamma = dot(s_last, y_last) / dot(y_last, y_last);
    for (auto& v : q) {
        v *= gamma;
    }
    for (int i = 0; i < m; ++i) {
        const auto& [s, y] = pairs[i];
        const double beta = rho[i] * dot(y, q);
        axpy(q, alpha[i] - beta, s);
    }
    return q;
}

} // namespace

Problem::Problem(const ShellGrid& grid, const BoundaryConditions& bcs, const Surface& surface,
                 const MaterialParams& params)
    : grid_(grid), surface_(surface), params_(params), loads_(bcs.loads) {
    if (grid_.n1 < 2 || grid_.n2 < 2) {
        throw Error("Problem: grid needs at least 2x2 nodes");
    }
    params_.validate();
    if (bcs.clamps.empty()) {
        throw InvalidBcs("Problem: at least one clamped edge is required");
    }

    node_frames_.reserve(grid_.node_count());
    for (int i2 = 0; i2 < grid_.n2; ++i2) {
        for (int i1 = 0; i1 < grid_.n1; ++i1) {
            const Vec2 x = grid_.coords(i1, i2);
            node_frames_.push_back(frame_at(surface_, x(0), x(1)));
        }
    }

    fixed_.assign(dof_count(), false);
    dirichlet_values_.assign(dof_count(), 0.0);
    for (const ClampSpec& clamp : bcs.clamps) {
        for_each_edge_node(grid_, clamp.edge, [&](int i1, int i2) {
            const int n = grid_.node(i1, i2);
            const GeometryFrame& frame = node_frames_[n];
            const Vec3 m0 = clamp.m0 ? clamp.m0(frame) : frame.y0;
            const Mat3 rot = clamp.rotation ? clamp.rotation(frame) : Mat3::Identity();
            const Vec3 u = m0 - frame.y0;
            const Vec4 q = rotation_to_quat(rot);
            const int base = kDofsPerNode * n;
            for (int j = 0; j < 3; ++j) {
                fixed_[base + j] = true;
                dirichlet_values_[base + j] = u(j);
            }
            for (int j = 0; j < 4; ++j) {
                fixed_[base + 3 + j] = true;
                dirichlet_values_[base + 3 + j] = q(j);
            }
        });
    }

    const double h1 = grid_.spacing1();
    const double h2 = grid_.spacing2();
    cells_.reserve(static_cast<std::size_t>(grid_.n1 - 1) * (grid_.n2 - 1));
    for (int c2 = 0; c2 + 1 < grid_.n2; ++c2) {
        for (int c1 = 0; c1 + 1 < grid_.n1; ++c1) {
            Cell cell;
            cell.nodes = {grid_.node(c1, c2), grid_.node(c1 + 1, c2), grid_.node(c1, c2 + 1),
                          grid_.node(c1 + 1, c2 + 1)};
            int k = 0;
            for (double t : kGauss2) {
                for (double s : kGauss2) {
                    QuadPoint& qp = cell.points[k++];
                    const double x1 = grid_.domain.a1 + (c1 + s) * h1;
                    const double x2 = grid_.domain.a2 + (c2 + t) * h2;
                    qp.frame = frame_at(surface_, x1, x2);
                    if (!admissibility_check(qp.frame, params_.h).ok) {
                        throw Inadmissible(
                            "Problem: thickness exceeds the curvature bound at a "
                            "quadrature point");
                    }
                    qp.shape = {(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t};
                    qp.shape_grad = {Vec2(-(1.0 - t) / h1, -(1.0 - s) / h2),
                                     Vec2((1.0 - t) / h1, -s / h2),
                                     Vec2(-t / h1, (1.0 - s) / h2), Vec2(t / h1, s / h2)};
                    qp.weight = 0.25 * h1 * h2;
                }
            }
            cells_.push_back(std::move(cell));
        }
    }

    std::array<bool, 4> clamped{};
    for (const ClampSpec& clamp : bcs.clamps) {
        clamped[static_cast<int>(clamp.edge)] = true;
    }
    for (int e = 0; e < 4; ++e) {
        if (clamped[e]) {
            continue;
        }
        const auto edge = static_cast<GridEdge>(e);
        const bool along2 = edge == GridEdge::X1Min || edge == GridEdge::X1Max;
        const int segments = along2 ? grid_.n2 - 1 : grid_.n1 - 1;
        const double len = along2 ? h2 : h1;
        for (int i = 0; i < segments; ++i) {
            for (double t : kGauss2) {
                EdgePoint ep;
                double x1 = 0.0;
                double x2 = 0.0;
                switch (edge) {
                case GridEdge::X1Min:
                case GridEdge::X1Max: {
                    const int i1 = edge == GridEdge::X1Min ? 0 : grid_.n1 - 1;
                    ep.nodes = {grid_.node(i1, i), grid_.node(i1, i + 1)};
                    x1 = grid_.coords(i1, 0)(0);
                    x2 = grid_.domain.a2 + (i + t) * h2;
                    break;
                }
                case GridEdge::X2Min:
                case GridEdge::X2Max: {
                    const int i2 = edge == GridEdge::X2Min ? 0 : grid_.n2 - 1;
                    ep.nodes = {grid_.node(i, i2), grid_.node(i + 1, i2)};
                    x1 = grid_.domain.a1 + (i + t) * h1;
                    x2 = grid_.coords(0, i2)(1);
                    break;
                }
                }
                ep.frame = frame_at(surface_, x1, x2);
                ep.shape = {1.0 - t, t};
                ep.weight = 0.5 * len;
                edge_points_.push_back(std::move(ep));
            }
        }
    }
}

std::array<double, 28> Problem::gather(const Cell& cell, const std::vector<double>& dofs) {
    std::array<double, 28> local{};
    for (int a = 0; a < 4; ++a) {
        for (int j = 0; j < kDofsPerNode; ++j) {
            local[kDofsPerNode * a + j] = dofs[kDofsPerNode * cell.nodes[a] + j];
        }
    }
    return local;
}

Problem::PointState Problem::blend(const QuadPoint& point, const std::array<double, 28>& local) {
    Vec3 u = Vec3::Zero();
    Mat32 grad_u = Mat32::Zero();
    Vec4 q = Vec4::Zero();
    std::array<Vec4, 2> dq = {Vec4::Zero(), Vec4::Zero()};
    for (int a = 0; a < 4; ++a) {
        const Eigen::Map<const Vec3> ua(&local[kDofsPerNode * a]);
        const Eigen::Map<const Vec4> qa(&local[kDofsPerNode * a + 3]);
        u += point.shape[a] * ua;
        q += point.shape[a] * qa;
        for (int d = 0; d < 2; ++d) {
            grad_u.col(d) += point.shape_grad[a](d) * ua;
            dq[d] += point.shape_grad[a](d) * qa;
        }
    }
    PointState out;
    out.q_raw = q;
    out.state.m = point.frame.y0 + u;
    out.state.grad_m = point.frame.grad_y0 + grad_u;
    out.state.Qe = quat_to_rotation(q);
    out.state.dQe = {quat_to_rotation_derivative(q, dq[0]),
                     quat_to_rotation_derivative(q, dq[1])};
    return out;
}

double Problem::cell_elastic(const Cell& cell, const std::array<double, 28>& local) const {
    double value = 0.0;
    for (const QuadPoint& qp : cell.points) {
        const PointState ps = blend(qp, local);
        const StrainMeasures sm = strain_measures(qp.frame, ps.state, params_);
        value += qp.weight * reduced_density(qp.frame, sm, params_).total * qp.frame.det0;
    }
    return value;
}

std::vector<double> Problem::reference_dofs() const {
    std::vector<double> dofs(dof_count(), 0.0);
    for (int n = 0; n < grid_.node_count(); ++n) {
        dofs[kDofsPerNode * n + 3] = 1.0;
    }
    apply_dirichlet(dofs);
    return dofs;
}

void Problem::apply_dirichlet(std::vector<double>& dofs) const {
    for (int i = 0; i < dof_count(); ++i) {
        if (fixed_[i]) {
            dofs[i] = dirichlet_values_[i];
        }
    }
}

void Problem::renormalize(std::vector<double>& dofs) const {
    for (int n = 0; n < grid_.node_count(); ++n) {
        Eigen::Map<Vec4> q(&dofs[kDofsPerNode * n + 3]);
        const double qn = q.norm();
        if (!(qn > 0.0) || !std::isfinite(qn)) {
            throw Degenerate("renormalize: quaternion collapsed to zero");
        }
        q /= qn;
    }
}

double Problem::energy(const std::vector<double>& dofs, int threads) const {
    std::vector<double> terms(cells_.size() + edge_points_.size(), 0.0);
    detail::parallel_for(cells_.size(), threads, [&](std::size_t i) {
        const Cell& cell = cells_[i];
        const auto local = gather(cell, dofs);
        double value = 0.0;
        for (const QuadPoint& qp : cell.points) {
            const PointState ps = blend(qp, local);
            const StrainMeasures sm = strain_measures(qp.frame, ps.state, params_);
            const EnergyBreakdown bd = reduced_density(qp.frame, sm, params_);
            const LoadDensities load =
                load_potential(loads_, ps.state.m, qp.frame.y0, ps.state.Qe, qp.frame.n0);
            value += qp.weight * (bd.total * qp.frame.det0 - load.area);
        }
        terms[i] = value;
    });
    for (std::size_t i = 0; i < edge_points_.size(); ++i) {
        const EdgePoint& ep = edge_points_[i];
        Vec3 u = Vec3::Zero();
        Vec4 q = Vec4::Zero();
        for (int a = 0; a < 2; ++a) {
            const int base = kDofsPerNode * ep.nodes[a];
            u += ep.shape[a] * Eigen::Map<const Vec3>(&dofs[base]);
            q += ep.shape[a] * Eigen::Map<const Vec4>(&dofs[base + 3]);
        }
        const LoadDensities load = load_potential(loads_, ep.frame.y0 + u, ep.frame.y0,
                                                  quat_to_rotation(q), ep.frame.n0);
        terms[cells_.size() + i] = -ep.weight * load.edge;
    }
    return pairwise_sum(std::move(terms));
}

std::vector<double> Problem::gradient(const std::vector<double>& dofs, double fd_step,
                                      int threads) const {
    std::vector<double> grad(dof_count(), 0.0);
    std::vector<std::array<double, 28>> cell_grads(cells_.size());
    detail::parallel_for(cells_.size(), threads, [&](std::size_t ci) {
        const Cell& cell = cells_[ci];
        auto local = gather(cell, dofs);
        std::array<double, 28>& out = cell_grads[ci];
        out.fill(0.0);
        for (const QuadPoint& qp : cell.points) {
            const PointState ps = blend(qp, local);
            const StrainMeasures sm = strain_measures(qp.frame, ps.state, params_);
            const DensityGradients dg =
                reduced_density_gradients(qp.frame, sm, ps.state.Qe, params_);
            for (int a = 0; a < 4; ++a) {
                const Vec3 gu = qp.weight * qp.frame.det0 * (dg.dGradM * qp.shape_grad[a]) -
                                qp.weight * qp.shape[a] * loads_.f_bar;
                for (int j = 0; j < 3; ++j) {
                    out[kDofsPerNode * a + j] += gu(j);
                }
                if (loads_.c_omega.squaredNorm() > 0.0) {
                    for (int k = 0; k < 4; ++k) {
                        Vec4 dq = Vec4::Zero();
                        dq(k) = qp.shape[a];
                        const Mat3 dR = quat_to_rotation_derivative(ps.q_raw, dq);
                        out[kDofsPerNode * a + 3 + k] -=
                            qp.weight * loads_.c_omega.dot(dR * qp.frame.n0);
                    }
                }
            }
        }
        for (int a = 0; a < 4; ++a) {
            for (int k = 0; k < 4; ++k) {
                if (fixed_[kDofsPerNode * cell.nodes[a] + 3 + k]) {
                    continue;
                }
                const int li = kDofsPerNode * a + 3 + k;
                const double saved = local[li];
                local[li] = saved + fd_step;
                const double ep = cell_elastic(cell, local);
                local[li] = saved - fd_step;
                const double em = cell_elastic(cell, local);
                local[li] = saved;
                out[li] += (ep - em) / (2.0 * fd_step);
            }
        }
    });
    for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
        const Cell& cell = cells_[ci];
        for (int a = 0; a < 4; ++a) {
            for (int j = 0; j < kDofsPerNode; ++j) {
                grad[kDofsPerNode * cell.nodes[a] + j] += cell_grads[ci][kDofsPerNode * a + j];
            }
        }
    }
    for (const EdgePoint& ep : edge_points_) {
        Vec4 q = Vec4::Zero();
        for (int a = 0; a < 2; ++a) {
            q += ep.shape[a] * Eigen::Map<const Vec4>(&dofs[kDofsPerNode * ep.nodes[a] + 3]);
        }
        for (int a = 0; a < 2; ++a) {
            const int base = kDofsPerNode * ep.nodes[a];
            for (int j = 0; j < 3; ++j) {
                grad[base + j] -= ep.weight * ep.shape[a] * loads_.t_bar(j);
            }
            if (loads_.c_gamma.squaredNorm() > 0.0) {
                for (int k = 0; k < 4; ++k) {
                    Vec4 dq = Vec4::Zero();
                    dq(k) = ep.shape[a];
                    const Mat3 dR = quat_to_rotation_derivative(q, dq);
                    grad[base + 3 + k] -= ep.weight * loads_.c_gamma.dot(dR * ep.frame.n0);
                }
            }
        }
    }
    for (int i = 0; i < dof_count(); ++i) {
        if (fixed_[i]) {
            grad[i] = 0.0;
        }
    }
    return grad;
}

EnergyBreakdown Problem::breakdown(const std::vector<double>& dofs, int threads) const {
    const std::size_t nc = cells_.size();
    std::vector<double> memb(nc, 0.0);
    std::vector<double> memb_bend(nc, 0.0);
    std::vector<double> bend_curv(nc, 0.0);
    std::vector<double> area(nc, 0.0);
    std::vector<double> load(nc + edge_points_.size(), 0.0);
    detail::parallel_for(nc, threads, [&](std::size_t i) {
        const Cell& cell = cells_[i];
        const auto local = gather(cell, dofs);
        for (const QuadPoint& qp : cell.points) {
            const PointState ps = blend(qp, local);
            const StrainMeasures sm = strain_measures(qp.frame, ps.state, params_);
            const EnergyBreakdown bd = reduced_density(qp.frame, sm, params_);
            const LoadDensities lp =
                load_potential(loads_, ps.state.m, qp.frame.y0, ps.state.Qe, qp.frame.n0);
            const double w = qp.weight * qp.frame.det0;
            memb[i] += w * bd.memb;
            memb_bend[i] += w * bd.memb_bend;
            bend_curv[i] += w * bd.bend_curv;
            area[i] += qp.weight * qp.frame.det0;
            load[i] += qp.weight * lp.area;
        }
    });
    for (std::size_t i = 0; i < edge_points_.size(); ++i) {
        const EdgePoint& ep = edge_points_[i];
        Vec3 u = Vec3::Zero();
        Vec4 q = Vec4::Zero();
        for (int a = 0; a < 2; ++a) {
            const int base = kDofsPerNode * ep.nodes[a];
            u += ep.shape[a] * Eigen::Map<const Vec3>(&dofs[base]);
            q += ep.shape[a] * Eigen::Map<const Vec4>(&dofs[base + 3]);
        }
        const LoadDensities lp = load_potential(loads_, ep.frame.y0 + u, ep.frame.y0,
                                                quat_to_rotation(q), ep.frame.n0);
        load[nc + i] = ep.weight * lp.edge;
    }
    EnergyBreakdown out;
    out.memb = pairwise_sum(std::move(memb));
    out.memb_bend = pairwise_sum(std::move(memb_bend));
    out.bend_curv = pairwise_sum(std::move(bend_curv));
    out.area_element = pairwise_sum(std::move(area));
    out.load = pairwise_sum(std::move(load));
    out.total = out.memb + out.memb_bend + out.bend_curv;
    return out;
}

ShellPointState Problem::state_at(const std::vector<double>& dofs, double x1, double x2) const {
    if (!grid_.domain.contains(x1, x2)) {
        throw Error("state_at: point outside the parameter domain");
    }
    const double h1 = grid_.spacing1();
    const double h2 = grid_.spacing2();
    const int c1 = std::min(static_cast<int>((x1 - grid_.domain.a1) / h1), grid_.n1 - 2);
    const int c2 = std::min(static_cast<int>((x2 - grid_.domain.a2) / h2), grid_.n2 - 2);
    const double s = (x1 - grid_.domain.a1) / h1 - c1;
    const double t = (x2 - grid_.domain.a2) / h2 - c2;
    QuadPoint qp;
    qp.frame = frame_at(surface_, x1, x2);
    qp.shape = {(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t};
    qp.shape_grad = {Vec2(-(1.0 - t) / h1, -(1.0 - s) / h2), Vec2((1.0 - t) / h1, -s / h2),
                     Vec2(-t / h1, (1.0 - s) / h2), Vec2(t / h1, s / h2)};
    Cell cell;
    cell.nodes = {grid_.node(c1, c2), grid_.node(c1 + 1, c2), grid_.node(c1, c2 + 1),
                  grid_.node(c1 + 1, c2 + 1)};
    return blend(qp, gather(cell, dofs)).state;
}

StrainMeasures Problem::strain_at_node(const std::vector<double>& dofs, int i1, int i2) const {
    if (i1 < 0 || i1 >= grid_.n1 || i2 < 0 || i2 >= grid_.n2) {
        throw Error("strain_at_node: node index out of range");
    }
    const int c1 = std::min(i1, grid_.n1 - 2);
    const int c2 = std::min(i2, grid_.n2 - 2);
    const double s = i1 - c1;
    const double t = i2 - c2;
    const double h1 = grid_.spacing1();
    const double h2 = grid_.spacing2();
    QuadPoint qp;
    qp.frame = node_frames_[grid_.node(i1, i2)];
    qp.shape = {(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t};
    qp.shape_grad = {Vec2(-(1.0 - t) / h1, -(1.0 - s) / h2), Vec2((1.0 - t) / h1, -s / h2),
                     Vec2(-t / h1, (1.0 - s) / h2), Vec2(t / h1, s / h2)};
    Cell cell;
    cell.nodes = {grid_.node(c1, c2), grid_.node(c1 + 1, c2), grid_.node(c1, c2 + 1),
                  grid_.node(c1 + 1, c2 + 1)};
    const PointState ps = blend(qp, gather(cell, dofs));
    return strain_measures(qp.frame, ps.state, params_);
}

const GeometryFrame& Problem::node_frame(int i1, int i2) const {
    return node_frames_[grid_.node(i1, i2)];
}

Problem assemble(const ShellGrid& grid, const BoundaryConditions& bcs,
                 const Surface& surface, const MaterialParams& params) {
    return Problem(grid, bcs, surface, params);
}

Vec4 rotation_retraction(const Vec4& q, const Vec3& w) {
    Vec4 out = quat_multiply(q, quat_exp(w));
    const double qn = out.norm();
    if (!(qn > 0.0) || !std::isfinite(qn)) {
        throw Degenerate("rotation_retraction: quaternion collapsed to zero");
    }
    return out / qn;
}

std::pair<std::vector<double>, SolveReport> minimize(const Problem& problem,
                                                     const SolverConfig& config,
                                                     std::vector<double> initial) {
    SolveReport report;
    std::vector<double> x = initial.empty() ? problem.reference_dofs() : std::move(initial);
    if (static_cast<int>(x.size()) != problem.dof_count()) {
        throw Error("minimize: initial DOF vector has the wrong size");
    }
    problem.apply_dirichlet(x);
    problem.renormalize(x);

    const std::size_t n = x.size();
    double energy = problem.energy(x, config.threads);
    std::vector<double> grad = problem.gradient(x, config.fd_step, config.threads);
    double gnorm = norm(grad);
    report.energy_history.push_back(energy);

    std::deque<CurvaturePair> pairs;
    const bool lbfgs = config.method == SolverConfig::Method::LBfgs;
    double step_init = 1.0;

    for (int iter = 0; iter < config.max_iters; ++iter) {
        if (gnorm < config.grad_tol) {
            break;
        }
        std::vector<double> d;
        if (lbfgs && !pairs.empty()) {
            d = two_loop(grad, pairs);
            for (auto& v : d) {
                v = -v;
            }
        } else {
            d = grad;
            for (auto& v : d) {
                v = -v;
            }
        }
        double dg = dot(d, grad);
        if (!(dg < 0.0)) {
            // Quasi-Newton direction lost descent, restart from steepest
            // descent with a cleared history.
            pairs.clear();
            d = grad;
            for (auto& v : d) {
                v = -v;
            }
            dg = dot(d, grad);
        }

        double step = lbfgs ? 1.0 : step_init;
        bool accepted = false;
        std::vector<double> x_trial;
        double e_trial = 0.0;
        for (int bt = 0; bt <= config.max_backtracks; ++bt) {
            x_trial = x;
            axpy(x_trial, step, d);
            problem.renormalize(x_trial);
            e_trial = problem.energy(x_trial, config.threads);
            if (std::isfinite(e_trial) && e_trial <= energy + config.armijo_c * step * dg) {
                accepted = true;
                break;
            }
            step *= config.backtrack;
        }
        if (!accepted) {
            report.line_search_stalled = true;
            break;
        }
        step_init = std::min(1.0, 2.0 * step);

        std::vector<double> grad_new = problem.gradient(x_trial, config.fd_step, config.threads);
        if (lbfgs) {
            std::vector<double> s(n);
            std::vector<double> y(n);
            for (std::size_t i = 0; i < n; ++i) {
                s[i] = x_trial[i] - x[i];
                y[i] = grad_new[i] - grad[i];
            }
            const double sy = dot(s, y);
            if (sy > 1e-12 * norm(s) * norm(y)) {
                pairs.emplace_back(std::move(s), std::move(y));
                while (static_cast<int>(pairs.size()) > config.memory) {
                    pairs.pop_front();
                }
            }
        }
        x = std::move(x_trial);
        energy = e_trial;
        grad = std::move(grad_new);
        gnorm = norm(grad);
        report.iterations = iter + 1;
        report.energy_history.push_back(energy);
    }

    report.converged = gnorm < config.grad_tol;
    report.energy = energy;
    report.gradient_norm = gnorm;
    report.breakdown = problem.breakdown(x, config.threads);
    return {std::move(x), report};
}

} // namespace cosshell
