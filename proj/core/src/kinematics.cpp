#include "cosshell/kinematics.hpp"

#include <cmath>

namespace cosshell {

namespace {

/// axl(Qᵀ dQ) with a consistency check. The antisymmetry tolerance carries
/// an absolute floor so that rounding noise in near-constant rotation
/// fields is not flagged.
Vec3 rotation_rate(const Mat3& q, const Mat3& dq) {
    const Mat3 m = q.transpose() * dq;
    const double residual = (m + m.transpose()).norm();
    if (residual > kSkewTol * std::max(m.norm(), 1.0)) {
        throw NotSkew("strain_measures: Qe^T dQe is not antisymmetric, residual " +
                      std::to_string(residual));
    }
    return axl(skw(m));
}

/// Columns d_alpha(Qe n0) from the product rule.
Mat32 grad_director(const GeometryFrame& frame, const ShellPointState& state) {
    Mat32 g;
    g.col(0) = state.dQe[0] * frame.n0 + state.Qe * frame.grad_n0.col(0);
    g.col(1) = state.dQe[1] * frame.n0 + state.Qe * frame.grad_n0.col(1);
    return g;
}

Mat3 lift_cols(const Mat32& m) {
    Mat3 x = Mat3::Zero();
    x.leftCols<2>() = m;
    return x;
}

} // namespace

ShellPointState reference_state(const GeometryFrame& frame) {
    ShellPointState state;
    state.m = frame.y0;
    state.grad_m = frame.grad_y0;
    state.Qe = Mat3::Identity();
    state.dQe = {Mat3::Zero(), Mat3::Zero()};
    return state;
}

StrainMeasures strain_measures(const GeometryFrame& frame, const ShellPointState& state,
                               const MaterialParams& params) {
    const Mat3 t0inv = frame.T0().inverse();
    const double lam_factor = params.lambda / (params.lambda + 2.0 * params.mu);

    StrainMeasures sm;

    Mat3 f0;
    f0.leftCols<2>() = state.grad_m;
    f0.col(2) = state.Qe * frame.n0;
    sm.E = state.Qe.transpose() * f0 * t0inv - Mat3::Identity();

    const Vec3 k1 = rotation_rate(state.Qe, state.dQe[0]);
    const Vec3 k2 = rotation_rate(state.Qe, state.dQe[1]);
    Mat3 axials = Mat3::Zero();
    axials.col(0) = k1;
    axials.col(1) = k2;
    sm.Ke = axials * t0inv;

    sm.rho_m = 1.0 - lam_factor * sm.E.trace();
    const Mat3 cke = frame.C * sm.Ke;
    sm.rho_b = -lam_factor * (cke + sm.E * frame.B).trace();
    sm.rho_b_full = sm.rho_b + lam_factor * lam_factor *
                                   (cke.trace() - 2.0 * frame.H) * sm.E.trace();
    sm.A1 = 2.0 * frame.H * (1.0 - sm.rho_m) + sm.rho_b;
    sm.A2 = frame.K * (sm.rho_m - 1.0) - 2.0 * frame.H * sm.rho_b;

    const Mat32 rotated_tangent = state.Qe * frame.grad_y0;
    sm.G = rotated_tangent.transpose() * state.grad_m - frame.I;
    sm.T = (state.Qe * frame.n0).transpose() * state.grad_m;
    sm.R = -rotated_tangent.transpose() * grad_director(frame, state) - frame.II;
    sm.N = frame.n0.transpose() * axials.leftCols<2>();
    return sm;
}

StrainMeasures with_full_thickness_coupling(const GeometryFrame& frame, StrainMeasures sm) {
    sm.rho_b = sm.rho_b_full;
    sm.A1 = 2.0 * frame.H * (1.0 - sm.rho_m) + sm.rho_b;
    sm.A2 = frame.K * (sm.rho_m - 1.0) - 2.0 * frame.H * sm.rho_b;
    return sm;
}

std::array<Mat3, 4> strain_polynomial(const GeometryFrame& frame, const StrainMeasures& sm) {
    const Mat3 nn = frame.n0 * frame.n0.transpose();
    const Mat3 bend = frame.B - 2.0 * frame.H * frame.A;
    const Mat3 cke = frame.C * sm.Ke;
    return {sm.E + (sm.rho_m - 1.0) * nn, sm.E * bend + cke + sm.A1 * nn,
            cke * bend + sm.A2 * nn, frame.K * sm.rho_b * nn};
}

Mat3 reconstructed_strain(const GeometryFrame& frame, const StrainMeasures& sm, double x3) {
    const double b = 1.0 - 2.0 * frame.H * x3 + frame.K * x3 * x3;
    if (b <= 0.0) {
        throw Inadmissible("reconstructed_strain: curvature polynomial not positive");
    }
    const auto p = strain_polynomial(frame, sm);
    return (p[0] + x3 * (p[1] + x3 * (p[2] + x3 * p[3]))) / b;
}

Mat3 wryness(const GeometryFrame& frame, const StrainMeasures& sm, double x3) {
    const double b = 1.0 - 2.0 * frame.H * x3 + frame.K * x3 * x3;
    if (b <= 0.0) {
        throw Inadmissible("wryness: curvature polynomial not positive");
    }
    return (sm.Ke + x3 * (sm.Ke * frame.B - 2.0 * frame.H * sm.Ke)) / b;
}

Mat3 nye_convert(const Mat3& x, NyeDirection direction) {
    const double factor = direction == NyeDirection::WrynessToDislocation ? 1.0 : 0.5;
    return -x.transpose() + factor * x.trace() * Mat3::Identity();
}

Mat3 biot_stress(const Mat3& u_minus_id, const MaterialParams& params) {
    return 2.0 * params.mu * sym(u_minus_id) + 2.0 * params.mu_c * skw(u_minus_id) +
           params.lambda * u_minus_id.trace() * Mat3::Identity();
}

namespace {

/// Ansatz deformation gradient at offset x3, with the stretch coefficients
/// kept as multipliers and their in-plane gradients neglected.
Mat3 ansatz_gradient(const ShellPointState& state, const Mat32& grad_director_cols,
                     const Vec3& director, double rho_m, double rho_b, double x3) {
    Mat3 f;
    f.leftCols<2>() = state.grad_m + x3 * rho_m * grad_director_cols +
                      (0.5 * x3 * x3 * rho_b) * grad_director_cols;
    f.col(2) = (rho_m + x3 * rho_b) * director;
    return f;
}

} // namespace

PlaneStressResiduals plane_stress_residuals(const GeometryFrame& frame,
                                            const ShellPointState& state,
                                            const MaterialParams& params,
                                            RhoVariant variant) {
    StrainMeasures sm = strain_measures(frame, state, params);
    if (variant == RhoVariant::Full) {
        sm = with_full_thickness_coupling(frame, sm);
    }

    const Vec3 director = state.Qe * frame.n0;
    const Mat32 gd = grad_director(frame, state);

    const auto traction = [&](double x3) {
        const Mat3 f = ansatz_gradient(state, gd, director, sm.rho_m, sm.rho_b, x3);
        const Mat3 inv = theta_kinematics(frame, x3, params.h).inv;
        const Mat3 u = state.Qe.transpose() * f * inv - Mat3::Identity();
        return frame.n0.dot(biot_stress(u, params) * frame.n0);
    };

    PlaneStressResiduals out;
    out.f0 = traction(0.0);

    const double step = params.h * 1e-4;
    const auto central = [&](double s) {
        return (traction(s) - traction(-s)) / (2.0 * s);
    };
    out.f0prime = (4.0 * central(0.5 * step) - central(step)) / 3.0;
    return out;
}

double plane_stress_dropped_term(const StrainMeasures& sm, const MaterialParams& params) {
    return -(params.lambda + 2.0 * params.mu) * (sm.rho_b_full - sm.rho_b);
}

ThicknessCoefficients rho_exact_neumann(const GeometryFrame& frame,
                                        const ShellPointState& state,
                                        const MaterialParams& params, double h) {
    const double lam = params.lambda;
    const double stiff = params.lambda + 2.0 * params.mu;

    const Mat3 grad_m_lift = lift_cols(state.grad_m);
    const Mat3 grad_dir_lift = lift_cols(grad_director(frame, state));
    const Mat3 qm = state.Qe.transpose() * grad_m_lift;
    const Mat3 qd = state.Qe.transpose() * grad_dir_lift;

    // One traction condition per face x3 = s h/2; assembling the raw pair
    // avoids any normalization of the closed-form solution.
    Mat2 system;
    Vec2 rhs;
    for (int row = 0; row < 2; ++row) {
        const double s = row == 0 ? 1.0 : -1.0;
        const Mat3 inv = theta_kinematics(frame, s * 0.5 * h, h).inv;
        const double m_trace = (qd * inv).trace();
        const double n_trace = (qm * inv).trace();
        system(row, 0) = stiff + s * lam * 0.5 * h * m_trace;
        system(row, 1) = s * 0.5 * h * stiff + lam * h * h / 8.0 * m_trace;
        rhs(row) = stiff - lam * (n_trace - 2.0);
    }

    const double det = system.determinant();
    const double scale = system.row(0).norm() * system.row(1).norm();
    if (std::abs(det) <= 1e-12 * scale) {
        throw SingularSystem("rho_exact_neumann: face-traction system is singular");
    }

    const Vec2 solution = system.inverse() * rhs;
    ThicknessCoefficients out;
    out.rho_m = solution(0);
    out.rho_b = solution(1);
    return out;
}

ParallelPerpSplit parallel_perp_split(const Mat3& x, const GeometryFrame& frame) {
    ParallelPerpSplit out;
    out.par = frame.A * x;
    out.perp = x - out.par;
    return out;
}

} // namespace cosshell
