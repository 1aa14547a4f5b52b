#pragma once

#include <array>

#include "cosshell/linalg.hpp"
#include "cosshell/material.hpp"
#include "cosshell/surface.hpp"

namespace cosshell {

/// Pointwise unknowns of the shell model: midsurface deformation with its
/// gradient and the elastic microrotation with its parameter derivatives.
/// The derivatives are supplied by the caller (analytic for synthetic
/// fields, interpolation-based in the minimizer); nothing here
/// differentiates.
struct ShellPointState {
    Vec3 m = Vec3::Zero();
    /// Columns (d1 m | d2 m).
    Mat32 grad_m = Mat32::Zero();
    Mat3 Qe = Mat3::Identity();
    /// (d1 Qe, d2 Qe).
    std::array<Mat3, 2> dQe = {Mat3::Zero(), Mat3::Zero()};
};

/// State whose strain measures all vanish: m = y0, Qe = identity.
ShellPointState reference_state(const GeometryFrame& frame);

/// Strain and curvature measures at one point, together with the
/// thickness-stretch coefficients and the 6-parameter component blocks.
struct StrainMeasures {
    /// Elastic shell strain, Qeᵀ(grad m | Qe n0) T0⁻¹ - 1.
    Mat3 E = Mat3::Zero();
    /// Elastic shell bending-curvature, (axl(Qeᵀd1Qe)|axl(Qeᵀd2Qe)|0) T0⁻¹.
    Mat3 Ke = Mat3::Zero();
    /// Symmetric thickness stretch, 1 - lambda/(lambda+2mu) tr E.
    double rho_m = 1.0;
    /// Asymmetric thickness stretch in the model's approximation,
    /// -lambda/(lambda+2mu) tr(C Ke + E B).
    double rho_b = 0.0;
    /// rho_b plus the quadratic membrane-curvature coupling term that the
    /// model drops.
    double rho_b_full = 0.0;
    /// Coefficients of the x3 and x3² normal terms of the reconstructed
    /// strain, built from rho_m and rho_b.
    double A1 = 0.0;
    double A2 = 0.0;
    /// Change of metric, (Qe grad_y0)ᵀ grad_m - I.
    Mat2 G = Mat2::Zero();
    /// Transverse shear row vector, (Qe n0)ᵀ grad_m.
    RowVec2 T = RowVec2::Zero();
    /// Bending strain, -(Qe grad_y0)ᵀ grad(Qe n0) - II.
    Mat2 R = Mat2::Zero();
    /// Drilling bendings, n0ᵀ(axl(Qeᵀd1Qe)|axl(Qeᵀd2Qe)).
    RowVec2 N = RowVec2::Zero();
};

/// Evaluates all strain measures. Throws NotSkew when Qeᵀ dQe fails the
/// antisymmetry test, which signals rotation derivatives inconsistent with
/// the rotation itself.
StrainMeasures strain_measures(const GeometryFrame& frame, const ShellPointState& state,
                               const MaterialParams& params);

/// Copy of sm with rho_b replaced by rho_b_full and A1, A2 rebuilt
/// accordingly. Used to probe the plane-stress conditions with the
/// untruncated thickness coefficients.
StrainMeasures with_full_thickness_coupling(const GeometryFrame& frame, StrainMeasures sm);

/// Numerator coefficients P0..P3 of the reconstructed strain polynomial.
std::array<Mat3, 4> strain_polynomial(const GeometryFrame& frame, const StrainMeasures& sm);

/// Reconstructed 3D strain at thickness offset x3,
/// (1/b)(P0 + x3 P1 + x3² P2 + x3³ P3) with b = 1 - 2H x3 + K x3².
/// Throws Inadmissible when b <= 0.
Mat3 reconstructed_strain(const GeometryFrame& frame, const StrainMeasures& sm, double x3);

/// Reconstructed wryness at x3, (1/b)(Ke + x3(Ke B - 2H Ke)).
Mat3 wryness(const GeometryFrame& frame, const StrainMeasures& sm, double x3);

enum class NyeDirection {
    /// Γ to dislocation density: -Xᵀ + tr(X) 1.
    WrynessToDislocation,
    /// Dislocation density to Γ: -Xᵀ + ½ tr(X) 1.
    DislocationToWryness,
};

Mat3 nye_convert(const Mat3& x, NyeDirection direction);

/// Biot-type stress of the stretch deviation X = U - 1:
/// 2 mu sym X + 2 mu_c skew X + lambda tr(sym X) 1.
Mat3 biot_stress(const Mat3& u_minus_id, const MaterialParams& params);

enum class RhoVariant {
    /// The model's rho_b (coupling term dropped).
    Approximate,
    /// rho_b_full, satisfying both midsurface traction conditions.
    Full,
};

struct PlaneStressResiduals {
    /// Normal Biot traction at the midsurface.
    double f0 = 0.0;
    /// Its x3-derivative at the midsurface (central differences with one
    /// Richardson step).
    double f0prime = 0.0;
};

/// Normal-traction residuals of the quadratic ansatz. The stretch tensor
/// is built from the unreduced ansatz gradient, so the Full variant zeroes
/// both residuals while Approximate leaves f0prime equal to minus the
/// dropped coupling term.
PlaneStressResiduals plane_stress_residuals(const GeometryFrame& frame,
                                            const ShellPointState& state,
                                            const MaterialParams& params,
                                            RhoVariant variant);

/// The f0prime value predicted analytically for the Approximate variant,
/// -(lambda+2mu)(rho_b_full - rho_b). Expects measures that still carry the
/// approximate rho_b.
double plane_stress_dropped_term(const StrainMeasures& sm, const MaterialParams& params);

struct ThicknessCoefficients {
    double rho_m = 1.0;
    double rho_b = 0.0;
};

/// Solves the exact two-point Neumann conditions on the upper and lower
/// faces for (rho_m, rho_b) at thickness h. Converges to (rho_m,
/// rho_b_full) as h goes to zero. Throws SingularSystem when the 2x2
/// system degenerates.
ThicknessCoefficients rho_exact_neumann(const GeometryFrame& frame,
                                        const ShellPointState& state,
                                        const MaterialParams& params, double h);

struct ParallelPerpSplit {
    /// A X, the part tangential from the left.
    Mat3 par = Mat3::Zero();
    /// (1 - A) X = (n0 ⊗ n0) X.
    Mat3 perp = Mat3::Zero();
};

ParallelPerpSplit parallel_perp_split(const Mat3& x, const GeometryFrame& frame);

} // namespace cosshell
