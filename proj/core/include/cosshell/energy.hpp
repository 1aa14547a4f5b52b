#pragma once

#include <array>

#include "cosshell/kinematics.hpp"
#include "cosshell/linalg.hpp"
#include "cosshell/material.hpp"
#include "cosshell/surface.hpp"

namespace cosshell {

enum class QuadraticForm {
    /// mu|sym|² + mu_c|skew|² + (lambda/2) tr², the 3D bulk form.
    Micropolar,
    /// mu|sym|² + mu_c|skew|² + (lambda mu/(lambda+2mu)) tr², the
    /// plane-stress-reduced form.
    Shell,
    /// mu L_c² (b1|dev sym|² + b2|skew|² + 4 b3 tr²).
    Curvature,
};

/// Symmetric bilinear form value W(x, y).
double evaluate_form(QuadraticForm form, const Mat3& x, const Mat3& y,
                     const MaterialParams& params);

/// Quadratic form value W(x) = W(x, x).
double evaluate_form(QuadraticForm form, const Mat3& x, const MaterialParams& params);

/// Work-conjugate stress of the form: evaluate_form(f, x, y, p) equals
/// inner(form_stress(f, x, p), y), so the gradient of the quadratic form is
/// twice this.
Mat3 form_stress(QuadraticForm form, const Mat3& x, const MaterialParams& params);

/// Polynomial coefficients of the thickness direction energy densities.
struct SeriesCoefficients {
    /// b² Wmp of the reconstructed strain as a degree-6 polynomial in x3,
    /// assembled from the reconstruction coefficients directly.
    std::array<double, 7> c_raw{};
    /// The same C0..C4 after eliminating the normal terms through the
    /// Wshell absorption identities. Agrees with c_raw only when the
    /// measures carry the model's own rho_m, rho_b.
    std::array<double, 5> c_reduced{};
    /// b² Wcurv of the wryness as a degree-2 polynomial in x3.
    std::array<double, 3> d{};
};

SeriesCoefficients series_coefficients(const GeometryFrame& frame, const StrainMeasures& sm,
                                       const MaterialParams& params);

/// Thickness-integrated energy densities per unit midsurface area. The
/// elastic parts sum into total; the load density is reported separately
/// and left zero unless the caller fills it.
struct EnergyBreakdown {
    double memb = 0.0;
    double memb_bend = 0.0;
    double bend_curv = 0.0;
    /// det(grad_y0 | n0), the metric factor for midsurface integration.
    double area_element = 0.0;
    double load = 0.0;
    double total = 0.0;
};

/// Analytically thickness-integrated density, exact through fifth order in
/// h. With N = E B + C Ke and the shorthand a0 = h + K h³/12,
/// a1 = h³/12 - K h⁵/80, a2 = h⁵/80, b0 = h - K h³/12:
///   memb      = a0 Wshell(E)
///   memb_bend = a1 Wshell(N) - (h³/3) H Wshell(E, N)
///               + (h³/6) Wshell(E, N B) + a2 Wmp(N B)
///   bend_curv = b0 Wcurv(Ke) + a1 Wcurv(Ke B) + a2 Wcurv(Ke B²)
EnergyBreakdown reduced_density(const GeometryFrame& frame, const StrainMeasures& sm,
                                const MaterialParams& params);

/// The same elastic density before the curvature rewrite of the mixed
/// terms: memb carries h - K h³/12 and the h³ coupling uses
/// C Ke (B - 2H A). Returns the total only; kept as a cross-check oracle
/// for reduced_density.
double reduced_density_raw(const GeometryFrame& frame, const StrainMeasures& sm,
                           const MaterialParams& params);

/// Partial derivatives of the total elastic density.
struct DensityGradients {
    Mat3 dE = Mat3::Zero();
    Mat3 dKe = Mat3::Zero();
    /// Chain rule through E to the midsurface deformation gradient with
    /// the rotation held fixed: columns of Qe (dE density) T0⁻ᵀ.
    Mat32 dGradM = Mat32::Zero();
};

DensityGradients reduced_density_gradients(const GeometryFrame& frame,
                                           const StrainMeasures& sm, const Mat3& Qe,
                                           const MaterialParams& params);

/// Dead-load resultants acting on the midsurface and the traction edge.
struct LoadResultants {
    /// Resultant force per unit midsurface area (body force integral plus
    /// both face tractions).
    Vec3 f_bar = Vec3::Zero();
    /// Resultant force per unit edge length.
    Vec3 t_bar = Vec3::Zero();
    /// First-moment couple per unit area, conjugate to (Qe - 1) n0.
    Vec3 c_omega = Vec3::Zero();
    /// First-moment couple per unit edge length.
    Vec3 c_gamma = Vec3::Zero();
};

struct LoadDensities {
    /// <f_bar, m - y0> + <c_omega, (Qe - 1) n0>, integrated over the
    /// midsurface.
    double area = 0.0;
    /// <t_bar, m - y0> + <c_gamma, (Qe - 1) n0>, integrated along the
    /// traction edge.
    double edge = 0.0;
};

LoadDensities load_potential(const LoadResultants& res, const Vec3& m, const Vec3& y0,
                             const Mat3& Qe, const Vec3& n0);

/// Shear correction factors of the classical resultant-shell density.
struct ShearCorrection {
    double alpha_s = 5.0 / 6.0;
    double alpha_t = 7.0 / 10.0;
};

/// Classical resultant-shell density with stretching stiffness
/// C = E h/(1-nu²) and bending stiffness D = E h³/(12(1-nu²)), evaluated
/// on the tangential/normal split of E and Ke.
double sixparam_density_wp(const StrainMeasures& sm, const GeometryFrame& frame,
                           const MaterialParams& params, const ShearCorrection& corr = {});

/// Coefficients of the general 6-parameter quadratic density.
struct SixParamCoefficients {
    double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0, alpha4 = 0.0;
    double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0, beta4 = 0.0;
    /// alpha3 - alpha2, the induced in-plane rotational couple modulus.
    double mu_c_drill = 0.0;
};

/// General 6-parameter quadratic density with explicit coefficients.
double sixparam_density_ep(const StrainMeasures& sm, const GeometryFrame& frame,
                           const SixParamCoefficients& coeffs);

/// Coefficients that make the 6-parameter density reproduce the two-term
/// comparison density of this model at Gauss curvature K.
SixParamCoefficients identify_coefficients(const MaterialParams& params,
                                           double gauss_curvature);

/// The particular two-term density used for the comparison,
/// (h + K h³/12) Wshell(E) + (h - K h³/12) Wcurv(Ke).
double comparison_density(const StrainMeasures& sm, const MaterialParams& params,
                          double gauss_curvature);

/// Residuals of the tangential/normal split formulas for Wshell and Wcurv.
/// The splits are exact only for arguments of the form (*|*|0) T0⁻¹.
struct SplitFormReport {
    double shell_residual = 0.0;
    double curv_residual = 0.0;
    double max_residual() const;
};

SplitFormReport split_form_check(const Mat3& x, const GeometryFrame& frame,
                                 const MaterialParams& params);

} // namespace cosshell
