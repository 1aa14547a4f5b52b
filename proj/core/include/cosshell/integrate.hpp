#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cosshell/energy.hpp"
#include "cosshell/kinematics.hpp"
#include "cosshell/material.hpp"
#include "cosshell/surface.hpp"

namespace cosshell {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// exact for polynomials of degree 2n-1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Tensor-product quadrature resolution. The midsurface grid is shared
/// between the volume and the reduced integral, so the thickness
/// direction is the only difference between them.
struct QuadratureSpec {
    /// Gauss points through the thickness; at least 6 so the polynomial
    /// part of the integrand (degree 11 in x3 before the 1/b factor)
    /// integrates exactly.
    int n_gauss_x3 = 8;
    /// Cells of the midsurface grid.
    int n1 = 16;
    int n2 = 16;
    /// Gauss points per cell and direction, 2 or 3.
    int n_gauss_cell = 3;
};

/// Smooth field of pointwise shell unknowns over the midsurface. The
/// frame carries the evaluation point and the exact reference geometry.
using StateField = std::function<ShellPointState(const GeometryFrame&)>;

/// The undeformed field m = y0, Qe = identity.
StateField reference_field();

/// Seeded smooth perturbation of the reference field: a quadratic
/// polynomial displacement and an exponential-map rotation field whose
/// coefficients are drawn once from the seed and scaled by amplitude.
/// Derivatives are analytic.
StateField synthetic_field(std::uint64_t seed, double amplitude);

/// Fixed-order pairwise reduction. The result depends only on the element
/// order, not on how the terms were produced.
double pairwise_sum(std::vector<double> terms);

/// Least-squares slope of log(y) against log(x). Entries with y <= 0 are
/// rejected.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Truncated expansion of 1/b(x3) = 1/(1 - 2H x3 + K x3²) through the
/// fourth power of x3.
double inverse_b_series(double mean_curvature, double gauss_curvature, double x3);

/// 3D energy over the shell volume: the micropolar form of the
/// reconstructed strain plus the curvature form of the wryness, weighted
/// by det grad Theta, integrated by tensor-product Gauss quadrature.
/// Throws Inadmissible when a quadrature point leaves the admissible
/// thickness range.
double integrate_volume(const Surface& surface, const StateField& field,
                        const MaterialParams& params, const QuadratureSpec& spec,
                        int threads = 1);

/// Thickness-integrated shell energy over the midsurface, using the same
/// midsurface quadrature points as integrate_volume.
double integrate_reduced(const Surface& surface, const StateField& field,
                         const MaterialParams& params, const QuadratureSpec& spec,
                         int threads = 1);

/// Truncation study of the analytic thickness integration: the gap
/// between the two integrals against thickness, with its log-log slope.
struct ConvergenceStudy {
    std::vector<double> h_values;
    std::vector<double> volume;
    std::vector<double> reduced;
    std::vector<double> residuals;
    double slope = 0.0;
};

ConvergenceStudy convergence_study(const Surface& surface, const StateField& field,
                                   MaterialParams params, const std::vector<double>& h_list,
                                   const QuadratureSpec& spec, int threads = 1);

} // namespace cosshell
