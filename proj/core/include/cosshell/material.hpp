#pragma once

#include "cosshell/errors.hpp"

namespace cosshell {

/// Isotropic Cosserat material constants plus the shell thickness.
struct MaterialParams {
    /// Shear modulus (stress units).
    double mu = 1.0;
    /// First Lame constant (stress units).
    double lambda = 1.0;
    /// Cosserat couple modulus (stress units), may be zero.
    double mu_c = 1.0;
    /// Internal length (length units).
    double L_c = 1.0;
    /// Dimensionless curvature energy weights.
    double b1 = 1.0;
    double b2 = 1.0;
    double b3 = 1.0;
    /// Shell thickness (length units).
    double h = 0.01;

    /// Bulk modulus.
    double kappa() const { return (2.0 * mu + 3.0 * lambda) / 3.0; }

    /// Trace weight of the thickness-reduced quadratic form,
    /// lambda mu / (lambda + 2 mu).
    double trace_weight_shell() const { return lambda * mu / (lambda + 2.0 * mu); }

    /// Throws Error when a constant is outside its admissible range.
    void validate() const {
        if (!(mu > 0.0)) {
            throw Error("MaterialParams: mu must be positive");
        }
        if (!(lambda + 2.0 * mu > 0.0)) {
            throw Error("MaterialParams: lambda + 2 mu must be positive");
        }
        if (!(mu_c >= 0.0)) {
            throw Error("MaterialParams: mu_c must be nonnegative");
        }
        if (!(L_c > 0.0)) {
            throw Error("MaterialParams: L_c must be positive");
        }
        if (!(b1 > 0.0) || !(b2 > 0.0) || !(b3 > 0.0)) {
            throw Error("MaterialParams: b1, b2, b3 must be positive");
        }
        if (!(h > 0.0)) {
            throw Error("MaterialParams: h must be positive");
        }
    }
};

} // namespace cosshell
