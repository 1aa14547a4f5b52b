#pragma once

#include <array>
#include <string>
#include <vector>

#include "cosshell/linalg.hpp"

namespace cosshell {

/// Closed parameter rectangle [a1,b1] x [a2,b2].
struct Rect {
    double a1 = 0.0;
    double b1 = 1.0;
    double a2 = 0.0;
    double b2 = 1.0;

    double width1() const { return b1 - a1; }
    double width2() const { return b2 - a2; }
    bool contains(double x1, double x2) const {
        return x1 >= a1 && x1 <= b1 && x2 >= a2 && x2 <= b2;
    }
};

enum class DerivMode {
    Analytic,
    FiniteDifference,
};

/// One term c * x1^j * x2^k of a bivariate polynomial.
struct MonomialTerm {
    int j = 0;
    int k = 0;
    double c = 0.0;
};

using MonomialTable = std::vector<MonomialTerm>;

/// Position and partial derivatives of the midsurface map at one point.
struct SurfaceJet {
    Vec3 y = Vec3::Zero();
    Vec3 d1 = Vec3::Zero();
    Vec3 d2 = Vec3::Zero();
    Vec3 d11 = Vec3::Zero();
    Vec3 d12 = Vec3::Zero();
    Vec3 d22 = Vec3::Zero();
};

/// Parametrized midsurface over a rectangular parameter domain. Immutable
/// after construction; evaluation is pure and thread-safe.
class Surface {
public:
    enum class Kind {
        Plate,
        Cylinder,
        Sphere,
        HyperbolicParaboloid,
        Polynomial,
    };

    static Surface plate(Rect domain);
    /// Arclength-parametrized circular cylinder of radius r,
    /// y0 = (r cos(x1/r), r sin(x1/r), x2). The normal points outward,
    /// which makes H = -1/(2r).
    static Surface cylinder(double r, Rect domain);
    /// Longitude/latitude sphere of radius R,
    /// y0 = R (cos x2 cos x1, cos x2 sin x1, sin x2), x2 away from the
    /// poles. The normal points outward, which makes H = -1/R.
    static Surface sphere(double R, Rect domain);
    /// Graph surface y0 = (x1, x2, x1^2/(2a) - x2^2/(2b)).
    static Surface hyperbolic_paraboloid(double a, double b, Rect domain);
    /// Graph-style surface with one monomial table per component. Empty
    /// tables for the first two components default to x1 and x2.
    static Surface polynomial(std::array<MonomialTable, 3> components, Rect domain);

    Kind kind() const { return kind_; }
    const Rect& domain() const { return domain_; }
    DerivMode deriv_mode() const { return mode_; }
    double fd_step1() const { return fd_step1_; }
    double fd_step2() const { return fd_step2_; }

    /// Copy of this surface whose jets come from 4th-order central
    /// differences of the position map with steps scale*(b - a) per
    /// direction instead of the analytic formulas.
    Surface with_finite_differences(double step_scale = 1e-4) const;

    Vec3 position(double x1, double x2) const;

    /// Position plus first and second partials, honoring the derivative mode.
    SurfaceJet jet(double x1, double x2) const;

private:
    Surface() = default;

    SurfaceJet analytic_jet(double x1, double x2) const;

    Kind kind_ = Kind::Plate;
    Rect domain_;
    DerivMode mode_ = DerivMode::Analytic;
    double fd_step1_ = 0.0;
    double fd_step2_ = 0.0;
    double radius_ = 1.0;
    double a_ = 1.0;
    double b_ = 1.0;
    std::array<MonomialTable, 3> poly_{};
};

/// Parameters for the named surface catalog.
struct SurfaceParams {
    Rect domain;
    double radius = 1.0;
    double a = 1.0;
    double b = 1.0;
    std::array<MonomialTable, 3> poly{};
};

/// Catalog lookup by name: plate, cylinder, sphere, hyperbolic_paraboloid,
/// polynomial. Throws UnknownSurface for anything else.
Surface builtin_surface(const std::string& name, const SurfaceParams& params);

/// Referential geometry of the midsurface at one parameter point.
struct GeometryFrame {
    Vec2 x = Vec2::Zero();
    /// Midsurface position at x.
    Vec3 y0 = Vec3::Zero();
    /// Columns (d1 y0 | d2 y0).
    Mat32 grad_y0 = Mat32::Zero();
    Vec3 n0 = Vec3::UnitZ();
    /// Columns (d1 n0 | d2 n0).
    Mat32 grad_n0 = Mat32::Zero();
    Mat2 I = Mat2::Identity();
    Mat2 II = Mat2::Zero();
    Mat2 III = Mat2::Zero();
    /// Weingarten matrix L = I^{-1} II.
    Mat2 L = Mat2::Zero();
    double H = 0.0;
    double K = 0.0;
    /// Area element, det(grad_y0 | n0) = |d1 y0 x d2 y0|.
    double det0 = 1.0;
    /// Tangential projector in referential form, (grad_y0|0)(grad_y0|n0)^{-1}.
    Mat3 A = Mat3::Zero();
    /// Curvature tensor, -(grad_n0|0)(grad_y0|n0)^{-1}.
    Mat3 B = Mat3::Zero();
    /// Alternator tensor, det0 * T0^{-T} J T0^{-1} with J the in-plane
    /// rotation generator.
    Mat3 C = Mat3::Zero();
    /// Polar rotation factor of (grad_y0 | n0); maps e3 to n0.
    Mat3 Q0 = Mat3::Identity();

    /// (grad_y0 | n0), the gradient of the slab diffeomorphism at x3 = 0.
    Mat3 T0() const {
        Mat3 t;
        t.leftCols<2>() = grad_y0;
        t.col(2) = n0;
        return t;
    }
};

/// Geometry at (x1,x2) from the surface's own jet. Throws RankDeficient if
/// the smallest singular value of grad_y0 drops below kRankTol * |grad_y0|.
GeometryFrame frame_at(const Surface& surface, double x1, double x2);

/// Same frame rebuilt from 4th-order central differences of the position
/// map alone, with an explicit step. Independent of the surface's stored
/// derivative formulas, so it serves as an oracle for frame_at.
GeometryFrame fd_frame_oracle(const Surface& surface, double x1, double x2, double eps);

/// Frame assembly from a raw jet; the shared backend of frame_at and
/// fd_frame_oracle.
GeometryFrame frame_from_jet(const SurfaceJet& jet, const Vec2& x);

/// Gradient of the slab map Theta(x1,x2,x3) = y0 + x3 n0, its determinant
/// and its closed-form inverse.
struct ThetaKinematics {
    Mat3 gradTheta = Mat3::Identity();
    double det = 1.0;
    Mat3 inv = Mat3::Identity();
};

/// Evaluates grad Theta at offset x3 through the thickness h. Throws
/// Inadmissible when the curvature polynomial 1 - 2H x3 + K x3^2 is not
/// positive or |x3| exceeds h/2.
ThetaKinematics theta_kinematics(const GeometryFrame& frame, double x3, double h);

struct AdmissibilityReport {
    bool ok = true;
    /// Principal curvatures, the eigenvalues of L (kappa1 >= kappa2).
    double kappa1 = 0.0;
    double kappa2 = 0.0;
};

/// Checks h |kappa_i| < 1/2 for both principal curvatures.
AdmissibilityReport admissibility_check(const GeometryFrame& frame, double h);

/// Residuals of the algebraic identities tying A, B, C, Q0 and the
/// curvatures together. All entries vanish for an exact frame.
struct CurvatureIdentityReport {
    double trace_A = 0.0;          // tr A - 2
    double det_A = 0.0;            // det A
    double A_projector = 0.0;      // A - (1 - n0 n0^T)
    double A_symmetric = 0.0;      // A - A^T
    double A_idempotent = 0.0;     // A^2 - A
    double B_symmetric = 0.0;      // B - B^T
    double trace_B = 0.0;          // tr B - 2H
    double det_B = 0.0;            // det B
    double cof_B = 0.0;            // tr Cof B - K
    double cayley_hamilton = 0.0;  // B^2 - 2H B + K A
    double AB_commute = 0.0;       // AB - B and BA - B
    double tangent_rows = 0.0;     // first two rows of T0^{-1}(A - 1)
    double C_skew = 0.0;           // C + C^T
    double C_squared = 0.0;        // C^2 + A
    double C_rotated = 0.0;        // C - Q0 J Q0^T

    double max_residual() const;
};

CurvatureIdentityReport curvature_tensor_identities(const GeometryFrame& frame);

/// Residual of the identity expressing B through derivatives of the polar
/// rotation Q0. The rotation derivatives come from central differences of
/// the polar factor with the given step, so the achievable residual is
/// FD-limited (about 1e-6).
double rotation_curvature_residual(const Surface& surface, const GeometryFrame& frame,
                                   double eps);

} // namespace cosshell
