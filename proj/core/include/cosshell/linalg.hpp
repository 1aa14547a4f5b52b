#pragma once

#include <Eigen/Dense>

#include "cosshell/errors.hpp"

namespace cosshell {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat23 = Eigen::Matrix<double, 2, 3>;
using RowVec2 = Eigen::Matrix<double, 1, 2>;

/// Relative tolerance for the antisymmetry test in axl.
inline constexpr double kSkewTol = 1e-10;
/// Relative tolerance (against ‖F‖³) below which a determinant counts as zero.
inline constexpr double kDetTol = 1e-12;
/// Relative tolerance for the rank test on surface Jacobians.
inline constexpr double kRankTol = 1e-8;

inline Mat3 sym(const Mat3& x) { return 0.5 * (x + x.transpose()); }
inline Mat3 skw(const Mat3& x) { return 0.5 * (x - x.transpose()); }
inline Mat2 sym2(const Mat2& x) { return 0.5 * (x + x.transpose()); }

/// Frobenius inner product ⟨X, Y⟩ = tr(Xᵀ Y).
inline double inner(const Mat3& x, const Mat3& y) {
    return (x.array() * y.array()).sum();
}

/// Orthogonal split of a 3×3 matrix into traceless symmetric part,
/// antisymmetric part and spherical part. The three pieces sum to the
/// input and are pairwise orthogonal under the Frobenius product.
struct CartanParts {
    Mat3 devsym;
    Mat3 skew;
    Mat3 spherical;
};

CartanParts cartan_decompose(const Mat3& x);

/// Axial vector of an antisymmetric matrix, with the convention
/// anti(v)·x = v × x. Throws NotSkew when ‖A + Aᵀ‖ > kSkewTol·‖A‖.
Vec3 axl(const Mat3& a);

/// Antisymmetric matrix with axial vector v.
inline Mat3 anti(const Vec3& v) {
    Mat3 a;
    a << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return a;
}

/// Result of the polar decomposition F = R·U with R ∈ SO(3) and U
/// symmetric positive-definite.
struct PolarFactors {
    Mat3 R;
    Mat3 U;
};

/// Polar decomposition by the Newton iteration R ← ½(R + R⁻ᵀ), seeded with
/// F scaled by an upper bound on its largest singular value. Falls back to
/// the SVD route if the iteration has not converged after 50 steps.
/// Throws Degenerate when det F ≤ kDetTol·‖F‖³.
PolarFactors polar_decompose(const Mat3& f);

/// Polar decomposition through the singular value decomposition
/// F = W Σ Vᵀ, giving R = W Vᵀ and U = V Σ Vᵀ. Serves as an independent
/// cross-check of the Newton route.
PolarFactors polar_decompose_svd(const Mat3& f);

/// Embed a 2×2 matrix as the top-left block of a 3×3 matrix, third row
/// and column zero.
inline Mat3 flat_lift(const Mat2& m) {
    Mat3 x = Mat3::Zero();
    x.topLeftCorner<2, 2>() = m;
    return x;
}

/// exp(anti(w)) by the Rodrigues formula, with a series branch near w = 0.
Mat3 rotation_exp(const Vec3& w);

/// Directional derivative of rotation_exp at w along dw. Smooth through
/// w = 0 because the Rodrigues coefficients are analytic in |w|².
Mat3 rotation_exp_derivative(const Vec3& w, const Vec3& dw);

/// Rotation matrix of the unit quaternion q/|q|, components ordered
/// (w, x, y, z). Division by |q|² makes the map well defined for any
/// nonzero q. Throws Degenerate for |q| near zero.
Mat3 quat_to_rotation(const Vec4& q);

/// Directional derivative of quat_to_rotation at q along dq. Well defined
/// for non-unit q since the map is homogeneous of degree zero.
Mat3 quat_to_rotation_derivative(const Vec4& q, const Vec4& dq);

/// Unit quaternion (w, x, y, z) of a rotation matrix, w >= 0.
Vec4 rotation_to_quat(const Mat3& r);

/// Hamilton product a*b; quat_to_rotation(a*b) = quat_to_rotation(a) ·
/// quat_to_rotation(b) for unit quaternions.
Vec4 quat_multiply(const Vec4& a, const Vec4& b);

/// Unit quaternion of the rotation exp(anti(w)): half-angle cosine and
/// sine along w, with a series branch near zero.
Vec4 quat_exp(const Vec3& w);

/// Rotation vector of a unit quaternion, principal branch with
/// ‖result‖ <= pi. Inverse of quat_exp there, up to quaternion sign.
Vec3 quat_log(const Vec4& q);

} // namespace cosshell
