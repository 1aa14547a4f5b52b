#include "cosshell/linalg.hpp"

#include <cmath>

namespace cosshell {

CartanParts cartan_decompose(const Mat3& x) {
    CartanParts parts;
    parts.spherical = (x.trace() / 3.0) * Mat3::Identity();
    parts.devsym = sym(x) - parts.spherical;
    parts.skew = skw(x);
    return parts;
}

Vec3 axl(const Mat3& a) {
    const double residual = (a + a.transpose()).norm();
    if (residual > kSkewTol * std::max(a.norm(), 1e-300)) {
        throw NotSkew("axl: matrix is not antisymmetric, residual " +
                      std::to_string(residual));
    }
    return Vec3(-a(1, 2), a(0, 2), -a(0, 1));
}

PolarFactors polar_decompose_svd(const Mat3& f) {
    const double det_tol = kDetTol * std::pow(f.norm(), 3);
    if (f.determinant() <= det_tol) {
        throw Degenerate("polar_decompose: det F is not positive");
    }
    Eigen::JacobiSVD<Mat3> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 w = svd.matrixU();
    Mat3 v = svd.matrixV();
    Vec3 s = svd.singularValues();
    // det F > 0 makes W Vᵀ a proper rotation already, but guard against a
    // sign flip from the SVD routine itself.
    if ((w * v.transpose()).determinant() < 0.0) {
        w.col(2) *= -1.0;
        s(2) *= -1.0;
    }
    PolarFactors out;
    out.R = w * v.transpose();
    out.U = v * s.asDiagonal() * v.transpose();
    return out;
}

PolarFactors polar_decompose(const Mat3& f) {
    const double det_tol = kDetTol * std::pow(f.norm(), 3);
    if (f.determinant() <= det_tol) {
        throw Degenerate("polar_decompose: det F is not positive");
    }
    // ‖F‖₁·‖F‖∞ bounds σ_max² from above, so the seed has all singular
    // values in (0, 1] and the iteration contracts from the first step.
    const double norm1 = f.cwiseAbs().colwise().sum().maxCoeff();
    const double normInf = f.cwiseAbs().rowwise().sum().maxCoeff();
    Mat3 r = f / std::sqrt(norm1 * normInf);
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        const Mat3 next = 0.5 * (r + r.inverse().transpose());
        const double step = (next - r).norm();
        r = next;
        if (step < 1e-15 * r.norm()) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        return polar_decompose_svd(f);
    }
    PolarFactors out;
    out.R = r;
    out.U = sym(r.transpose() * f);
    return out;
}

namespace {

/// Rodrigues coefficients a = sin t / t and b = (1 - cos t) / t² together
/// with their derivatives with respect to s = t². Both are entire functions
/// of s, which keeps the derivative formulas regular at w = 0.
void rodrigues_coefficients(double s, double& a, double& b, double& da, double& db) {
    if (s < 1e-8) {
        a = 1.0 - s / 6.0 + s * s / 120.0;
        b = 0.5 - s / 24.0 + s * s / 720.0;
        da = -1.0 / 6.0 + s / 60.0 - s * s / 2520.0;
        db = -1.0 / 24.0 + s / 360.0 - s * s / 13440.0;
        return;
    }
    const double t = std::sqrt(s);
    a = std::sin(t) / t;
    b = (1.0 - std::cos(t)) / s;
    da = (t * std::cos(t) - std::sin(t)) / (2.0 * s * t);
    db = (0.5 * a - b) / s;
}

} // namespace

Mat3 rotation_exp(const Vec3& w) {
    double a, b, da, db;
    rodrigues_coefficients(w.squaredNorm(), a, b, da, db);
    const Mat3 m = anti(w);
    return Mat3::Identity() + a * m + b * m * m;
}

Mat3 rotation_exp_derivative(const Vec3& w, const Vec3& dw) {
    double a, b, da, db;
    rodrigues_coefficients(w.squaredNorm(), a, b, da, db);
    const double ds = 2.0 * w.dot(dw);
    const Mat3 m = anti(w);
    const Mat3 dm = anti(dw);
    return (da * ds) * m + a * dm + (db * ds) * m * m + b * (dm * m + m * dm);
}

Mat3 quat_to_rotation(const Vec4& q) {
    const double nn = q.squaredNorm();
    if (nn < 1e-24) {
        throw Degenerate("quat_to_rotation: quaternion norm is near zero");
    }
    const double w = q(0);
    const Vec3 v = q.tail<3>();
    const Mat3 vv = v * v.transpose();
    return ((w * w - v.squaredNorm()) * Mat3::Identity() + 2.0 * vv +
            2.0 * w * anti(v)) /
           nn;
}

Mat3 quat_to_rotation_derivative(const Vec4& q, const Vec4& dq) {
    const double nn = q.squaredNorm();
    if (nn < 1e-24) {
        throw Degenerate("quat_to_rotation_derivative: quaternion norm is near zero");
    }
    const double w = q(0);
    const Vec3 v = q.tail<3>();
    const double dw = dq(0);
    const Vec3 dv = dq.tail<3>();

    const Mat3 numerator = (w * w - v.squaredNorm()) * Mat3::Identity() +
                           2.0 * v * v.transpose() + 2.0 * w * anti(v);
    const Mat3 d_numerator = 2.0 * (w * dw - v.dot(dv)) * Mat3::Identity() +
                             2.0 * (dv * v.transpose() + v * dv.transpose()) +
                             2.0 * (dw * anti(v) + w * anti(dv));
    const double d_nn = 2.0 * q.dot(dq);
    return d_numerator / nn - numerator * (d_nn / (nn * nn));
}

Vec4 rotation_to_quat(const Mat3& r) {
    Eigen::Quaterniond q(r);
    q.normalize();
    if (q.w() < 0.0) {
        q.coeffs() *= -1.0;
    }
    return Vec4(q.w(), q.x(), q.y(), q.z());
}

Vec4 quat_multiply(const Vec4& a, const Vec4& b) {
    const double aw = a(0);
    const Vec3 av = a.tail<3>();
    const double bw = b(0);
    const Vec3 bv = b.tail<3>();
    Vec4 out;
    out(0) = aw * bw - av.dot(bv);
    out.tail<3>() = aw * bv + bw * av + av.cross(bv);
    return out;
}

Vec4 quat_exp(const Vec3& w) {
    const double s = 0.25 * w.squaredNorm();
    double c, k;
    if (s < 1e-8) {
        // cos and sinc of the half angle, expanded in s = (|w|/2)².
        c = 1.0 - s / 2.0 + s * s / 24.0;
        k = 0.5 * (1.0 - s / 6.0 + s * s / 120.0);
    } else {
        const double half = std::sqrt(s);
        c = std::cos(half);
        k = std::sin(half) / (2.0 * half);
    }
    Vec4 q;
    q(0) = c;
    q.tail<3>() = k * w;
    return q;
}

Vec3 quat_log(const Vec4& q) {
    Vec4 u = q / q.norm();
    if (u(0) < 0.0) {
        u = -u;
    }
    const double vnorm = u.tail<3>().norm();
    if (vnorm < 1e-16) {
        return 2.0 * u.tail<3>();
    }
    const double angle = 2.0 * std::atan2(vnorm, u(0));
    return (angle / vnorm) * u.tail<3>();
}

} // namespace cosshell
