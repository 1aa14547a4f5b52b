#include "cosshell/surface.hpp"

#include <algorithm>
#include <cmath>

namespace cosshell {

namespace {

double mono_pow(double x, int p) {
    if (p <= 0) {
        return p == 0 ? 1.0 : 0.0;
    }
    double r = 1.0;
    for (int i = 0; i < p; ++i) {
        r *= x;
    }
    return r;
}

double poly_eval(const MonomialTable& table, double x1, double x2, int d1, int d2) {
    double sum = 0.0;
    for (const MonomialTerm& t : table) {
        if (t.j < d1 || t.k < d2) {
            continue;
        }
        double factor = t.c;
        for (int i = 0; i < d1; ++i) {
            factor *= static_cast<double>(t.j - i);
        }
        for (int i = 0; i < d2; ++i) {
            factor *= static_cast<double>(t.k - i);
        }
        sum += factor * mono_pow(x1, t.j - d1) * mono_pow(x2, t.k - d2);
    }
    return sum;
}

/// 4th-order central differences of the position map. 25 evaluations on a
/// 5x5 tensor stencil.
SurfaceJet fd_jet(const Surface& s, double x1, double x2, double e1, double e2) {
    static const double kFirst[4] = {1.0, -8.0, 8.0, -1.0};
    static const int kOff4[4] = {-2, -1, 1, 2};
    static const double kSecond[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
    static const int kOff5[5] = {-2, -1, 0, 1, 2};

    SurfaceJet j;
    j.y = s.position(x1, x2);
    Vec3 a1 = Vec3::Zero();
    Vec3 a2 = Vec3::Zero();
    for (int i = 0; i < 4; ++i) {
        a1 += kFirst[i] * s.position(x1 + kOff4[i] * e1, x2);
        a2 += kFirst[i] * s.position(x1, x2 + kOff4[i] * e2);
    }
    j.d1 = a1 / (12.0 * e1);
    j.d2 = a2 / (12.0 * e2);

    Vec3 s11 = Vec3::Zero();
    Vec3 s22 = Vec3::Zero();
    for (int i = 0; i < 5; ++i) {
        s11 += kSecond[i] * s.position(x1 + kOff5[i] * e1, x2);
        s22 += kSecond[i] * s.position(x1, x2 + kOff5[i] * e2);
    }
    j.d11 = s11 / (12.0 * e1 * e1);
    j.d22 = s22 / (12.0 * e2 * e2);

    Vec3 mixed = Vec3::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) {
            mixed += kFirst[i] * kFirst[k] *
                     s.position(x1 + kOff4[i] * e1, x2 + kOff4[k] * e2);
        }
    }
    j.d12 = mixed / (144.0 * e1 * e2);
    return j;
}

Mat3 in_plane_generator() {
    Mat3 j;
    j << 0.0, 1.0, 0.0,
        -1.0, 0.0, 0.0,
         0.0, 0.0, 0.0;
    return j;
}

} // namespace

Surface Surface::plate(Rect domain) {
    Surface s;
    s.kind_ = Kind::Plate;
    s.domain_ = domain;
    return s;
}

Surface Surface::cylinder(double r, Rect domain) {
    Surface s;
    s.kind_ = Kind::Cylinder;
    s.domain_ = domain;
    s.radius_ = r;
    return s;
}

Surface Surface::sphere(double R, Rect domain) {
    Surface s;
    s.kind_ = Kind::Sphere;
    s.domain_ = domain;
    s.radius_ = R;
    return s;
}

Surface Surface::hyperbolic_paraboloid(double a, double b, Rect domain) {
    Surface s;
    s.kind_ = Kind::HyperbolicParaboloid;
    s.domain_ = domain;
    s.a_ = a;
    s.b_ = b;
    return s;
}

Surface Surface::polynomial(std::array<MonomialTable, 3> components, Rect domain) {
    Surface s;
    s.kind_ = Kind::Polynomial;
    s.domain_ = domain;
    if (components[0].empty()) {
        components[0] = {MonomialTerm{1, 0, 1.0}};
    }
    if (components[1].empty()) {
        components[1] = {MonomialTerm{0, 1, 1.0}};
    }
    s.poly_ = std::move(components);
    return s;
}

Surface Surface::with_finite_differences(double step_scale) const {
    Surface s = *this;
    s.mode_ = DerivMode::FiniteDifference;
    s.fd_step1_ = domain_.width1() * step_scale;
    s.fd_step2_ = domain_.width2() * step_scale;
    return s;
}

Vec3 Surface::position(double x1, double x2) const {
    switch (kind_) {
        case Kind::Plate:
            return Vec3(x1, x2, 0.0);
        case Kind::Cylinder: {
            const double u = x1 / radius_;
            return Vec3(radius_ * std::cos(u), radius_ * std::sin(u), x2);
        }
        case Kind::Sphere: {
            const double c1 = std::cos(x1), s1 = std::sin(x1);
            const double c2 = std::cos(x2), s2 = std::sin(x2);
            return radius_ * Vec3(c2 * c1, c2 * s1, s2);
        }
        case Kind::HyperbolicParaboloid:
            return Vec3(x1, x2, x1 * x1 / (2.0 * a_) - x2 * x2 / (2.0 * b_));
        case Kind::Polynomial:
            return Vec3(poly_eval(poly_[0], x1, x2, 0, 0),
                        poly_eval(poly_[1], x1, x2, 0, 0),
                        poly_eval(poly_[2], x1, x2, 0, 0));
    }
    throw Error("Surface: unreachable kind");
}

SurfaceJet Surface::analytic_jet(double x1, double x2) const {
    SurfaceJet j;
    j.y = position(x1, x2);
    switch (kind_) {
        case Kind::Plate:
            j.d1 = Vec3::UnitX();
            j.d2 = Vec3::UnitY();
            break;
        case Kind::Cylinder: {
            const double u = x1 / radius_;
            const double c = std::cos(u), s = std::sin(u);
            j.d1 = Vec3(-s, c, 0.0);
            j.d2 = Vec3::UnitZ();
            j.d11 = Vec3(-c / radius_, -s / radius_, 0.0);
            break;
        }
        case Kind::Sphere: {
            const double c1 = std::cos(x1), s1 = std::sin(x1);
            const double c2 = std::cos(x2), s2 = std::sin(x2);
            j.d1 = radius_ * Vec3(-c2 * s1, c2 * c1, 0.0);
            j.d2 = radius_ * Vec3(-s2 * c1, -s2 * s1, c2);
            j.d11 = radius_ * Vec3(-c2 * c1, -c2 * s1, 0.0);
            j.d12 = radius_ * Vec3(s2 * s1, -s2 * c1, 0.0);
            j.d22 = -j.y;
            break;
        }
        case Kind::HyperbolicParaboloid:
            j.d1 = Vec3(1.0, 0.0, x1 / a_);
            j.d2 = Vec3(0.0, 1.0, -x2 / b_);
            j.d11 = Vec3(0.0, 0.0, 1.0 / a_);
            j.d22 = Vec3(0.0, 0.0, -1.0 / b_);
            break;
        case Kind::Polynomial:
            for (int c = 0; c < 3; ++c) {
                j.d1(c) = poly_eval(poly_[c], x1, x2, 1, 0);
                j.d2(c) = poly_eval(poly_[c], x1, x2, 0, 1);
                j.d11(c) = poly_eval(poly_[c], x1, x2, 2, 0);
                j.d12(c) = poly_eval(poly_[c], x1, x2, 1, 1);
                j.d22(c) = poly_eval(poly_[c], x1, x2, 0, 2);
            }
            break;
    }
    return j;
}

SurfaceJet Surface::jet(double x1, double x2) const {
    if (mode_ == DerivMode::FiniteDifference) {
        return fd_jet(*this, x1, x2, fd_step1_, fd_step2_);
    }
    return analytic_jet(x1, x2);
}

Surface builtin_surface(const std::string& name, const SurfaceParams& params) {
    if (name == "plate") {
        return Surface::plate(params.domain);
    }
    if (name == "cylinder") {
        return Surface::cylinder(params.radius, params.domain);
    }
    if (name == "sphere") {
        return Surface::sphere(params.radius, params.domain);
    }
    if (name == "hyperbolic_paraboloid") {
        return Surface::hyperbolic_paraboloid(params.a, params.b, params.domain);
    }
    if (name == "polynomial") {
        return Surface::polynomial(params.poly, params.domain);
    }
    throw UnknownSurface("unknown surface '" + name + "'");
}

GeometryFrame frame_from_jet(const SurfaceJet& jet, const Vec2& x) {
    GeometryFrame frame;
    frame.x = x;
    frame.y0 = jet.y;
    frame.grad_y0.col(0) = jet.d1;
    frame.grad_y0.col(1) = jet.d2;

    Eigen::JacobiSVD<Mat32> svd(frame.grad_y0);
    if (svd.singularValues()(1) <= kRankTol * frame.grad_y0.norm()) {
        throw RankDeficient("frame_at: grad y0 is rank-deficient at (" +
                            std::to_string(x(0)) + ", " + std::to_string(x(1)) + ")");
    }

    const Vec3 cross = jet.d1.cross(jet.d2);
    frame.det0 = cross.norm();
    frame.n0 = cross / frame.det0;

    frame.I = frame.grad_y0.transpose() * frame.grad_y0;
    frame.II(0, 0) = jet.d11.dot(frame.n0);
    frame.II(0, 1) = jet.d12.dot(frame.n0);
    frame.II(1, 0) = frame.II(0, 1);
    frame.II(1, 1) = jet.d22.dot(frame.n0);
    frame.L = frame.I.inverse() * frame.II;
    frame.III = frame.II * frame.L;
    frame.H = 0.5 * frame.L.trace();
    frame.K = frame.L.determinant();
    frame.grad_n0 = -frame.grad_y0 * frame.L;

    const Mat3 t0 = frame.T0();
    const Mat3 t0inv = t0.inverse();
    Mat3 lifted = Mat3::Zero();
    lifted.leftCols<2>() = frame.grad_y0;
    frame.A = lifted * t0inv;
    lifted.leftCols<2>() = frame.grad_n0;
    frame.B = -lifted * t0inv;
    frame.C = frame.det0 * t0inv.transpose() * in_plane_generator() * t0inv;
    frame.Q0 = polar_decompose(t0).R;
    return frame;
}

GeometryFrame frame_at(const Surface& surface, double x1, double x2) {
    return frame_from_jet(surface.jet(x1, x2), Vec2(x1, x2));
}

GeometryFrame fd_frame_oracle(const Surface& surface, double x1, double x2, double eps) {
    return frame_from_jet(fd_jet(surface, x1, x2, eps, eps), Vec2(x1, x2));
}

AdmissibilityReport admissibility_check(const GeometryFrame& frame, double h) {
    AdmissibilityReport rep;
    double disc = frame.H * frame.H - frame.K;
    // L is similar to a symmetric matrix, so its eigenvalues are real and a
    // negative discriminant can only be rounding noise.
    if (disc < 0.0) {
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    rep.kappa1 = frame.H + root;
    rep.kappa2 = frame.H - root;
    rep.ok = h * std::abs(rep.kappa1) < 0.5 && h * std::abs(rep.kappa2) < 0.5;
    return rep;
}

ThetaKinematics theta_kinematics(const GeometryFrame& frame, double x3, double h) {
    if (std::abs(x3) > 0.5 * h * (1.0 + 1e-12)) {
        throw Inadmissible("theta_kinematics: |x3| exceeds h/2");
    }
    const AdmissibilityReport adm = admissibility_check(frame, h);
    if (!adm.ok) {
        throw Inadmissible("theta_kinematics: thickness " + std::to_string(h) +
                           " violates h*|kappa| < 1/2");
    }
    const double b = 1.0 - 2.0 * frame.H * x3 + frame.K * x3 * x3;
    if (b <= 0.0) {
        throw Inadmissible("theta_kinematics: slab map degenerates at x3 = " +
                           std::to_string(x3));
    }

    ThetaKinematics tk;
    tk.gradTheta = frame.T0();
    tk.gradTheta.leftCols<2>() += x3 * frame.grad_n0;
    tk.det = frame.det0 * b;

    // grad Theta factors as T0 (1 - x3 L_lift); a 2x2 adjugate gives the
    // block inverse in closed form.
    Mat3 core = (1.0 - 2.0 * frame.H * x3) * Mat3::Identity() +
                x3 * flat_lift(frame.L);
    core(2, 2) = b;
    tk.inv = core * frame.T0().inverse() / b;
    return tk;
}

double CurvatureIdentityReport::max_residual() const {
    return std::max({trace_A, det_A, A_projector, A_symmetric, A_idempotent,
                     B_symmetric, trace_B, det_B, cof_B, cayley_hamilton,
                     AB_commute, tangent_rows, C_skew, C_squared, C_rotated});
}

CurvatureIdentityReport curvature_tensor_identities(const GeometryFrame& frame) {
    CurvatureIdentityReport r;
    const Mat3& A = frame.A;
    const Mat3& B = frame.B;
    const Mat3& C = frame.C;

    r.trace_A = std::abs(A.trace() - 2.0);
    r.det_A = std::abs(A.determinant());
    r.A_projector = (A - (Mat3::Identity() - frame.n0 * frame.n0.transpose())).norm();
    r.A_symmetric = (A - A.transpose()).norm();
    r.A_idempotent = (A * A - A).norm();

    r.B_symmetric = (B - B.transpose()).norm();
    r.trace_B = std::abs(B.trace() - 2.0 * frame.H);
    r.det_B = std::abs(B.determinant());
    // tr Cof B is the second principal invariant.
    r.cof_B = std::abs(0.5 * (B.trace() * B.trace() - (B * B).trace()) - frame.K);
    r.cayley_hamilton = (B * B - 2.0 * frame.H * B + frame.K * A).norm();
    r.AB_commute = std::max((A * B - B).norm(), (B * A - B).norm());

    // (u1|u2|0) T0^{-1} A = (u1|u2|0) T0^{-1} for all u1, u2 exactly when
    // the first two rows of T0^{-1} (A - 1) vanish.
    const Mat3 s = frame.T0().inverse() * (A - Mat3::Identity());
    r.tangent_rows = s.topRows<2>().norm();

    r.C_skew = (C + C.transpose()).norm();
    r.C_squared = (C * C + A).norm();
    r.C_rotated = (C - frame.Q0 * in_plane_generator() * frame.Q0.transpose()).norm();
    return r;
}

double rotation_curvature_residual(const Surface& surface, const GeometryFrame& frame,
                                   double eps) {
    const auto rotation_at = [&surface](double u, double v) {
        const SurfaceJet j = surface.jet(u, v);
        Mat3 t0;
        t0.col(0) = j.d1;
        t0.col(1) = j.d2;
        t0.col(2) = j.d1.cross(j.d2).normalized();
        return polar_decompose(t0).R;
    };

    static const double kFirst[4] = {1.0, -8.0, 8.0, -1.0};
    static const int kOff[4] = {-2, -1, 1, 2};
    Mat3 dq1 = Mat3::Zero();
    Mat3 dq2 = Mat3::Zero();
    for (int i = 0; i < 4; ++i) {
        dq1 += kFirst[i] * rotation_at(frame.x(0) + kOff[i] * eps, frame.x(1));
        dq2 += kFirst[i] * rotation_at(frame.x(0), frame.x(1) + kOff[i] * eps);
    }
    dq1 /= 12.0 * eps;
    dq2 /= 12.0 * eps;

    // Q0^T dQ is skew up to FD error; project before taking the axial vector.
    Mat3 axials = Mat3::Zero();
    axials.col(0) = axl(skw(frame.Q0.transpose() * dq1));
    axials.col(1) = axl(skw(frame.Q0.transpose() * dq2));

    const Mat3 reconstructed = -frame.C * frame.Q0 * axials * frame.T0().inverse();
    return (frame.B - reconstructed).norm();
}

} // namespace cosshell
