#include "doctest.h"

#include <array>
#include <cmath>

#include "cosshell/energy.hpp"
#include "cosshell/integrate.hpp"
#include "test_util.hpp"

using namespace cosshell;
using testutil::catalog_surfaces;
using testutil::random_domain_point;
using testutil::random_mat3;
using testutil::sample_material;

namespace {

constexpr std::array<QuadraticForm, 3> kForms = {
    QuadraticForm::Micropolar, QuadraticForm::Shell, QuadraticForm::Curvature};

StrainMeasures measures_at(const Surface& surface, const StateField& field,
                           const MaterialParams& p, double x1, double x2) {
    const GeometryFrame fr = frame_at(surface, x1, x2);
    return strain_measures(fr, field(fr), p);
}

} // namespace

TEST_CASE("quadratic forms are symmetric bilinear and obey polarization") {
    const MaterialParams p = sample_material();
    CounterRng rng(61);
    std::uint64_t ctr = 0;
    for (int i = 0; i < 10; ++i) {
        const Mat3 x = random_mat3(rng, ctr);
        const Mat3 y = random_mat3(rng, ctr);
        for (QuadraticForm f : kForms) {
            const double wxy = evaluate_form(f, x, y, p);
            CHECK(wxy == doctest::Approx(evaluate_form(f, y, x, p)).epsilon(1e-14));
            const double expanded = evaluate_form(f, x + y, p);
            const double assembled =
                evaluate_form(f, x, p) + 2.0 * wxy + evaluate_form(f, y, p);
            CHECK(expanded == doctest::Approx(assembled).epsilon(1e-13));
        }
    }
}

TEST_CASE("form stress is work conjugate to the bilinear form") {
    const MaterialParams p = sample_material();
    CounterRng rng(62);
    std::uint64_t ctr = 0;
    for (int i = 0; i < 10; ++i) {
        const Mat3 x = random_mat3(rng, ctr);
        const Mat3 y = random_mat3(rng, ctr);
        for (QuadraticForm f : kForms) {
            const double via_stress = inner(form_stress(f, x, p), y);
            CHECK(via_stress == doctest::Approx(evaluate_form(f, x, y, p)).epsilon(1e-13));
        }
    }
}

TEST_CASE("bulk form equals its deviatoric plus volumetric rewriting") {
    const MaterialParams p = sample_material();
    const double bulk = p.kappa();
    CHECK(bulk == doctest::Approx((2.0 * p.mu + 3.0 * p.lambda) / 3.0).epsilon(1e-15));
    CounterRng rng(63);
    std::uint64_t ctr = 0;
    for (int i = 0; i < 10; ++i) {
        const Mat3 x = random_mat3(rng, ctr);
        const Mat3 dev = sym(x) - (x.trace() / 3.0) * Mat3::Identity();
        const double rewritten = p.mu * dev.squaredNorm() + p.mu_c * skw(x).squaredNorm() +
                                 0.5 * bulk * x.trace() * x.trace();
        CHECK(evaluate_form(QuadraticForm::Micropolar, x, p) ==
              doctest::Approx(rewritten).epsilon(1e-13));
    }
}

TEST_CASE("plane stress trace correction turns the shell form into the bulk form") {
    const MaterialParams p = sample_material();
    const double gap = p.lambda * p.lambda / (2.0 * (p.lambda + 2.0 * p.mu));
    CounterRng rng(64);
    std::uint64_t ctr = 0;
    for (int i = 0; i < 10; ++i) {
        const Mat3 x = random_mat3(rng, ctr);
        const double corrected =
            evaluate_form(QuadraticForm::Shell, x, p) + gap * x.trace() * x.trace();
        CHECK(evaluate_form(QuadraticForm::Micropolar, x, p) ==
              doctest::Approx(corrected).epsilon(1e-13));
    }
}

TEST_CASE("biot stress is twice the bulk form stress") {
    const MaterialParams p = sample_material();
    CounterRng rng(65);
    std::uint64_t ctr = 0;
    for (int i = 0; i < 10; ++i) {
        const Mat3 x = random_mat3(rng, ctr);
        const Mat3 via_form = 2.0 * form_stress(QuadraticForm::Micropolar, x, p);
        CHECK((biot_stress(x, p) - via_form).norm() < 1e-12 * via_form.norm());
    }
}

TEST_CASE("raw series matches the weighted density along the thickness") {
    const MaterialParams p = sample_material();
    const StateField field = synthetic_field(21, 0.08);
    CounterRng rng(66);
    std::uint64_t ctr = 0;
    for (const auto& [name, surface] : catalog_surfaces()) {
        INFO("surface ", name);
        for (int i = 0; i < 4; ++i) {
            const Vec2 x = random_domain_point(surface.domain(), rng, ctr);
            const GeometryFrame fr = frame_at(surface, x(0), x(1));
            const StrainMeasures sm = strain_measures(fr, field(fr), p);
            const SeriesCoefficients sc = series_coefficients(fr, sm, p);
            for (int k = -3; k <= 3; ++k) {
                const double x3 = 0.5 * p.h * k / 3.0;
                const double b = 1.0 - 2.0 * fr.H * x3 + fr.K * x3 * x3;
                double poly_c = 0.0;
                for (int j = 6; j >= 0; --j) {
                    poly_c = poly_c * x3 + sc.c_raw[static_cast<std::size_t>(j)];
                }
                const double direct_c =
                    b * b *
                    evaluate_form(QuadraticForm::Micropolar,
                                  reconstructed_strain(fr, sm, x3), p);
                CHECK(poly_c == doctest::Approx(direct_c).epsilon(1e-10).scale(1e-12));

                double poly_d = 0.0;
                for (int j = 2; j >= 0; --j) {
                    poly_d = poly_d * x3 + sc.d[static_cast<std::size_t>(j)];
                }
                const double direct_d =
                    b * b *
                    evaluate_form(QuadraticForm::Curvature, wryness(fr, sm, x3), p);
                CHECK(poly_d == doctest::Approx(direct_d).epsilon(1e-10).scale(1e-12));
            }
        }
    }
}

TEST_CASE("normal term elimination preserves the series for the model's stretch") {
    const MaterialParams p = sample_material();
    const StateField field = synthetic_field(22, 0.08);
    for (const auto& [name, surface] : catalog_surfaces()) {
        INFO("surface ", name);
        const Rect d = surface.domain();
        const GeometryFrame fr =
            frame_at(surface, 0.5 * (d.a1 + d.b1) + 0.17 * d.width1(),
                     0.5 * (d.a2 + d.b2) - 0.11 * d.width2());
        const StrainMeasures sm = strain_measures(fr, field(fr), p);
        const SeriesCoefficients sc = series_coefficients(fr, sm, p);
        for (std::size_t j = 0; j < sc.c_reduced.size(); ++j) {
            CHECK(sc.c_reduced[j] ==
                  doctest::Approx(sc.c_raw[j]).epsilon(1e-11).scale(1e-13));
        }

        const StrainMeasures full = with_full_thickness_coupling(fr, sm);
        const SeriesCoefficients sf = series_coefficients(fr, full, p);
        double gap = 0.0;
        for (std::size_t j = 0; j < sf.c_reduced.size(); ++j) {
            gap = std::max(gap, std::abs(sf.c_reduced[j] - sf.c_raw[j]));
        }
        // The elimination identities assume the model's own rho_b, so
        // swapping in the full coupling must surface in the raw series.
        if (std::abs(sm.rho_b_full - sm.rho_b) > 1e-6) {
            CHECK(gap > 1e-10);
        }
    }
}

TEST_CASE("curvature combinations collapse the series coefficients") {
    const MaterialParams p = sample_material();
    const StateField field = synthetic_field(23, 0.08);
    CounterRng rng(67);
    std::uint64_t ctr = 0;
    for (const auto& [name, surface] : catalog_surfaces()) {
        INFO("surface ", name);
        for (int i = 0; i < 4; ++i) {
            const Vec2 x = random_domain_point(surface.domain(), rng, ctr);
            const GeometryFrame fr = frame_at(surface, x(0), x(1));
            const StrainMeasures sm = strain_measures(fr, field(fr), p);
            const SeriesCoefficients sc = series_coefficients(fr, sm, p);
            const double H = fr.H;
            const double K = fr.K;

            const Mat3 n = sm.E * fr.B + fr.C * sm.Ke;
            const Mat3 cke = fr.C * sm.Ke;
            const Mat3 q2 = cke * fr.B - 2.0 * H * cke;
            const Mat3 nb = n * fr.B;
            const Mat3 keb = sm.Ke * fr.B;

            auto sh = [&](const Mat3& a, const Mat3& b) {
                return evaluate_form(QuadraticForm::Shell, a, b, p);
            };
            auto cv = [&](const Mat3& a) {
                return evaluate_form(QuadraticForm::Curvature, a, p);
            };

            const double combo_c3 =
                (4.0 * H * H - K) * sc.c_reduced[0] + 2.0 * H * sc.c_reduced[1] +
                sc.c_reduced[2];
            const double target_c3 = -K * sh(sm.E, sm.E) + sh(n, n) + 2.0 * sh(sm.E, q2);
            CHECK(combo_c3 == doctest::Approx(target_c3).epsilon(1e-10).scale(1.0));

            const double combo_c5 =
                (K * K - 12.0 * H * H * K + 16.0 * H * H * H * H) * sc.c_reduced[0] +
                (8.0 * H * H * H - 4.0 * H * K) * sc.c_reduced[1] +
                (4.0 * H * H - K) * sc.c_reduced[2] + 2.0 * H * sc.c_reduced[3] +
                sc.c_reduced[4];
            const double target_c5 =
                -K * sh(n, n) + evaluate_form(QuadraticForm::Micropolar, nb, p);
            CHECK(combo_c5 == doctest::Approx(target_c5).epsilon(1e-10).scale(1.0));

            const double combo_d3 =
                (4.0 * H * H - K) * sc.d[0] + 2.0 * H * sc.d[1] + sc.d[2];
            const double target_d3 = -K * cv(sm.Ke) + cv(keb);
            CHECK(combo_d3 == doctest::Approx(target_d3).epsilon(1e-10).scale(1.0));

            const double combo_d5 =
                (K * K - 12.0 * H * H * K + 16.0 * H * H * H * H) * sc.d[0] +
                (8.0 * H * H * H - 4.0 * H * K) * sc.d[1] +
                (4.0 * H * H - K) * sc.d[2];
            const double target_d5 = -K * cv(keb) + cv(keb * fr.B);
            CHECK(combo_d5 == doctest::Approx(target_d5).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("rewritten and raw thickness-integrated densities agree") {
    const MaterialParams p = sample_material();
    const StateField field = synthetic_field(24, 0.08);
    CounterRng rng(68);
    std::uint64_t ctr = 0;
    for (const auto& [name, surface] : catalog_surfaces()) {
        INFO("surface ", name);
        for (int i = 0; i < 6; ++i) {
            const Vec2 x = random_domain_point(surface.domain(), rng, ctr);
            const GeometryFrame fr = frame_at(surface, x(0), x(1));
            const StrainMeasures sm = strain_measures(fr, field(fr), p);
            const EnergyBreakdown bd = reduced_density(fr, sm, p);
            const double raw = reduced_density_raw(fr, sm, p);
            CHECK(bd.total == doctest::Approx(raw).epsilon(1e-12).scale(1e-14));
            CHECK(bd.total ==
                  doctest::Approx(bd.memb + bd.memb_bend + bd.bend_curv).epsilon(1e-14));
            CHECK(bd.area_element == fr.det0);
            CHECK(bd.load == 0.0);
        }
    }
}

TEST_CASE("density gradients match central differences in the measures") {
    const MaterialParams p = sample_material();
    const StateField field = synthetic_field(25, 0.08);
    const Surface hyp = Surface::hyperbolic_paraboloid(0.8, 1.3, {-0.4, 0.4, -0.4, 0.4});
    const GeometryFrame fr = frame_at(hyp, 0.15, -0.2);
    const ShellPointState st = field(fr);
    const StrainMeasures sm = strain_measures(fr, st, p);
    const DensityGradients dg = reduced_density_gradients(fr, sm, st.Qe, p);
    const double eps = 1e-5;

    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            StrainMeasures plus = sm;
            StrainMeasures minus = sm;
            plus.E(r, c) += eps;
            minus.E(r, c) -= eps;
            const double fd =
                (reduced_density(fr, plus, p).total - reduced_density(fr, minus, p).total) /
                (2.0 * eps);
            CHECK(dg.dE(r, c) == doctest::Approx(fd).epsilon(1e-8).scale(1e-10));

            plus = sm;
            minus = sm;
            plus.Ke(r, c) += eps;
            minus.Ke(r, c) -= eps;
            const double fd_k =
                (reduced_density(fr, plus, p).total - reduced_density(fr, minus, p).total) /
                (2.0 * eps);
            CHECK(dg.dKe(r, c) == doctest::Approx(fd_k).epsilon(1e-8).scale(1e-10));
        }
    }
}

TEST_CASE("deformation gradient sensitivity follows the chain rule through the strain") {
    const MaterialParams p = sample_material();
    const StateField field = synthetic_field(26, 0.08);
    const Surface sph = Surface::sphere(1.5, {0.1, 0.9, -0.4, 0.4});
    const GeometryFrame fr = frame_at(sph, 0.4, 0.1);
    const ShellPointState st = field(fr);
    const StrainMeasures sm = strain_measures(fr, st, p);
    const DensityGradients dg = reduced_density_gradients(fr, sm, st.Qe, p);
    const double eps = 1e-6;

    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 2; ++c) {
            ShellPointState plus = st;
            ShellPointState minus = st;
            plus.grad_m(r, c) += eps;
            minus.grad_m(r, c) -= eps;
            const double fd =
                (reduced_density(fr, strain_measures(fr, plus, p), p).total -
                 reduced_density(fr, strain_measures(fr, minus, p), p).total) /
                (2.0 * eps);
            CHECK(dg.dGradM(r, c) == doctest::Approx(fd).epsilon(1e-7).scale(1e-10));
        }
    }
}

TEST_CASE("load potential pairs resultants with displacement and director tilt") {
    CounterRng rng(69);
    std::uint64_t ctr = 0;
    const Surface cyl = Surface::cylinder(0.8, {0.0, 1.2, 0.0, 0.7});
    const GeometryFrame fr = frame_at(cyl, 0.3, 0.2);
    LoadResultants res;
    res.f_bar = testutil::random_vec3(rng, ctr);
    res.t_bar = testutil::random_vec3(rng, ctr);
    res.c_omega = testutil::random_vec3(rng, ctr);
    res.c_gamma = testutil::random_vec3(rng, ctr);
    const Vec3 m = fr.y0 + testutil::random_vec3(rng, ctr, 0.1);
    const Mat3 qe = testutil::random_rotation(rng, ctr);

    const LoadDensities ld = load_potential(res, m, fr.y0, qe, fr.n0);
    const Vec3 u = m - fr.y0;
    const Vec3 tilt = (qe - Mat3::Identity()) * fr.n0;
    CHECK(ld.area == doctest::Approx(res.f_bar.dot(u) + res.c_omega.dot(tilt)).epsilon(1e-14));
    CHECK(ld.edge == doctest::Approx(res.t_bar.dot(u) + res.c_gamma.dot(tilt)).epsilon(1e-14));

    const LoadDensities at_rest = load_potential(res, fr.y0, fr.y0, Mat3::Identity(), fr.n0);
    CHECK(at_rest.area == 0.0);
    CHECK(at_rest.edge == 0.0);
}

TEST_CASE("classical density equals the general form with matched coefficients") {
    const MaterialParams p = sample_material();
    const StateField field = synthetic_field(27, 0.08);
    const double young = p.mu * (3.0 * p.lambda + 2.0 * p.mu) / (p.lambda + p.mu);
    const double nu = p.lambda / (2.0 * (p.lambda + p.mu));
    const double stretch = young * p.h / (1.0 - nu * nu);
    const double bending = young * p.h * p.h * p.h / (12.0 * (1.0 - nu * nu));
    const ShearCorrection corr;

    SixParamCoefficients match;
    match.alpha1 = stretch * nu;
    match.alpha2 = 0.0;
    match.alpha3 = stretch * (1.0 - nu);
    match.alpha4 = corr.alpha_s * stretch * (1.0 - nu);
    match.beta1 = bending * nu;
    match.beta2 = 0.0;
    match.beta3 = bending * (1.0 - nu);
    match.beta4 = corr.alpha_t * bending * (1.0 - nu);

    CounterRng rng(70);
    std::uint64_t ctr = 0;
    for (const auto& [name, surface] : catalog_surfaces()) {
        INFO("surface ", name);
        for (int i = 0; i < 4; ++i) {
            const Vec2 x = random_domain_point(surface.domain(), rng, ctr);
            const GeometryFrame fr = frame_at(surface, x(0), x(1));
            const StrainMeasures sm = strain_measures(fr, field(fr), p);
            const double wp = sixparam_density_wp(sm, fr, p, corr);
            const double ep = sixparam_density_ep(sm, fr, match);
            CHECK(wp == doctest::Approx(ep).epsilon(1e-13).scale(1e-15));
        }
    }
}

TEST_CASE("identified coefficients reproduce the comparison density") {
    const MaterialParams p = sample_material();
    const StateField field = synthetic_field(28, 0.08);
    CounterRng rng(71);
    std::uint64_t ctr = 0;
    for (const auto& [name, surface] : catalog_surfaces()) {
        INFO("surface ", name);
        for (int i = 0; i < 5; ++i) {
            const Vec2 x = random_domain_point(surface.domain(), rng, ctr);
            const GeometryFrame fr = frame_at(surface, x(0), x(1));
            const StrainMeasures sm = strain_measures(fr, field(fr), p);
            const SixParamCoefficients c = identify_coefficients(p, fr.K);
            const double ours = comparison_density(sm, p, fr.K);
            const double general = sixparam_density_ep(sm, fr, c);
            CHECK(ours == doctest::Approx(general).epsilon(1e-12).scale(1e-15));
        }
    }
}

TEST_CASE("identified coefficients carry the expected closed forms") {
    const MaterialParams p = sample_material();
    const double gauss = -0.85;
    const double h3 = p.h * p.h * p.h;
    const double plus = p.h + gauss * h3 / 12.0;
    const double minus = p.h - gauss * h3 / 12.0;
    const double curv = p.mu * p.L_c * p.L_c;
    const SixParamCoefficients c = identify_coefficients(p, gauss);

    CHECK(c.alpha1 ==
          doctest::Approx(plus * 2.0 * p.mu * p.lambda / (2.0 * p.mu + p.lambda))
              .epsilon(1e-15));
    CHECK(c.alpha2 == doctest::Approx(plus * (p.mu - p.mu_c)).epsilon(1e-15));
    CHECK(c.alpha3 == doctest::Approx(plus * (p.mu + p.mu_c)).epsilon(1e-15));
    CHECK(c.alpha4 == c.alpha3);
    CHECK(c.beta1 ==
          doctest::Approx(2.0 * minus * curv * (12.0 * p.b3 - p.b1) / 3.0).epsilon(1e-15));
    CHECK(c.beta2 == doctest::Approx(minus * curv * (p.b1 - p.b2)).epsilon(1e-15));
    CHECK(c.beta3 == doctest::Approx(minus * curv * (p.b1 + p.b2)).epsilon(1e-15));
    CHECK(c.beta4 == c.beta3);
    CHECK(c.mu_c_drill == doctest::Approx(2.0 * plus * p.mu_c).epsilon(1e-14));

    const SixParamCoefficients flat = identify_coefficients(p, 0.0);
    CHECK(flat.alpha2 == p.h * (p.mu - p.mu_c));
    CHECK(flat.alpha3 == p.h * (p.mu + p.mu_c));
    CHECK(flat.beta2 == p.h * curv * (p.b1 - p.b2));
    CHECK(flat.beta3 == p.h * curv * (p.b1 + p.b2));
}

TEST_CASE("zero couple modulus removes the in-plane drill stiffness") {
    MaterialParams p = sample_material();
    p.mu_c = 0.0;
    const SixParamCoefficients c = identify_coefficients(p, 0.4);
    CHECK(c.alpha2 == c.alpha3);
    CHECK(c.mu_c_drill == 0.0);
}

TEST_CASE("tangential split formulas are exact only on shell-shaped arguments") {
    const MaterialParams p = sample_material();
    const StateField field = synthetic_field(29, 0.08);
    for (const auto& [name, surface] : catalog_surfaces()) {
        INFO("surface ", name);
        const Rect d = surface.domain();
        const GeometryFrame fr = frame_at(surface, 0.5 * (d.a1 + d.b1), 0.5 * (d.a2 + d.b2));
        const StrainMeasures sm = strain_measures(fr, field(fr), p);
        CHECK(split_form_check(sm.E, fr, p).max_residual() < 1e-12);
        CHECK(split_form_check(sm.Ke, fr, p).max_residual() < 1e-12);
    }

    const Surface sph = Surface::sphere(1.5, {0.1, 0.9, -0.4, 0.4});
    const GeometryFrame fr = frame_at(sph, 0.5, 0.0);
    Mat3 generic;
    generic << 0.3, -0.1, 0.7, 0.2, 0.4, -0.5, 0.6, 0.1, 0.9;
    CHECK(split_form_check(generic, fr, p).max_residual() > 1e-6);
}
