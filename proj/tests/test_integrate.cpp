#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "cosshell/integrate.hpp"
#include "test_util.hpp"

using namespace cosshell;
using testutil::sample_material;

TEST_CASE("gauss rules integrate polynomials up to their design degree") {
    for (int n = 1; n <= 8; ++n) {
        const GaussRule rule = gauss_legendre(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        REQUIRE(rule.weights.size() == static_cast<std::size_t>(n));
        const double wsum = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double q = 0.0;
            for (int i = 0; i < n; ++i) {
                q += rule.weights[static_cast<std::size_t>(i)] *
                     std::pow(rule.nodes[static_cast<std::size_t>(i)], k);
            }
            const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
            CHECK(q == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
        // Nodes come in symmetric pairs.
        for (int i = 0; i < n; ++i) {
            CHECK(rule.nodes[static_cast<std::size_t>(i)] ==
                  doctest::Approx(-rule.nodes[static_cast<std::size_t>(n - 1 - i)])
                      .epsilon(1e-14)
                      .scale(1.0));
        }
    }
    CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("pairwise summation is reproducible and accurate") {
    CounterRng rng(81);
    std::vector<double> terms;
    terms.reserve(20000);
    long double reference = 0.0L;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double magnitude = std::exp(12.0 * rng.symmetric(2 * i));
        const double t = rng.symmetric(2 * i + 1) * magnitude;
        terms.push_back(t);
        reference += static_cast<long double>(t);
    }
    const double once = pairwise_sum(terms);
    const double again = pairwise_sum(terms);
    CHECK(once == again);
    const double scale = std::abs(static_cast<double>(reference)) + 1.0;
    CHECK(std::abs(once - static_cast<double>(reference)) < 1e-10 * scale);
    CHECK(pairwise_sum({}) == 0.0);
    CHECK(pairwise_sum({3.25}) == 3.25);
}

TEST_CASE("log-log slope recovers a power law and rejects bad samples") {
    std::vector<double> x = {0.02, 0.01, 0.005, 0.0025};
    std::vector<double> y;
    for (double v : x) {
        y.push_back(3.7 * std::pow(v, 2.5));
    }
    CHECK(loglog_slope(x, y) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK_THROWS_AS(loglog_slope({0.1, 0.2}, {1.0}), Error);
    CHECK_THROWS_AS(loglog_slope({0.1, 0.2}, {1.0, -1.0}), Error);
}

TEST_CASE("truncated reciprocal series follows the curvature recurrence") {
    const double H = 0.7;
    const double K = -0.3;
    for (double x3 : {-0.02, -0.005, 0.0, 0.004, 0.018}) {
        std::array<double, 5> c{};
        c[0] = 1.0;
        c[1] = 2.0 * H;
        for (std::size_t j = 2; j < c.size(); ++j) {
            c[j] = 2.0 * H * c[j - 1] - K * c[j - 2];
        }
        double expected = 0.0;
        for (int j = 4; j >= 0; --j) {
            expected = expected * x3 + c[static_cast<std::size_t>(j)];
        }
        CHECK(inverse_b_series(H, K, x3) == doctest::Approx(expected).epsilon(1e-14));
        // Against the true reciprocal the truncation error is fifth order.
        const double b = 1.0 - 2.0 * H * x3 + K * x3 * x3;
        CHECK(std::abs(inverse_b_series(H, K, x3) - 1.0 / b) <
              40.0 * std::pow(std::abs(2.0 * H * x3) + std::abs(K * x3 * x3), 5) + 1e-15);
    }
}

TEST_CASE("synthetic fields are seed deterministic with analytic derivatives") {
    const Surface plate = Surface::plate({-0.5, 0.5, -0.5, 0.5});
    const StateField f1 = synthetic_field(7, 0.08);
    const StateField f2 = synthetic_field(7, 0.08);
    const StateField other = synthetic_field(8, 0.08);

    const GeometryFrame fr = frame_at(plate, 0.2, -0.1);
    const ShellPointState a = f1(fr);
    const ShellPointState b = f2(fr);
    CHECK((a.m - b.m).norm() == 0.0);
    CHECK((a.grad_m - b.grad_m).norm() == 0.0);
    CHECK((a.Qe - b.Qe).norm() == 0.0);
    CHECK((a.m - other(fr).m).norm() > 0.0);

    const double eps = 1e-5;
    for (int axis = 0; axis < 2; ++axis) {
        const double d1 = axis == 0 ? eps : 0.0;
        const double d2 = axis == 1 ? eps : 0.0;
        const ShellPointState plus = f1(frame_at(plate, 0.2 + d1, -0.1 + d2));
        const ShellPointState minus = f1(frame_at(plate, 0.2 - d1, -0.1 - d2));
        const Vec3 fd_m = (plus.m - minus.m) / (2.0 * eps);
        CHECK((fd_m - a.grad_m.col(axis)).norm() < 1e-8);
        const Mat3 fd_q = (plus.Qe - minus.Qe) / (2.0 * eps);
        CHECK((fd_q - a.dQe[static_cast<std::size_t>(axis)]).norm() < 1e-6);
    }
}

TEST_CASE("reference field carries zero energy in both integrals") {
    const MaterialParams p = sample_material();
    QuadratureSpec spec;
    spec.n1 = 4;
    spec.n2 = 4;
    const Surface sph = Surface::sphere(1.5, {0.1, 0.9, -0.4, 0.4});
    // The reference strains are zero only to rounding, so the quadratic
    // energies land at the square of machine precision.
    CHECK(std::abs(integrate_volume(sph, reference_field(), p, spec)) < 1e-24);
    CHECK(std::abs(integrate_reduced(sph, reference_field(), p, spec)) < 1e-24);
}

TEST_CASE("uniform plate stretch integrates to its closed form") {
    const MaterialParams p = sample_material();
    const double a = 1.03;
    const Surface plate = Surface::plate({-0.5, 0.5, -0.5, 0.5});
    const StateField stretch = [a](const GeometryFrame& frame) {
        ShellPointState st;
        st.m = Vec3(a * frame.x(0), a * frame.x(1), 0.0);
        st.grad_m = Mat32::Zero();
        st.grad_m(0, 0) = a;
        st.grad_m(1, 1) = a;
        st.Qe = Mat3::Identity();
        return st;
    };
    QuadratureSpec spec;
    spec.n1 = 4;
    spec.n2 = 4;
    const double s = a - 1.0;
    const double wshell =
        2.0 * p.mu * s * s + p.lambda * p.mu / (p.lambda + 2.0 * p.mu) * 4.0 * s * s;
    const double closed = p.h * wshell;
    CHECK(integrate_reduced(plate, stretch, p, spec) ==
          doctest::Approx(closed).epsilon(1e-13));
    // Flat geometry makes the thickness reduction exact, so the 3D
    // integral lands on the same value.
    CHECK(integrate_volume(plate, stretch, p, spec) ==
          doctest::Approx(closed).epsilon(1e-13));
}

TEST_CASE("reduction is exact to rounding on a spherical patch") {
    const MaterialParams p = sample_material();
    const Surface sph = Surface::sphere(0.1, {0.05, 0.85, -0.2, 0.2});
    const StateField field = synthetic_field(42, 0.05);
    QuadratureSpec spec;
    spec.n1 = 6;
    spec.n2 = 6;
    const double vol = integrate_volume(sph, field, p, spec);
    const double red = integrate_reduced(sph, field, p, spec);
    CHECK(std::abs(vol - red) < 1e-12 * std::abs(vol));
}

TEST_CASE("thickness truncation error shrinks at the analytic order") {
    const MaterialParams p = sample_material();
    const Surface cyl = Surface::cylinder(0.1, {0.0, 0.6, 0.0, 0.3});
    const StateField field = synthetic_field(42, 0.05);
    QuadratureSpec spec;
    spec.n1 = 6;
    spec.n2 = 6;
    const std::vector<double> hs = {0.02, 0.01, 0.005};
    const ConvergenceStudy study = convergence_study(cyl, field, p, hs, spec);
    REQUIRE(study.h_values.size() == hs.size());
    REQUIRE(study.volume.size() == hs.size());
    REQUIRE(study.reduced.size() == hs.size());
    REQUIRE(study.residuals.size() == hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
        CHECK(study.residuals[i] > 0.0);
        if (i > 0) {
            CHECK(study.residuals[i] < study.residuals[i - 1]);
        }
    }
    CHECK(study.slope > 6.3);
    CHECK(study.slope < 7.7);
    CHECK(study.slope ==
          doctest::Approx(loglog_slope(study.h_values, study.residuals)).epsilon(1e-12));
}

TEST_CASE("integrals are bitwise reproducible across thread counts") {
    const MaterialParams p = sample_material();
    const Surface hyp = Surface::hyperbolic_paraboloid(0.8, 1.3, {-0.4, 0.4, -0.4, 0.4});
    const StateField field = synthetic_field(17, 0.06);
    QuadratureSpec spec;
    spec.n1 = 5;
    spec.n2 = 5;
    const double v1 = integrate_volume(hyp, field, p, spec, 1);
    const double v4 = integrate_volume(hyp, field, p, spec, 4);
    CHECK(v1 == v4);
    const double r1 = integrate_reduced(hyp, field, p, spec, 1);
    const double r3 = integrate_reduced(hyp, field, p, spec, 3);
    CHECK(r1 == r3);
}

TEST_CASE("quadrature validation rejects unusable specs") {
    const MaterialParams p = sample_material();
    const Surface plate = Surface::plate({-0.5, 0.5, -0.5, 0.5});
    QuadratureSpec thin;
    thin.n_gauss_x3 = 4;
    CHECK_THROWS_AS(integrate_volume(plate, reference_field(), p, thin), Error);
    QuadratureSpec empty;
    empty.n1 = 0;
    CHECK_THROWS_AS(integrate_reduced(plate, reference_field(), p, empty), Error);

    MaterialParams thick = p;
    thick.h = 0.5;
    const Surface small_sphere = Surface::sphere(0.1, {0.05, 0.85, -0.2, 0.2});
    QuadratureSpec spec;
    spec.n1 = 3;
    spec.n2 = 3;
    CHECK_THROWS_AS(integrate_reduced(small_sphere, synthetic_field(1, 0.05), thick, spec),
                    Inadmissible);
}
