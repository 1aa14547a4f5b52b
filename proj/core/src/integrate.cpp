#include "cosshell/integrate.hpp"

#include <array>
#include <cmath>

#include "cosshell/rng.hpp"
#include "parallel_for.hpp"

namespace cosshell {

GaussRule gauss_legendre(int n) {
    if (n < 1) {
        throw Error("gauss_legendre: need at least one node");
    }
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Root bracketing guess for the i-th largest root, then Newton on
        // the three-term recurrence.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double pn = 1.0;
            double pn1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double pn2 = pn1;
                pn1 = pn;
                pn = ((2.0 * j + 1.0) * x * pn1 - j * pn2) / (j + 1.0);
            }
            deriv = n * (x * pn - pn1) / (x * x - 1.0);
            const double step = pn / deriv;
            x -= step;
            if (std::abs(step) < 1e-15) {
                break;
            }
        }
        const double weight = 2.0 / ((1.0 - x * x) * deriv * deriv);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = weight;
        rule.weights[n - 1 - i] = weight;
    }
    return rule;
}

StateField reference_field() {
    return [](const GeometryFrame& frame) { return reference_state(frame); };
}

namespace {

/// Quadratic bivariate polynomial with coefficients for
/// {1, x1, x2, x1², x1 x2, x2²}.
struct Poly2 {
    std::array<double, 6> c{};

    double value(double x1, double x2) const {
        return c[0] + c[1] * x1 + c[2] * x2 + c[3] * x1 * x1 + c[4] * x1 * x2 +
               c[5] * x2 * x2;
    }
    double d1(double x1, double x2) const { return c[1] + 2.0 * c[3] * x1 + c[4] * x2; }
    double d2(double x1, double x2) const { return c[2] + c[4] * x1 + 2.0 * c[5] * x2; }
};

} // namespace

StateField synthetic_field(std::uint64_t seed, double amplitude) {
    const CounterRng rng(seed);
    std::array<Poly2, 3> displacement;
    std::array<Poly2, 3> rotation;
    std::uint64_t counter = 0;
    for (auto* block : {&displacement, &rotation}) {
        for (Poly2& poly : *block) {
            for (double& coeff : poly.c) {
                coeff = amplitude * rng.symmetric(counter++);
            }
        }
    }

    return [displacement, rotation](const GeometryFrame& frame) {
        const double x1 = frame.x(0);
        const double x2 = frame.x(1);
        ShellPointState state;
        Vec3 u, du1, du2, w, dw1, dw2;
        for (int i = 0; i < 3; ++i) {
            u(i) = displacement[i].value(x1, x2);
            du1(i) = displacement[i].d1(x1, x2);
            du2(i) = displacement[i].d2(x1, x2);
            w(i) = rotation[i].value(x1, x2);
            dw1(i) = rotation[i].d1(x1, x2);
            dw2(i) = rotation[i].d2(x1, x2);
        }
        state.m = frame.y0 + u;
        state.grad_m = frame.grad_y0;
        state.grad_m.col(0) += du1;
        state.grad_m.col(1) += du2;
        state.Qe = rotation_exp(w);
        state.dQe[0] = rotation_exp_derivative(w, dw1);
        state.dQe[1] = rotation_exp_derivative(w, dw2);
        return state;
    };
}

double pairwise_sum(std::vector<double> terms) {
    if (terms.empty()) {
        return 0.0;
    }
    std::size_t n = terms.size();
    while (n > 1) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) {
            terms[i] = terms[2 * i] + terms[2 * i + 1];
        }
        if (n % 2 == 1) {
            terms[half] = terms[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    return terms[0];
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw Error("loglog_slope: size mismatch");
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) {
        throw Error("loglog_slope: need at least two positive samples");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        cov += (lx[i] - mx) * (ly[i] - my);
        var += (lx[i] - mx) * (lx[i] - mx);
    }
    return cov / var;
}

double inverse_b_series(double mean_curvature, double gauss_curvature, double x3) {
    const double h2 = mean_curvature * mean_curvature;
    const double c1 = 2.0 * mean_curvature;
    const double c2 = 4.0 * h2 - gauss_curvature;
    const double c3 = 8.0 * h2 * mean_curvature - 4.0 * mean_curvature * gauss_curvature;
    const double c4 = gauss_curvature * gauss_curvature -
                      12.0 * h2 * gauss_curvature + 16.0 * h2 * h2;
    return 1.0 + x3 * (c1 + x3 * (c2 + x3 * (c3 + x3 * c4)));
}

namespace {

struct SurfaceSample {
    double x1 = 0.0;
    double x2 = 0.0;
    double weight = 0.0;
};

/// Tensor-product Gauss points over the cell grid, in a fixed cell-major
/// order shared by both integrators.
std::vector<SurfaceSample> surface_samples(const Rect& domain, const QuadratureSpec& spec) {
    if (spec.n1 < 1 || spec.n2 < 1 || spec.n_gauss_cell < 1) {
        throw Error("surface_samples: quadrature spec must be positive");
    }
    const GaussRule rule = gauss_legendre(spec.n_gauss_cell);
    const double w1 = domain.width1() / spec.n1;
    const double w2 = domain.width2() / spec.n2;
    std::vector<SurfaceSample> samples;
    samples.reserve(static_cast<std::size_t>(spec.n1) * spec.n2 * spec.n_gauss_cell *
                    spec.n_gauss_cell);
    for (int i2 = 0; i2 < spec.n2; ++i2) {
        for (int i1 = 0; i1 < spec.n1; ++i1) {
            const double c1 = domain.a1 + (i1 + 0.5) * w1;
            const double c2 = domain.a2 + (i2 + 0.5) * w2;
            for (int g2 = 0; g2 < spec.n_gauss_cell; ++g2) {
                for (int g1 = 0; g1 < spec.n_gauss_cell; ++g1) {
                    SurfaceSample s;
                    s.x1 = c1 + 0.5 * w1 * rule.nodes[g1];
                    s.x2 = c2 + 0.5 * w2 * rule.nodes[g2];
                    s.weight = 0.25 * w1 * w2 * rule.weights[g1] * rule.weights[g2];
                    samples.push_back(s);
                }
            }
        }
    }
    return samples;
}

} // namespace

double integrate_volume(const Surface& surface, const StateField& field,
                        const MaterialParams& params, const QuadratureSpec& spec,
                        int threads) {
    if (spec.n_gauss_x3 < 6) {
        throw Error("integrate_volume: need at least 6 thickness Gauss points");
    }
    const auto samples = surface_samples(surface.domain(), spec);
    const GaussRule thickness = gauss_legendre(spec.n_gauss_x3);
    std::vector<double> contributions(samples.size(), 0.0);

    detail::parallel_for(samples.size(), threads, [&](std::size_t i) {
        const SurfaceSample& s = samples[i];
        const GeometryFrame frame = frame_at(surface, s.x1, s.x2);
        const ShellPointState state = field(frame);
        const StrainMeasures sm = strain_measures(frame, state, params);
        double column = 0.0;
        for (int g = 0; g < spec.n_gauss_x3; ++g) {
            const double x3 = 0.5 * params.h * thickness.nodes[g];
            const double wz = 0.5 * params.h * thickness.weights[g];
            const ThetaKinematics theta = theta_kinematics(frame, x3, params.h);
            const double density =
                evaluate_form(QuadraticForm::Micropolar,
                              reconstructed_strain(frame, sm, x3), params) +
                evaluate_form(QuadraticForm::Curvature, wryness(frame, sm, x3), params);
            column += wz * density * theta.det;
        }
        contributions[i] = s.weight * column;
    });
    return pairwise_sum(std::move(contributions));
}

double integrate_reduced(const Surface& surface, const StateField& field,
                         const MaterialParams& params, const QuadratureSpec& spec,
                         int threads) {
    const auto samples = surface_samples(surface.domain(), spec);
    std::vector<double> contributions(samples.size(), 0.0);

    detail::parallel_for(samples.size(), threads, [&](std::size_t i) {
        const SurfaceSample& s = samples[i];
        const GeometryFrame frame = frame_at(surface, s.x1, s.x2);
        const AdmissibilityReport report = admissibility_check(frame, params.h);
        if (!report.ok) {
            throw Inadmissible("integrate_reduced: thickness exceeds curvature bound");
        }
        const ShellPointState state = field(frame);
        const StrainMeasures sm = strain_measures(frame, state, params);
        const EnergyBreakdown density = reduced_density(frame, sm, params);
        contributions[i] = s.weight * density.total * density.area_element;
    });
    return pairwise_sum(std::move(contributions));
}

ConvergenceStudy convergence_study(const Surface& surface, const StateField& field,
                                   MaterialParams params, const std::vector<double>& h_list,
                                   const QuadratureSpec& spec, int threads) {
    ConvergenceStudy study;
    study.h_values = h_list;
    for (double h : h_list) {
        params.h = h;
        const double volume = integrate_volume(surface, field, params, spec, threads);
        const double reduced = integrate_reduced(surface, field, params, spec, threads);
        study.volume.push_back(volume);
        study.reduced.push_back(reduced);
        study.residuals.push_back(std::abs(volume - reduced));
    }
    study.slope = loglog_slope(study.h_values, study.residuals);
    return study;
}

} // namespace cosshell
