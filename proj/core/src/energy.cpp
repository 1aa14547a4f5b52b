#include "cosshell/energy.hpp"

#include <algorithm>
#include <cmath>

namespace cosshell {

namespace {

struct FormWeights {
    double w_sym = 0.0;
    double w_skew = 0.0;
    double w_trace = 0.0;
    bool deviatoric = false;
};

FormWeights weights_for(QuadraticForm form, const MaterialParams& p) {
    switch (form) {
    case QuadraticForm::Micropolar:
        return {p.mu, p.mu_c, 0.5 * p.lambda, false};
    case QuadraticForm::Shell:
        return {p.mu, p.mu_c, p.lambda * p.mu / (p.lambda + 2.0 * p.mu), false};
    case QuadraticForm::Curvature: {
        const double scale = p.mu * p.L_c * p.L_c;
        return {scale * p.b1, scale * p.b2, scale * 4.0 * p.b3, true};
    }
    }
    return {};
}

Mat3 sym_part(const Mat3& x, bool deviatoric) {
    Mat3 s = sym(x);
    if (deviatoric) {
        s -= (x.trace() / 3.0) * Mat3::Identity();
    }
    return s;
}

/// Prefactors of the five energy blocks at thickness h and Gauss
/// curvature K.
struct ThicknessWeights {
    double a0; // h + K h³/12
    double b0; // h - K h³/12
    double a1; // h³/12 - K h⁵/80
    double a2; // h⁵/80
    double h3; // h³
};

ThicknessWeights thickness_weights(const MaterialParams& p, double gauss_curvature) {
    const double h = p.h;
    const double h3 = h * h * h;
    const double h5 = h3 * h * h;
    ThicknessWeights w;
    w.a0 = h + gauss_curvature * h3 / 12.0;
    w.b0 = h - gauss_curvature * h3 / 12.0;
    w.a1 = h3 / 12.0 - gauss_curvature * h5 / 80.0;
    w.a2 = h5 / 80.0;
    w.h3 = h3;
    return w;
}

} // namespace

double evaluate_form(QuadraticForm form, const Mat3& x, const Mat3& y,
                     const MaterialParams& params) {
    const FormWeights w = weights_for(form, params);
    return w.w_sym * inner(sym_part(x, w.deviatoric), sym_part(y, w.deviatoric)) +
           w.w_skew * inner(skw(x), skw(y)) + w.w_trace * x.trace() * y.trace();
}

double evaluate_form(QuadraticForm form, const Mat3& x, const MaterialParams& params) {
    return evaluate_form(form, x, x, params);
}

Mat3 form_stress(QuadraticForm form, const Mat3& x, const MaterialParams& params) {
    const FormWeights w = weights_for(form, params);
    return w.w_sym * sym_part(x, w.deviatoric) + w.w_skew * skw(x) +
           w.w_trace * x.trace() * Mat3::Identity();
}

SeriesCoefficients series_coefficients(const GeometryFrame& frame, const StrainMeasures& sm,
                                       const MaterialParams& params) {
    SeriesCoefficients out;

    const auto p = strain_polynomial(frame, sm);
    auto mp = [&](const Mat3& x, const Mat3& y) {
        return evaluate_form(QuadraticForm::Micropolar, x, y, params);
    };
    out.c_raw[0] = mp(p[0], p[0]);
    out.c_raw[1] = 2.0 * mp(p[0], p[1]);
    out.c_raw[2] = mp(p[1], p[1]) + 2.0 * mp(p[0], p[2]);
    out.c_raw[3] = 2.0 * mp(p[0], p[3]) + 2.0 * mp(p[1], p[2]);
    out.c_raw[4] = mp(p[2], p[2]) + 2.0 * mp(p[1], p[3]);
    out.c_raw[5] = 2.0 * mp(p[2], p[3]);
    out.c_raw[6] = mp(p[3], p[3]);

    auto sh = [&](const Mat3& x, const Mat3& y) {
        return evaluate_form(QuadraticForm::Shell, x, y, params);
    };
    const double two_h = 2.0 * frame.H;
    const Mat3 n = sm.E * frame.B + frame.C * sm.Ke;
    const Mat3 q1 = n - two_h * sm.E;
    const Mat3 cke = frame.C * sm.Ke;
    const Mat3 q2 = cke * frame.B - two_h * cke;
    const double tr_nb = (n * frame.B).trace();
    const double trace_gap = params.lambda * params.lambda / (2.0 * (params.lambda + 2.0 * params.mu));
    out.c_reduced[0] = sh(sm.E, sm.E);
    out.c_reduced[1] = 2.0 * sh(sm.E, q1);
    out.c_reduced[2] = sh(q1, q1) + 2.0 * sh(sm.E, q2);
    out.c_reduced[3] = 2.0 * sh(q1, q2);
    out.c_reduced[4] = sh(q2, q2) + trace_gap * tr_nb * tr_nb;

    auto cv = [&](const Mat3& x, const Mat3& y) {
        return evaluate_form(QuadraticForm::Curvature, x, y, params);
    };
    const Mat3 w1 = sm.Ke * frame.B - two_h * sm.Ke;
    out.d[0] = cv(sm.Ke, sm.Ke);
    out.d[1] = 2.0 * cv(sm.Ke, w1);
    out.d[2] = cv(w1, w1);
    return out;
}

EnergyBreakdown reduced_density(const GeometryFrame& frame, const StrainMeasures& sm,
                                const MaterialParams& params) {
    const ThicknessWeights w = thickness_weights(params, frame.K);
    auto sh = [&](const Mat3& x, const Mat3& y) {
        return evaluate_form(QuadraticForm::Shell, x, y, params);
    };
    auto cv = [&](const Mat3& x) { return evaluate_form(QuadraticForm::Curvature, x, params); };

    const Mat3 n = sm.E * frame.B + frame.C * sm.Ke;
    const Mat3 nb = n * frame.B;
    const Mat3 keb = sm.Ke * frame.B;

    EnergyBreakdown out;
    out.memb = w.a0 * sh(sm.E, sm.E);
    out.memb_bend = w.a1 * sh(n, n) - (w.h3 / 3.0) * frame.H * sh(sm.E, n) +
                    (w.h3 / 6.0) * sh(sm.E, nb) +
                    w.a2 * evaluate_form(QuadraticForm::Micropolar, nb, params);
    out.bend_curv = w.b0 * cv(sm.Ke) + w.a1 * cv(keb) + w.a2 * cv(keb * frame.B);
    out.area_element = frame.det0;
    out.total = out.memb + out.memb_bend + out.bend_curv;
    return out;
}

double reduced_density_raw(const GeometryFrame& frame, const StrainMeasures& sm,
                           const MaterialParams& params) {
    const ThicknessWeights w = thickness_weights(params, frame.K);
    auto sh = [&](const Mat3& x, const Mat3& y) {
        return evaluate_form(QuadraticForm::Shell, x, y, params);
    };
    auto cv = [&](const Mat3& x) { return evaluate_form(QuadraticForm::Curvature, x, params); };

    const Mat3 n = sm.E * frame.B + frame.C * sm.Ke;
    const Mat3 cke = frame.C * sm.Ke;
    const Mat3 coupling = cke * frame.B - 2.0 * frame.H * cke;
    const Mat3 keb = sm.Ke * frame.B;

    double density = w.b0 * sh(sm.E, sm.E) + w.a1 * sh(n, n) +
                     (w.h3 / 12.0) * 2.0 * sh(sm.E, coupling) +
                     w.a2 * evaluate_form(QuadraticForm::Micropolar, n * frame.B, params);
    density += w.b0 * cv(sm.Ke) + w.a1 * cv(keb) + w.a2 * cv(keb * frame.B);
    return density;
}

DensityGradients reduced_density_gradients(const GeometryFrame& frame,
                                           const StrainMeasures& sm, const Mat3& Qe,
                                           const MaterialParams& params) {
    const ThicknessWeights w = thickness_weights(params, frame.K);
    auto s_sh = [&](const Mat3& x) { return form_stress(QuadraticForm::Shell, x, params); };

    const Mat3 bt = frame.B.transpose();
    const Mat3 b2t = bt * bt;
    const Mat3 ct = frame.C.transpose();
    const Mat3 n = sm.E * frame.B + frame.C * sm.Ke;
    const Mat3 nb = n * frame.B;
    const Mat3 keb = sm.Ke * frame.B;

    const Mat3 stress_e = s_sh(sm.E);
    const Mat3 stress_n = s_sh(n);
    const Mat3 stress_nb = s_sh(nb);
    const Mat3 stress_mp_nb = form_stress(QuadraticForm::Micropolar, nb, params);

    DensityGradients out;
    out.dE = 2.0 * w.a0 * stress_e + 2.0 * w.a1 * stress_n * bt -
             (w.h3 / 3.0) * frame.H * (stress_n + stress_e * bt) +
             (w.h3 / 6.0) * (stress_nb + stress_e * b2t) + 2.0 * w.a2 * stress_mp_nb * b2t;

    const Mat3 shell_via_c = 2.0 * w.a1 * stress_n - (w.h3 / 3.0) * frame.H * stress_e +
                             (w.h3 / 6.0) * stress_e * bt + 2.0 * w.a2 * stress_mp_nb * bt;
    auto s_cv = [&](const Mat3& x) { return form_stress(QuadraticForm::Curvature, x, params); };
    out.dKe = ct * shell_via_c + 2.0 * w.b0 * s_cv(sm.Ke) + 2.0 * w.a1 * s_cv(keb) * bt +
              2.0 * w.a2 * s_cv(keb * frame.B) * b2t;

    const Mat3 chain = Qe * out.dE * frame.T0().inverse().transpose();
    out.dGradM = chain.leftCols<2>();
    return out;
}

LoadDensities load_potential(const LoadResultants& res, const Vec3& m, const Vec3& y0,
                             const Mat3& Qe, const Vec3& n0) {
    const Vec3 u = m - y0;
    const Vec3 tilt = (Qe - Mat3::Identity()) * n0;
    LoadDensities out;
    out.area = res.f_bar.dot(u) + res.c_omega.dot(tilt);
    out.edge = res.t_bar.dot(u) + res.c_gamma.dot(tilt);
    return out;
}

double sixparam_density_wp(const StrainMeasures& sm, const GeometryFrame& frame,
                           const MaterialParams& params, const ShearCorrection& corr) {
    const double young = params.mu * (3.0 * params.lambda + 2.0 * params.mu) /
                         (params.lambda + params.mu);
    const double nu = params.lambda / (2.0 * (params.lambda + params.mu));
    const double stretch = young * params.h / (1.0 - nu * nu);
    const double bending = young * params.h * params.h * params.h / (12.0 * (1.0 - nu * nu));

    const Mat3 e_par = frame.A * sm.E;
    const Mat3 k_par = frame.A * sm.Ke;
    const double e_perp = (sm.E.transpose() * frame.n0).squaredNorm();
    const double k_perp = (sm.Ke.transpose() * frame.n0).squaredNorm();

    double twice = stretch * (nu * e_par.trace() * e_par.trace() + (1.0 - nu) * e_par.squaredNorm()) +
                   corr.alpha_s * stretch * (1.0 - nu) * e_perp +
                   bending * (nu * k_par.trace() * k_par.trace() + (1.0 - nu) * k_par.squaredNorm()) +
                   corr.alpha_t * bending * (1.0 - nu) * k_perp;
    return 0.5 * twice;
}

double sixparam_density_ep(const StrainMeasures& sm, const GeometryFrame& frame,
                           const SixParamCoefficients& c) {
    const Mat3 e_par = frame.A * sm.E;
    const Mat3 k_par = frame.A * sm.Ke;
    double twice = (c.alpha2 + c.alpha3) * sym(e_par).squaredNorm() +
                   (c.alpha3 - c.alpha2) * skw(e_par).squaredNorm() +
                   c.alpha1 * e_par.trace() * e_par.trace() +
                   c.alpha4 * (sm.E.transpose() * frame.n0).squaredNorm() +
                   (c.beta2 + c.beta3) * sym(k_par).squaredNorm() +
                   (c.beta3 - c.beta2) * skw(k_par).squaredNorm() +
                   c.beta1 * k_par.trace() * k_par.trace() +
                   c.beta4 * (sm.Ke.transpose() * frame.n0).squaredNorm();
    return 0.5 * twice;
}

SixParamCoefficients identify_coefficients(const MaterialParams& params,
                                           double gauss_curvature) {
    const double h3 = params.h * params.h * params.h;
    const double plus = params.h + gauss_curvature * h3 / 12.0;
    const double minus = params.h - gauss_curvature * h3 / 12.0;
    const double curv = params.mu * params.L_c * params.L_c;

    SixParamCoefficients c;
    c.alpha1 = plus * 2.0 * params.mu * params.lambda / (2.0 * params.mu + params.lambda);
    c.alpha2 = plus * (params.mu - params.mu_c);
    c.alpha3 = plus * (params.mu + params.mu_c);
    c.alpha4 = c.alpha3;
    c.beta1 = 2.0 * minus * curv * (12.0 * params.b3 - params.b1) / 3.0;
    c.beta2 = minus * curv * (params.b1 - params.b2);
    c.beta3 = minus * curv * (params.b1 + params.b2);
    c.beta4 = c.beta3;
    c.mu_c_drill = c.alpha3 - c.alpha2;
    return c;
}

double comparison_density(const StrainMeasures& sm, const MaterialParams& params,
                          double gauss_curvature) {
    const double h3 = params.h * params.h * params.h;
    const double plus = params.h + gauss_curvature * h3 / 12.0;
    const double minus = params.h - gauss_curvature * h3 / 12.0;
    return plus * evaluate_form(QuadraticForm::Shell, sm.E, params) +
           minus * evaluate_form(QuadraticForm::Curvature, sm.Ke, params);
}

double SplitFormReport::max_residual() const {
    return std::max(std::abs(shell_residual), std::abs(curv_residual));
}

SplitFormReport split_form_check(const Mat3& x, const GeometryFrame& frame,
                                 const MaterialParams& params) {
    const Mat3 x_par = frame.A * x;
    const double perp = (x.transpose() * frame.n0).squaredNorm();
    const double tr_par = x_par.trace();

    const double shell_split =
        params.mu * sym(x_par).squaredNorm() + params.mu_c * skw(x_par).squaredNorm() +
        params.lambda * params.mu / (params.lambda + 2.0 * params.mu) * tr_par * tr_par +
        0.5 * (params.mu + params.mu_c) * perp;

    const double curv_scale = params.mu * params.L_c * params.L_c;
    const double curv_split =
        curv_scale * (params.b1 * sym(x_par).squaredNorm() +
                      params.b2 * skw(x_par).squaredNorm() +
                      (12.0 * params.b3 - params.b1) / 3.0 * tr_par * tr_par +
                      0.5 * (params.b1 + params.b2) * perp);

    SplitFormReport report;
    report.shell_residual = evaluate_form(QuadraticForm::Shell, x, params) - shell_split;
    report.curv_residual = evaluate_form(QuadraticForm::Curvature, x, params) - curv_split;
    return report;
}

} // namespace cosshell
