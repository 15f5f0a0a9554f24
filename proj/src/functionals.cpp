#include "nlbeam/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "nlbeam/errors.hpp"

namespace nlbeam {

double k_lambda(const SpectralModel& model, const AssumptionConstants& constants, const Forcing& forcing) {
    const double omega = constants.omega();
    const double sigma1 = model.sigma()[0];
    return constants.C_f * model.length() + forcing.h_lambda_norm_sq() / (sigma1 * omega);
}

double total_energy(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                    std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    double quad = 0.0;
    double work = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        quad += model.omega_sq(j) * a[j] * a[j] + b[j] * b[j];
        if (forcing.lambda != 0.0) work += forcing.h[j] * a[j];
    }
    return 0.5 * quad + source_potential(model, source, a) - forcing.lambda * work;
}

EnergyBreakdown energy(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                       const ModalState& state, double K_lambda, double alpha) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    if (state.a.size() != n) throw LengthMismatch("energy (a)", n, state.a.size());
    if (state.b.size() != n) throw LengthMismatch("energy (b)", n, state.b.size());
    EnergyBreakdown e;
    for (std::size_t j = 0; j < n; ++j) {
        e.kinetic += state.b[j] * state.b[j];
        e.bending += model.sigma()[j] * state.a[j] * state.a[j];
        e.membrane += model.mu()[j] * state.a[j] * state.a[j];
        if (!forcing.h.empty()) e.work -= forcing.lambda * forcing.h[j] * state.a[j];
    }
    e.kinetic *= 0.5;
    e.bending *= 0.5;
    e.membrane *= 0.5 * model.kappa();
    e.source = source_potential(model, source, state.a);
    e.total = e.kinetic + e.bending + e.membrane + e.source + e.work;
    e.K_lambda = K_lambda;
    e.modified = e.total + K_lambda;
    e.e_alpha = nlbeam::e_alpha(model, state.a, state.b, alpha);
    return e;
}

double embedding_constant(const SpectralModel& model, double alpha) {
    double c = 1.0;
    for (int j = 0; j < model.n_modes(); ++j)
        c = std::max(c, std::pow(model.mu()[j], 2.0 * alpha) / model.sigma()[j]);
    return c;
}

EnvelopeParams envelope_constants(double q, double gamma, double alpha, const SpectralModel& model,
                                  const AssumptionConstants& constants, const Forcing& forcing, double E0) {
    if (!(q >= 0.5)) throw InvalidConfiguration("envelope requires q >= 1/2");
    if (!(gamma > 0.0)) throw InvalidConfiguration("envelope requires gamma > 0");
    if (!(E0 > 0.0)) throw InvalidConfiguration("envelope requires a positive initial modified energy");

    EnvelopeParams p;
    p.q = q;
    p.gamma = gamma;
    p.omega = constants.omega();
    p.sigma1 = model.sigma()[0];
    p.K_lambda = k_lambda(model, constants, forcing);
    p.C_alpha = embedding_constant(model, alpha);
    p.E0 = E0;

    const double w = p.omega;
    const double s1 = p.sigma1;
    const double Ca = p.C_alpha;
    const double g_root = std::pow(gamma, 1.0 / (q + 1.0));

    p.C_lower = std::pow(w, q) / (std::pow(2.0, 2.0 * q + 1.0) * std::pow(Ca, q) * gamma);
    p.C_bar = 3.0 / (2.0 * g_root) + 128.0 / (w * s1 * g_root) +
              std::pow(2.0, 2.0 * q + 3.0) * std::pow(gamma, (2.0 * q + 1.0) / (q + 1.0)) *
                  std::pow(Ca, 2.0 * q) / (std::pow(w, 2.0 * q + 1.0) * s1) * std::pow(E0, 2.0 * q);
    p.C_upper = std::pow(2.0, q + 1.0) *
                std::pow(std::pow(2.0, (2.0 * q + 1.0) / (q + 1.0)) * std::pow(E0, q / (q + 1.0)) +
                             4.0 * p.C_bar,
                         q + 1.0);
    return p;
}

Envelope decay_envelopes(const EnvelopeParams& p, double t) {
    if (!(t >= 0.0)) throw DomainError("envelope time must be >= 0");
    const double base = std::pow(p.E0, -p.q);
    const double t_shift = std::max(t - 1.0, 0.0);
    Envelope e;
    e.lower = std::pow(p.q * t / p.C_lower + base, -1.0 / p.q);
    e.upper = std::pow(p.q * t_shift / p.C_upper + base, -1.0 / p.q) + 8.0 * p.K_lambda;
    return e;
}

LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw LengthMismatch("least_squares_line", x.size(), y.size());
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) throw DomainError("line fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DomainError("line fit needs distinct abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return f;
}

namespace {

void window(const SampledSeries& s, double t_a, double t_b, bool log_t, std::vector<double>& x,
            std::vector<double>& y) {
    if (s.t.size() != s.y.size()) throw LengthMismatch("series", s.t.size(), s.y.size());
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] < t_a || s.t[i] > t_b) continue;
        if (!(s.y[i] > 0.0)) throw DomainError("non-positive value in fitting window");
        if (log_t && !(s.t[i] > 0.0)) throw DomainError("power fit window must exclude t <= 0");
        x.push_back(log_t ? std::log(s.t[i]) : s.t[i]);
        y.push_back(std::log(s.y[i]));
    }
    if (x.size() < 10) throw DomainError("fewer than 10 points in fitting window");
}

}  // namespace

PowerFit fit_power_rate(const SampledSeries& series, double t_a, double t_b) {
    std::vector<double> x, y;
    window(series, t_a, t_b, true, x, y);
    const auto l = least_squares_line(x, y);
    return {l.slope, l.intercept, l.r2};
}

ExpFit fit_exp_rate(const SampledSeries& series, double t_a, double t_b) {
    std::vector<double> x, y;
    window(series, t_a, t_b, false, x, y);
    const auto l = least_squares_line(x, y);
    return {-l.slope, std::exp(l.intercept), l.r2};
}

}  // namespace nlbeam
