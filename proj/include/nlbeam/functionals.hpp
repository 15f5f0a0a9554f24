#pragma once

#include <utility>
#include <vector>

#include "nlbeam/laws.hpp"
#include "nlbeam/spectral.hpp"

namespace nlbeam {

struct EnergyBreakdown {
    double kinetic = 0.0;   // 1/2 ||u_t||^2
    double bending = 0.0;   // 1/2 ||A1^{1/2} u||^2
    double membrane = 0.0;  // kappa/2 ||A^{1/2} u||^2
    double source = 0.0;    // (f_hat(u), 1)
    double work = 0.0;      // -(h_lambda, u)
    double total = 0.0;     // E
    double K_lambda = 0.0;
    double modified = 0.0;  // E + K_lambda
    double e_alpha = 0.0;   // ||A^alpha u||^2 + ||u_t||^2
};

/// K_lambda = C_f |Omega| + ||h_lambda||^2 / (sigma_1 omega).
/// Throws AssumptionViolation when omega <= 0.
double k_lambda(const SpectralModel& model, const AssumptionConstants& constants, const Forcing& forcing);

EnergyBreakdown energy(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                       const ModalState& state, double K_lambda, double alpha = 0.5);

/// Total energy E only; the integrator's hot path.
double total_energy(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                    std::span<const double> a, std::span<const double> b);

/// Closed-form constants of the two-sided polynomial envelope for k(s) = gamma s^q.
struct EnvelopeParams {
    double q = 1.0;
    double gamma = 1.0;
    double omega = 1.0;
    double sigma1 = 1.0;
    double K_lambda = 0.0;
    double C_alpha = 1.0;
    double C_lower = 0.0;  // omega^q / (2^{2q+1} C_alpha^q gamma)
    double C_bar = 0.0;
    double C_upper = 0.0;
    double E0 = 0.0;       // modified energy at t = 0
};

/// max(1, max_j mu_j^{2 alpha} / sigma_j) on the truncated space.
double embedding_constant(const SpectralModel& model, double alpha);

/// Throws InvalidConfiguration for q < 1/2 or gamma <= 0, AssumptionViolation for c_f >= sigma_1.
EnvelopeParams envelope_constants(double q, double gamma, double alpha, const SpectralModel& model,
                                  const AssumptionConstants& constants, const Forcing& forcing, double E0);

struct Envelope {
    double lower = 0.0;
    double upper = 0.0;
};

Envelope decay_envelopes(const EnvelopeParams& params, double t);

struct SampledSeries {
    std::vector<double> t;
    std::vector<double> y;
};

struct PowerFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct ExpFit {
    double rate = 0.0;
    double amplitude = 0.0;
    double r2 = 0.0;
};

/// Least squares on (ln t, ln y) restricted to t in [t_a, t_b].
PowerFit fit_power_rate(const SampledSeries& series, double t_a, double t_b);

/// Least squares on (t, ln y); y ~ amplitude * exp(-rate t).
ExpFit fit_exp_rate(const SampledSeries& series, double t_a, double t_b);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace nlbeam
