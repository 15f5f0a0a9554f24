#pragma once

// Constitutive closures: the nonlocal damping coefficient k(.), the source f(.)
// with its primitive, and the external force lambda * h.

#include <optional>
#include <string>
#include <variant>

#include "nlbeam/spectral.hpp"

namespace nlbeam {

/// k(s) = gamma s^q, q >= 1/2. Degenerate at the origin.
struct K1Monomial {
    double gamma = 1.0;
    double q = 1.0;

    bool operator==(const K1Monomial&) const = default;
};

/// Strictly positive C^1 coefficients.
struct K2Positive {
    enum class Kind { Constant, ExpDecay, Rational };
    Kind kind = Kind::Constant;
    double gamma = 1.0;

    bool operator==(const K2Positive&) const = default;
};

/// Bounded, Lipschitz, identically zero on [0, 1], strictly increasing beyond.
///   Rational:   gamma (1 - 1/s)
///   ShiftedExp: gamma (1 - exp(-(s - 1)))
struct K3Threshold {
    enum class Kind { Rational, ShiftedExp };
    Kind kind = Kind::Rational;
    double gamma = 1.0;

    bool operator==(const K3Threshold&) const = default;
};

using DampingLaw = std::variant<K1Monomial, K2Positive, K3Threshold>;

/// Throws InvalidConfiguration when gamma <= 0 or (K1) q < 1/2.
void validate(const DampingLaw& law);

/// Throws DomainError for s < 0.
double k_eval(const DampingLaw& law, double s);

std::string describe(const DampingLaw& law);

/// True when k is a positive constant (needed by the semigroup splitting experiment).
bool is_constant(const DampingLaw& law);

struct DampingCheck {
    bool ok = true;
    std::string message;
};

/// Sampled verification of the qualitative hypotheses of each family on [0, s_max]:
/// K1 vanishes at 0 and is monotone, K2 is positive with bounded difference
/// quotients of its derivative, K3 vanishes on [0, 1], increases beyond, stays
/// below gamma and has bounded difference quotients.
DampingCheck check_damping_properties(const DampingLaw& law, double s_max = 20.0,
                                      int samples = 20000);

struct ZeroSource {
    bool operator==(const ZeroSource&) const = default;
};

/// f(s) = |s|^delta s - sigma |s|^r s with 0 < r < delta; growth exponent p = delta.
struct DoublePower {
    double delta = 2.0;
    double r = 1.0;
    double sigma = 0.0;

    bool operator==(const DoublePower&) const = default;
};

using SourceLaw = std::variant<ZeroSource, DoublePower>;

void validate(const SourceLaw& law);
std::string describe(const SourceLaw& law);

double f_eval(const SourceLaw& law, double s);
double f_prime_eval(const SourceLaw& law, double s);
/// Closed-form primitive, f_primitive_eval(law, 0) = 0.
double f_primitive_eval(const SourceLaw& law, double s);

/// Growth exponent p (delta for DoublePower, 0 for the zero source).
double growth_exponent(const SourceLaw& law);

bool is_zero(const SourceLaw& law);

/// g_j = quad_weight sum_m f(u(x_m)) w_j(x_m) with u = synthesize(a).
Coeffs project_source(const SpectralModel& model, const SourceLaw& law, std::span<const double> a);

/// Scratch-buffer variant; `grid` must have quad_points entries.
void project_source_into(const SpectralModel& model, const SourceLaw& law, std::span<const double> a,
                         std::span<double> grid, std::span<double> out);

/// Quadrature value of (f_hat(u), 1).
double source_potential(const SpectralModel& model, const SourceLaw& law, std::span<const double> a);

/// Sampled constants of the source hypotheses
///   |f'(u)| <= C_f' (1 + |u|^p),
///   -C_f - (c_f/2)|u|^2 <= f_hat(u) <= f(u) u + (c_f/2)|u|^2.
/// c_f is the smallest value satisfying the right inequality; C_f is the smallest
/// value satisfying the left one without borrowing from the quadratic term, so
/// the pair stays valid for every c_f >= 0. C_fu = sup(-f(u) u) is the constant
/// of the multiplier bound -f(u) u <= C_fu used when c_f is not admissible.
struct AssumptionConstants {
    double C_f_prime = 0.0;
    double c_f = 0.0;
    double C_f = 0.0;
    double C_fu = 0.0;
    double c_f_argmax = 0.0;  // sample location attaining c_f
    std::optional<double> sigma1;
    bool admissible = true;   // c_f < sigma_1 (only decided when sigma1 is known)
    std::string violation;    // empty when admissible

    /// omega = 1 - c_f / sigma_1; throws AssumptionViolation when omega <= 0.
    double omega() const;
};

AssumptionConstants assumption_constants(const SourceLaw& law, double range, int samples,
                                         std::optional<double> sigma1 = std::nullopt);

/// Range and sample count wide enough to contain every extremum of the DoublePower family.
AssumptionConstants default_assumption_constants(const SourceLaw& law, double sigma1);

/// lambda h; lambda in [0, 1].
struct Forcing {
    double lambda = 0.0;
    Coeffs h;

    static Forcing zero(int n) { return {0.0, Coeffs(n, 0.0)}; }
    Coeffs h_lambda() const;
    double h_lambda_norm_sq() const;
    bool vanishes() const;
};

void validate(const Forcing& forcing, int n_modes);

}  // namespace nlbeam
