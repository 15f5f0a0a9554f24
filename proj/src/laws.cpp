#include "nlbeam/laws.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlbeam/errors.hpp"

namespace nlbeam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double gamma_of(const DampingLaw& law) {
    return std::visit([](const auto& l) { return l.gamma; }, law);
}

}  // namespace

void validate(const DampingLaw& law) {
    const double g = gamma_of(law);
    if (!(g > 0.0) || !std::isfinite(g)) throw InvalidConfiguration("damping gamma must be > 0");
    if (const auto* k1 = std::get_if<K1Monomial>(&law)) {
        if (!(k1->q >= 0.5) || !std::isfinite(k1->q))
            throw InvalidConfiguration("k1 exponent violates q >= 1/2 (got " + std::to_string(k1->q) +
                                       ")");
    }
}

double k_eval(const DampingLaw& law, double s) {
    if (!(s >= 0.0)) throw DomainError("damping argument must be >= 0");
    return std::visit(
        overloaded{
            [s](const K1Monomial& l) {
                if (s == 0.0) return 0.0;
                return l.q == 1.0 ? l.gamma * s : l.gamma * std::pow(s, l.q);
            },
            [s](const K2Positive& l) {
                switch (l.kind) {
                    case K2Positive::Kind::Constant: return l.gamma;
                    case K2Positive::Kind::ExpDecay: return l.gamma * std::exp(-s);
                    case K2Positive::Kind::Rational: return l.gamma / (1.0 + s);
                }
                return l.gamma;
            },
            [s](const K3Threshold& l) {
                if (s <= 1.0) return 0.0;
                switch (l.kind) {
                    case K3Threshold::Kind::Rational: return l.gamma * (1.0 - 1.0 / s);
                    case K3Threshold::Kind::ShiftedExp: return -l.gamma * std::expm1(-(s - 1.0));
                }
                return 0.0;
            },
        },
        law);
}

std::string describe(const DampingLaw& law) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const K1Monomial& l) { os << "k1 gamma=" << l.gamma << " q=" << l.q; },
                   [&](const K2Positive& l) {
                       const char* kind = l.kind == K2Positive::Kind::Constant   ? "constant"
                                          : l.kind == K2Positive::Kind::ExpDecay ? "exp_decay"
                                                                                 : "rational";
                       os << "k2_" << kind << " gamma=" << l.gamma;
                   },
                   [&](const K3Threshold& l) {
                       os << (l.kind == K3Threshold::Kind::Rational ? "k3_rational" : "k3_shifted_exp")
                          << " gamma=" << l.gamma;
                   },
               },
               law);
    return os.str();
}

bool is_constant(const DampingLaw& law) {
    const auto* k2 = std::get_if<K2Positive>(&law);
    return k2 != nullptr && k2->kind == K2Positive::Kind::Constant;
}

DampingCheck check_damping_properties(const DampingLaw& law, double s_max, int samples) {
    DampingCheck out;
    auto fail = [&](const std::string& msg, double s) {
        if (!out.ok) return;
        out.ok = false;
        std::ostringstream os;
        os << msg << " at s = " << s;
        out.message = os.str();
    };
    const double ds = s_max / samples;
    const double g = gamma_of(law);

    if (std::holds_alternative<K1Monomial>(law)) {
        if (k_eval(law, 0.0) != 0.0) fail("k1 does not vanish at the origin", 0.0);
        for (int i = 1; i <= samples; ++i) {
            const double s = i * ds;
            if (k_eval(law, s) < k_eval(law, s - ds)) fail("k1 not monotone", s);
        }
    } else if (std::holds_alternative<K2Positive>(law)) {
        double prev_slope = (k_eval(law, ds) - k_eval(law, 0.0)) / ds;
        for (int i = 0; i <= samples; ++i) {
            const double s = i * ds;
            if (!(k_eval(law, s) > 0.0)) fail("k2 not strictly positive", s);
            const double slope = (k_eval(law, s + ds) - k_eval(law, s)) / ds;
            // C^1 on the grid: the difference quotient itself changes by O(ds)
            if (!std::isfinite(slope) || std::abs(slope - prev_slope) > 10.0 * g * ds + 1e-12)
                fail("k2 derivative jumps", s);
            prev_slope = slope;
        }
    } else {
        for (int i = 0; i <= samples; ++i) {
            const double s = i * ds;
            const double k = k_eval(law, s);
            if (s <= 1.0 && k != 0.0) fail("k3 does not vanish on [0, 1]", s);
            if (k > g) fail("k3 exceeds its bound gamma", s);
            if (i > 0) {
                const double prev = k_eval(law, s - ds);
                if (s - ds >= 1.0 && !(k > prev)) fail("k3 not strictly increasing beyond 1", s);
                if (std::abs(k - prev) / ds > g * (1.0 + 1e-6)) fail("k3 Lipschitz quotient exceeds gamma", s);
            }
        }
    }
    return out;
}

void validate(const SourceLaw& law) {
    if (const auto* dp = std::get_if<DoublePower>(&law)) {
        if (!(dp->r > 0.0) || !(dp->r < dp->delta))
            throw InvalidConfiguration("double-power source requires 0 < r < delta");
        if (!(dp->sigma >= 0.0)) throw InvalidConfiguration("double-power source requires sigma >= 0");
    }
}

std::string describe(const SourceLaw& law) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const ZeroSource&) { os << "zero"; },
                   [&](const DoublePower& l) {
                       os << "double_power delta=" << l.delta << " r=" << l.r << " sigma=" << l.sigma;
                   },
               },
               law);
    return os.str();
}

namespace {

// |s|^e with the integer exponents used in practice evaluated by multiplication
inline double abs_pow(double s, double e) {
    const double x = std::abs(s);
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 3.0) return x * x * x;
    if (e == 4.0) return (x * x) * (x * x);
    return std::pow(x, e);
}

}  // namespace

double f_eval(const SourceLaw& law, double s) {
    const auto* dp = std::get_if<DoublePower>(&law);
    if (dp == nullptr) return 0.0;
    double v = abs_pow(s, dp->delta) * s;
    if (dp->sigma != 0.0) v -= dp->sigma * abs_pow(s, dp->r) * s;
    return v;
}

double f_prime_eval(const SourceLaw& law, double s) {
    const auto* dp = std::get_if<DoublePower>(&law);
    if (dp == nullptr) return 0.0;
    return (dp->delta + 1.0) * abs_pow(s, dp->delta) - dp->sigma * (dp->r + 1.0) * abs_pow(s, dp->r);
}

double f_primitive_eval(const SourceLaw& law, double s) {
    const auto* dp = std::get_if<DoublePower>(&law);
    if (dp == nullptr) return 0.0;
    return abs_pow(s, dp->delta + 2.0) / (dp->delta + 2.0) -
           dp->sigma * abs_pow(s, dp->r + 2.0) / (dp->r + 2.0);
}

double growth_exponent(const SourceLaw& law) {
    const auto* dp = std::get_if<DoublePower>(&law);
    return dp == nullptr ? 0.0 : dp->delta;
}

bool is_zero(const SourceLaw& law) { return std::holds_alternative<ZeroSource>(law); }

void project_source_into(const SpectralModel& model, const SourceLaw& law, std::span<const double> a,
                         std::span<double> grid, std::span<double> out) {
    if (is_zero(law)) {
        if (out.size() != static_cast<std::size_t>(model.n_modes()))
            throw LengthMismatch("project_source output", model.n_modes(), out.size());
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    synthesize_into(model, a, grid);
    for (double& v : grid) v = f_eval(law, v);
    analyze_into(model, grid, out);
}

Coeffs project_source(const SpectralModel& model, const SourceLaw& law, std::span<const double> a) {
    std::vector<double> grid(model.quad_points());
    Coeffs out(model.n_modes());
    project_source_into(model, law, a, grid, out);
    return out;
}

double source_potential(const SpectralModel& model, const SourceLaw& law, std::span<const double> a) {
    if (is_zero(law)) return 0.0;
    std::vector<double> grid(model.quad_points());
    synthesize_into(model, a, grid);
    double acc = 0.0;
    for (double v : grid) acc += f_primitive_eval(law, v);
    return acc * model.quad_weight();
}

double AssumptionConstants::omega() const {
    if (!sigma1) throw AssumptionViolation("omega requires sigma_1");
    const double w = 1.0 - c_f / *sigma1;
    if (!(w > 0.0)) {
        std::ostringstream os;
        os << "c_f = " << c_f << " >= sigma_1 = " << *sigma1 << " (omega = " << w << " <= 0)";
        throw AssumptionViolation(os.str());
    }
    return w;
}

AssumptionConstants assumption_constants(const SourceLaw& law, double range, int samples,
                                         std::optional<double> sigma1) {
    if (!(range > 0.0)) throw DomainError("sample range must be > 0");
    if (samples < 2) throw DomainError("at least two samples required");
    AssumptionConstants c;
    c.sigma1 = sigma1;
    if (!is_zero(law)) {
        const double p = growth_exponent(law);
        double cf_half = 0.0;
        for (int i = 0; i <= samples; ++i) {
            const double u = -range + 2.0 * range * i / samples;
            const double f = f_eval(law, u);
            const double fh = f_primitive_eval(law, u);
            c.C_f_prime = std::max(c.C_f_prime, std::abs(f_prime_eval(law, u)) / (1.0 + std::pow(std::abs(u), p)));
            c.C_f = std::max(c.C_f, -fh);
            c.C_fu = std::max(c.C_fu, -f * u);
            if (u != 0.0) {
                const double need = (fh - f * u) / (u * u);
                if (need > cf_half) {
                    cf_half = need;
                    c.c_f_argmax = u;
                }
            }
        }
        c.c_f = 2.0 * cf_half;
    }
    if (sigma1 && !(c.c_f < *sigma1)) {
        c.admissible = false;
        std::ostringstream os;
        os << "upper inequality f_hat(u) <= f(u)u + (c_f/2)u^2 needs c_f = " << c.c_f
           << " >= sigma_1 = " << *sigma1 << " (attained at u = " << c.c_f_argmax << ")";
        c.violation = os.str();
    }
    return c;
}

AssumptionConstants default_assumption_constants(const SourceLaw& law, double sigma1) {
    double range = 10.0;
    if (const auto* dp = std::get_if<DoublePower>(&law); dp && dp->sigma > 0.0) {
        // every extremum of the constants sits below a multiple of sigma^{1/(delta - r)}
        range = std::max(range, 4.0 * std::pow(dp->sigma, 1.0 / (dp->delta - dp->r)) *
                                    std::max(1.0, (dp->r + 2.0) / (dp->delta + 2.0) * 2.0));
    }
    return assumption_constants(law, range, 200000, sigma1);
}

Coeffs Forcing::h_lambda() const {
    Coeffs out = h;
    for (double& v : out) v *= lambda;
    return out;
}

double Forcing::h_lambda_norm_sq() const {
    double s = 0.0;
    for (double v : h) s += v * v;
    return lambda * lambda * s;
}

bool Forcing::vanishes() const {
    return lambda == 0.0 || std::all_of(h.begin(), h.end(), [](double v) { return v == 0.0; });
}

void validate(const Forcing& forcing, int n_modes) {
    if (!(forcing.lambda >= 0.0 && forcing.lambda <= 1.0))
        throw InvalidConfiguration("lambda must lie in [0, 1]");
    if (forcing.h.size() != static_cast<std::size_t>(n_modes))
        throw LengthMismatch("forcing h", n_modes, forcing.h.size());
}

}  // namespace nlbeam
