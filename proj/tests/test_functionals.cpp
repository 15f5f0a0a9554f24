#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nlbeam/errors.hpp"
#include "nlbeam/functionals.hpp"

using namespace nlbeam;
using std::numbers::pi;

TEST_CASE("energy of a single bending mode") {
    const auto m = build_model(4);
    ModalState s = ModalState::zero(4);
    s.a[0] = 1.0;
    const auto e = energy(m, ZeroSource{}, Forcing::zero(4), s, 0.0);
    CHECK(e.total == doctest::Approx(0.5));
    CHECK(e.bending == doctest::Approx(0.5));
    CHECK(e.kinetic == 0.0);
    CHECK(e.modified == e.total);
    CHECK(total_energy(m, ZeroSource{}, Forcing::zero(4), s.a, s.b) == doctest::Approx(0.5));

    // mode 2 velocity plus membrane part
    const auto mk = build_model(4, 0.5);
    s = ModalState::zero(4);
    s.a[1] = 0.5;
    s.b[1] = 2.0;
    const auto e2 = energy(mk, ZeroSource{}, Forcing::zero(4), s, 0.0);
    CHECK(e2.kinetic == doctest::Approx(2.0));
    CHECK(e2.bending == doctest::Approx(0.5 * 16.0 * 0.25));
    CHECK(e2.membrane == doctest::Approx(0.5 * 0.5 * 4.0 * 0.25));
}

TEST_CASE("energy with source and forcing") {
    const auto m = build_model(4);
    ModalState s = ModalState::zero(4);
    s.a[0] = 1.0;
    Forcing f{0.5, {2.0, 0.0, 0.0, 0.0}};
    const auto e = energy(m, DoublePower{2.0, 1.0, 0.0}, f, s, 3.0);
    // (u^4 / 4, 1) = ||w_1||_4^4 / 4 = 3 / (8 pi)
    CHECK(e.source == doctest::Approx(3.0 / (8.0 * pi)).epsilon(1e-12));
    CHECK(e.work == doctest::Approx(-1.0));
    CHECK(e.total == doctest::Approx(0.5 + 3.0 / (8.0 * pi) - 1.0));
    CHECK(e.modified == doctest::Approx(e.total + 3.0));

    // fine-quadrature oracles; the cubic primitive is a trigonometric polynomial
    // integrated exactly, the |u|^3 part has a kink at the zeros of u
    const Coeffs a{0.4, -0.3, 0.2, 0.1};
    auto fine = [&](const SourceLaw& law) {
        double acc = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double x = pi * (i + 0.5) / n;
            double u = 0.0;
            for (int j = 0; j < 4; ++j) u += a[j] * std::sqrt(2.0 / pi) * std::sin((j + 1) * x);
            acc += f_primitive_eval(law, u);
        }
        return acc * pi / n;
    };
    const auto m64 = build_model(4, pi, 0.0, 64);
    const SourceLaw cub = DoublePower{2.0, 1.0, 0.0}, dp = DoublePower{2.0, 1.0, 2.0};
    CHECK(source_potential(m64, cub, a) == doctest::Approx(fine(cub)).epsilon(1e-9));
    CHECK(source_potential(m64, dp, a) == doctest::Approx(fine(dp)).epsilon(1e-4));
}

TEST_CASE("E_alpha is consistent with the breakdown") {
    const auto m = build_model(5);
    ModalState s{{0.3, 0.1, -0.2, 0.05, 0.0}, {0.2, -0.4, 0.0, 0.1, 0.3}, 0.0};
    const auto e = energy(m, ZeroSource{}, Forcing::zero(5), s, 0.0, 1.0);
    CHECK(e.e_alpha == doctest::Approx(2.0 * e.total).epsilon(1e-14));
    const auto e05 = energy(m, ZeroSource{}, Forcing::zero(5), s, 0.0, 0.5);
    CHECK(e05.e_alpha == doctest::Approx(e_alpha(m, s.a, s.b, 0.5)));
}

TEST_CASE("K_lambda") {
    const auto m = build_model(4);
    AssumptionConstants c;
    c.sigma1 = 1.0;
    CHECK(k_lambda(m, c, Forcing::zero(4)) == 0.0);
    c.C_f = 2.0;
    Forcing f{1.0, {1.0, 1.0, 0.0, 0.0}};
    CHECK(k_lambda(m, c, f) == doctest::Approx(2.0 * pi + 2.0));
    c.c_f = 2.0;
    CHECK_THROWS_AS(k_lambda(m, c, f), AssumptionViolation);
}

TEST_CASE("polynomial envelope constants") {
    const auto m = build_model(8);
    AssumptionConstants c;
    c.sigma1 = 1.0;
    const auto p = envelope_constants(1.0, 1.0, 0.5, m, c, Forcing::zero(8), 1.0);
    CHECK(p.C_alpha == 1.0);
    CHECK(p.C_lower == doctest::Approx(0.125));
    CHECK(p.C_bar == doctest::Approx(161.5));
    CHECK(p.C_upper == doctest::Approx(4.0 * std::pow(std::pow(2.0, 1.5) + 646.0, 2.0)));

    CHECK(decay_envelopes(p, 1.0).lower == doctest::Approx(1.0 / 9.0));
    for (double t : {0.0, 0.25, 0.5, 1.0}) CHECK(decay_envelopes(p, t).upper == doctest::Approx(1.0));
    double prev = 2.0;
    for (double t = 0.0; t < 100.0; t += 0.5) {
        const auto e = decay_envelopes(p, t);
        CHECK(e.lower <= e.upper);
        CHECK(e.upper <= prev);
        prev = e.upper;
    }
    CHECK_THROWS_AS(envelope_constants(0.4, 1.0, 0.5, m, c, Forcing::zero(8), 1.0), InvalidConfiguration);
    CHECK_THROWS_AS(decay_envelopes(p, -1.0), DomainError);
}

TEST_CASE("embedding constant") {
    CHECK(embedding_constant(build_model(8), 0.5) == 1.0);
    // mu_1 / sigma_1 = (2 / pi)^2 < 1 is floored at one
    CHECK(embedding_constant(build_model(8, 2.0, 0.0, 64), 0.5) == 1.0);
    // L = 2 pi: mu_1 = 1/4 and mu_1 / sigma_1 = 4
    CHECK(embedding_constant(build_model(8, 2.0 * pi, 0.0, 64), 0.5) == doctest::Approx(4.0));
    CHECK(embedding_constant(build_model(8, 2.0 * pi, 0.0, 64), 1.0) == 1.0);
}

TEST_CASE("rate fits") {
    SampledSeries p1, p2, e1, e2;
    for (int i = 0; i <= 400; ++i) {
        const double t = 1.0 + i * 0.25;
        p1.t.push_back(t);
        p1.y.push_back(1.0 / t);
        p2.t.push_back(t);
        p2.y.push_back(5.0 / std::sqrt(t));
        e1.t.push_back(t - 1.0);
        e1.y.push_back(std::exp(-2.0 * (t - 1.0)));
        e2.t.push_back(t - 1.0);
        e2.y.push_back(3.0 * std::exp(-0.5 * (t - 1.0)));
    }
    const auto f1 = fit_power_rate(p1, 1.0, 101.0);
    CHECK(f1.slope == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(f1.r2 == doctest::Approx(1.0));
    const auto f2 = fit_power_rate(p2, 2.0, 50.0);
    CHECK(f2.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::exp(f2.intercept) == doctest::Approx(5.0).epsilon(1e-10));

    const auto x1 = fit_exp_rate(e1, 0.0, 10.0);
    CHECK(x1.rate == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(x1.amplitude == doctest::Approx(1.0).epsilon(1e-10));
    const auto x2 = fit_exp_rate(e2, 0.0, 100.0);
    CHECK(x2.rate == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(x2.amplitude == doctest::Approx(3.0).epsilon(1e-10));

    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto l = least_squares_line(x, y);
    CHECK(l.slope == doctest::Approx(2.0));
    CHECK(l.intercept == doctest::Approx(1.0));
}
