#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nlbeam/stationary.hpp"

using namespace nlbeam;
using std::numbers::pi;

TEST_CASE("functional values with closed forms") {
    const auto m = build_model(4);
    const SourceLaw cubic = DoublePower{2.0, 1.0, 0.0};
    CHECK(euler_lagrange_value(m, cubic, Forcing::zero(4), Coeffs(4, 0.0)) == 0.0);
    for (double c : {-1.5, 0.3, 1.0, 2.0}) {
        const Coeffs a{c, 0.0, 0.0, 0.0};
        CHECK(euler_lagrange_value(m, cubic, Forcing::zero(4), a) ==
              doctest::Approx(0.5 * c * c + 3.0 / (8.0 * pi) * std::pow(c, 4)).epsilon(1e-12));
    }
    // linear functional: mode 2, kappa = 1, forcing h = e_2
    const auto mk = build_model(4, 1.0);
    Forcing f{0.5, {0.0, 1.0, 0.0, 0.0}};
    const Coeffs a{0.0, 0.2, 0.0, 0.0};
    CHECK(euler_lagrange_value(mk, ZeroSource{}, f, a) == doctest::Approx(0.5 * 20.0 * 0.04 - 0.1));
}

TEST_CASE("gradient matches finite differences") {
    const auto m = build_model(6, 0.3);
    const SourceLaw src = DoublePower{2.0, 1.0, 3.0};
    Forcing f{0.7, {1.0, 0.0, -0.5, 0.0, 0.2, 0.0}};
    const Coeffs c{0.4, -0.3, 0.2, 0.05, -0.1, 0.02};
    const auto g = el_gradient(m, src, f, c);
    const double eps = 1e-5;
    for (int j = 0; j < 6; ++j) {
        Coeffs p = c, q = c;
        p[j] += eps;
        q[j] -= eps;
        const double fd = (euler_lagrange_value(m, src, f, p) - euler_lagrange_value(m, src, f, q)) / (2 * eps);
        CHECK(std::abs(fd - g[j]) <= 1e-6 * std::max(1.0, std::abs(g[j])));
    }
    // single mode without source: derivative is omega^2 c - lambda h
    const auto g1 = el_gradient(m, ZeroSource{}, f, c);
    CHECK(g1[0] == doctest::Approx(m.omega_sq(0) * 0.4 - 0.7));
}

TEST_CASE("defocusing source has only the trivial equilibrium") {
    const auto m = build_model(8);
    const SourceLaw cubic = DoublePower{2.0, 1.0, 0.0};
    for (double scale : {0.01, 1.0, 100.0}) {
        Coeffs start(8, 0.0);
        for (int j = 0; j < 8; ++j) start[j] = scale / (j + 1);
        const auto r = minimize_functional(m, cubic, Forcing::zero(8), start);
        CHECK(r.converged);
        CHECK(norm2(r.coeffs) <= 1e-7);
        CHECK(std::abs(r.functional_value) <= 1e-12);
        for (std::size_t i = 1; i < r.value_history.size(); ++i)
            CHECK(r.value_history[i] <= r.value_history[i - 1] * (1 + 1e-12) + 1e-15);
    }
}

TEST_CASE("one-mode focusing problem against a brute-force scan") {
    const auto m = build_model(1, pi, 0.0, 4096);
    const SourceLaw src = DoublePower{2.0, 1.0, 10.0};
    const auto F = Forcing::zero(1);
    auto I = [&](double c) {
        const Coeffs a{c};
        return euler_lagrange_value(m, src, F, a);
    };
    double best = 0.0, arg = 0.0;
    for (int i = 0; i <= 40000; ++i) {
        const double c = -20.0 + 40.0 * i / 40000;
        if (I(c) < best) {
            best = I(c);
            arg = c;
        }
    }
    // golden-section refinement of the scan minimum
    double lo = arg - 1e-3, hi = arg + 1e-3;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < 200; ++k) {
        const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        if (I(x1) < I(x2))
            hi = x2;
        else
            lo = x1;
    }
    arg = 0.5 * (lo + hi);
    best = I(arg);
    CHECK(std::abs(arg) == doctest::Approx(14.04).epsilon(2e-3));

    // continuum closed form with ||w_1||_3^3 = (2/pi)^{3/2} 4/3
    const double l3 = std::pow(2.0 / pi, 1.5) * 4.0 / 3.0;
    const double c = std::abs(arg);
    CHECK(best == doctest::Approx(0.5 * c * c + 3.0 / (8.0 * pi) * std::pow(c, 4) - 10.0 * l3 * c * c * c / 3.0)
                      .epsilon(1e-6));

    const Coeffs start{arg > 0 ? 20.0 : -20.0};
    const auto r = minimize_functional(m, src, F, start, 1e-10);
    CHECK(r.converged);
    CHECK(std::abs(r.coeffs[0]) == doctest::Approx(std::abs(arg)).epsilon(1e-6));
    CHECK(r.functional_value == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("focusing source: negative-energy minimizer and several equilibria") {
    const auto m = build_model(16);
    const SourceLaw src = DoublePower{2.0, 1.0, 10.0};
    const auto F = Forcing::zero(16);
    Coeffs far(16, 0.0);
    far[0] = 10.0;
    far[1] = 1.0;
    const auto r = minimize_functional(m, src, F, far);
    CHECK(r.converged);
    CHECK(r.functional_value < 0.0);
    CHECK(r.residual <= 1e-8);

    std::vector<Coeffs> starts{Coeffs(16, 0.0), far};
    starts[0][0] = 1e-3;
    const auto all = multistart(m, src, F, starts);
    REQUIRE(all.size() >= 2);
    CHECK(all.front().functional_value < 0.0);
    CHECK(std::abs(all.back().functional_value) <= 1e-12);
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(all[i - 1].functional_value <= all[i].functional_value);
}

TEST_CASE("stationary bound across forcing strengths") {
    const auto m = build_model(8);
    const SourceLaw cubic = DoublePower{2.0, 1.0, 0.0};
    const auto constants = default_assumption_constants(cubic, m.sigma()[0]);
    Coeffs h(8, 0.0);
    h[0] = 1.0;
    h[2] = -0.5;
    double prev = -1.0;
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        Forcing f{lambda, h};
        const auto r = minimize_functional(m, cubic, f, Coeffs(8, 0.0));
        CHECK(r.converged);
        const auto b = stationary_bound_check(m, constants, f, r);
        CHECK(b.ok);
        CHECK(b.lhs <= b.rhs);
        CHECK(b.lhs >= prev);
        prev = b.lhs;
    }
}

TEST_CASE("bound check falls back when the constants are not admissible") {
    const auto m = build_model(8);
    const SourceLaw src = DoublePower{2.0, 1.0, 10.0};
    const auto constants = default_assumption_constants(src, m.sigma()[0]);
    REQUIRE_FALSE(constants.admissible);
    Coeffs far(8, 0.0);
    far[0] = 10.0;
    const auto r = minimize_functional(m, src, Forcing::zero(8), far);
    const auto b = stationary_bound_check(m, constants, Forcing::zero(8), r);
    CHECK(b.ok);
    CHECK(b.constants_used.find("C_fu") != std::string::npos);
    CHECK(b.rhs == doctest::Approx(constants.C_fu * pi));
}
