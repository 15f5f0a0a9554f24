#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "nlbeam/errors.hpp"
#include "nlbeam/inequalities.hpp"

using namespace nlbeam;

namespace {

NakaoProblem on_grid(int units, int spu, double C0, double rho, double (*phi)(double), double (*K)(double)) {
    NakaoProblem p;
    p.C0 = C0;
    p.rho = rho;
    for (int i = 0; i <= units * spu; ++i) {
        const double t = static_cast<double>(i) / spu;
        p.phi.t.push_back(t);
        p.phi.y.push_back(phi(t));
        p.K.t.push_back(t);
        p.K.y.push_back(K(t));
    }
    return p;
}

double halving(double t) { return std::pow(2.0, -std::floor(t + 1e-12)); }
double zero(double) { return 0.0; }
double one(double) { return 1.0; }

}  // namespace

TEST_CASE("geometric sequence against the Nakao hypothesis") {
    // sup over [t, t+1] is phi(t), the unit drop is phi(t) / 2
    auto p = on_grid(10, 1, 1.0, 0.0, halving, zero);
    CHECK(nakao_hypothesis_residual(p) == doctest::Approx(0.5));
    CHECK_FALSE(nakao_verify(p).hypothesis_ok);

    p.C0 = 2.0;
    CHECK(nakao_hypothesis_residual(p) == doctest::Approx(0.0).epsilon(1e-15));
    const auto v = nakao_verify(p);
    CHECK(v.hypothesis_ok);
    CHECK(v.conclusion_ok);
    CHECK(v.worst_conclusion_margin <= 0.0);

    // finer grid, same function
    auto q = on_grid(10, 4, 2.0, 0.0, halving, zero);
    CHECK(nakao_verify(q).conclusion_ok);
}

TEST_CASE("trivial and constant phi") {
    const auto z = on_grid(5, 2, 1.0, 1.0, zero, zero);
    const auto vz = nakao_verify(z);
    CHECK(vz.hypothesis_ok);
    CHECK(vz.conclusion_ok);
    CHECK(vz.degenerate_sup);
    CHECK(nakao_bound(z, 3.0) == 0.0);

    // constant phi = 1 needs K >= 1 = c^{1+rho}
    auto c = on_grid(6, 1, 1.0, 1.0, one, one);
    CHECK(nakao_verify(c).hypothesis_ok);
    CHECK(nakao_verify(c).conclusion_ok);
    auto c0 = on_grid(6, 1, 1.0, 1.0, one, zero);
    CHECK_FALSE(nakao_verify(c0).hypothesis_ok);
}

TEST_CASE("closed-form bounds") {
    // rho = 0: sup * (C0 / (1 + C0))^[t] + K
    auto p = on_grid(10, 1, 1.0, 0.0, one, zero);
    CHECK(nakao_bound(p, 3.0) == doctest::Approx(0.125));
    CHECK(nakao_bound(p, 0.5) == doctest::Approx(1.0));
    // rho = 1, C0 = 8: (t - 1) / 8 + 1 at t = 9
    auto r = on_grid(10, 1, 8.0, 1.0, one, zero);
    CHECK(nakao_bound(r, 9.0) == doctest::Approx(0.5));
    CHECK(nakao_bound(r, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(nakao_bound(r, -1.0), DomainError);
}

TEST_CASE("bounds decrease in time and increase with C0") {
    auto p = on_grid(10, 2, 3.0, 0.5, one, zero);
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 0.0; t <= 10.0; t += 0.25) {
        const double b = nakao_bound(p, t);
        CHECK(b <= prev);
        prev = b;
    }
    auto q = p;
    q.C0 = 6.0;
    CHECK(nakao_bound(q, 5.0) > nakao_bound(p, 5.0));
    // rho = 0: ratio of successive unit bounds is C0 / (1 + C0)
    auto g = on_grid(10, 1, 3.0, 0.0, one, zero);
    CHECK(nakao_bound(g, 4.0) / nakao_bound(g, 3.0) == doctest::Approx(0.75));
}

TEST_CASE("grid requirements") {
    auto p = on_grid(4, 3, 1.0, 0.0, one, zero);
    CHECK(steps_per_unit(p) == 3);
    p.phi.t[2] += 0.01;
    p.K.t = p.phi.t;
    CHECK_THROWS_AS(steps_per_unit(p), DomainError);

    NakaoProblem odd;
    for (int i = 0; i < 10; ++i) {
        odd.phi.t.push_back(0.3 * i);
        odd.phi.y.push_back(1.0);
    }
    odd.K = odd.phi;
    CHECK_THROWS_AS(steps_per_unit(odd), DomainError);
}

TEST_CASE("random problems satisfy the hypothesis and the conclusion") {
    std::mt19937_64 rng(42);
    for (double rho : {0.0, 0.5, 2.0}) {
        for (int i = 0; i < 200; ++i) {
            const auto p = random_nakao_problem(rng, rho);
            const auto v = nakao_verify(p);
            REQUIRE(v.hypothesis_ok);
            CHECK(v.conclusion_ok);
            // minimality of C0: a slightly smaller constant breaks the hypothesis
            auto smaller = p;
            smaller.C0 *= 0.99;
            if (p.C0 != 1.0) CHECK(nakao_hypothesis_residual(smaller) > 0.0);
        }
    }
    const auto s = run_nakao_suite(7, 300, 1.0);
    CHECK(s.trials == 300);
    CHECK(s.violations == 0);
    CHECK(s.skipped == 0);
}

TEST_CASE("power-difference bound") {
    const std::vector<double> u{3.0}, v{1.0};
    const auto r = haraux_check(u, v, 2.0);
    CHECK(r.lhs == doctest::Approx(8.0));
    CHECK(r.rhs == doctest::Approx(12.0));
    CHECK(r.ok);

    const std::vector<double> a{1.0, 2.0}, b{2.0, 4.0};
    const auto eq = haraux_check(a, b, 1.0);
    CHECK(eq.lhs == doctest::Approx(eq.rhs));
    CHECK(eq.ok);

    const auto same = haraux_check(a, a, 3.5);
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs == 0.0);
    CHECK(same.ok);

    CHECK_THROWS_AS(haraux_check(u, v, 0.5), DomainError);
    CHECK_THROWS_AS(haraux_check(u, a, 2.0), LengthMismatch);

    const auto s = run_haraux_suite(3, 20000);
    CHECK(s.trials == 20000);
    CHECK(s.violations == 0);
}
