#include "nlbeam/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlbeam/errors.hpp"

namespace nlbeam {

int steps_per_unit(const NakaoProblem& p) {
    const auto& t = p.phi.t;
    if (t.size() < 2 || p.phi.y.size() != t.size())
        throw DomainError("Nakao problem needs at least two samples of phi");
    if (p.K.t.size() != t.size() || p.K.y.size() != t.size())
        throw LengthMismatch("Nakao K series", t.size(), p.K.t.size());
    const double h = t[1] - t[0];
    if (!(h > 0.0)) throw DomainError("Nakao grid must be increasing");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, h))
            throw DomainError("Nakao grid must be uniform");
    const double per_unit = 1.0 / h;
    const long spu = std::lround(per_unit);
    if (spu < 1 || std::abs(per_unit - static_cast<double>(spu)) > 1e-9 * per_unit)
        throw DomainError("Nakao grid spacing must divide 1");
    if (t.size() <= static_cast<std::size_t>(spu)) throw DomainError("Nakao grid shorter than one time unit");
    return static_cast<int>(spu);
}

double nakao_hypothesis_residual(const NakaoProblem& p) {
    const int spu = steps_per_unit(p);
    const auto& phi = p.phi.y;
    const auto& K = p.K.y;
    const double e = 1.0 + p.rho;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + spu < phi.size(); ++i) {
        double sup = 0.0;
        for (std::size_t k = i; k <= i + spu; ++k) sup = std::max(sup, std::pow(phi[k], e));
        const double rhs = p.C0 * (phi[i] - phi[i + spu]) + K[i];
        worst = std::max(worst, sup - rhs);
    }
    return worst;
}

namespace {

double sup_first_unit(const NakaoProblem& p, int spu) {
    double s = 0.0;
    for (int k = 0; k <= spu; ++k) s = std::max(s, p.phi.y[k]);
    return s;
}

double interpolate(const SampledSeries& s, double t) {
    if (t <= s.t.front()) return s.y.front();
    if (t >= s.t.back()) return s.y.back();
    const auto it = std::upper_bound(s.t.begin(), s.t.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - s.t.begin());
    const double w = (t - s.t[i - 1]) / (s.t[i] - s.t[i - 1]);
    return (1.0 - w) * s.y[i - 1] + w * s.y[i];
}

double bound_with(const NakaoProblem& p, double sup01, double t, long whole_units, double K) {
    if (p.rho > 0.0) {
        const double floor_term = std::pow(std::max(K, 0.0), 1.0 / (p.rho + 1.0));
        if (sup01 == 0.0) return floor_term;
        const double decay = std::pow(p.rho * std::max(t - 1.0, 0.0) / p.C0 + std::pow(sup01, -p.rho),
                                      -1.0 / p.rho);
        return decay + floor_term;
    }
    return sup01 * std::pow(p.C0 / (1.0 + p.C0), static_cast<double>(whole_units)) + K;
}

}  // namespace

double nakao_bound(const NakaoProblem& p, double t) {
    const int spu = steps_per_unit(p);
    if (!(t >= 0.0)) throw DomainError("Nakao bound requires t >= 0");
    const long whole = static_cast<long>(std::floor(t + 1e-12));
    return bound_with(p, sup_first_unit(p, spu), t, whole, interpolate(p.K, t));
}

NakaoVerdict nakao_verify(const NakaoProblem& p) {
    const int spu = steps_per_unit(p);
    NakaoVerdict v;
    v.worst_hypothesis_residual = nakao_hypothesis_residual(p);
    v.hypothesis_ok = v.worst_hypothesis_residual <= 1e-12;
    const double sup01 = sup_first_unit(p, spu);
    v.degenerate_sup = p.rho > 0.0 && sup01 == 0.0;
    if (!v.hypothesis_ok) return v;

    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.phi.y.size(); ++i) {
        const long whole = static_cast<long>(i) / spu;
        const double b = bound_with(p, sup01, p.phi.t[i], whole, p.K.y[i]);
        worst = std::max(worst, p.phi.y[i] - b);
    }
    v.worst_conclusion_margin = worst;
    v.conclusion_ok = worst <= 1e-12;
    return v;
}

NakaoProblem random_nakao_problem(std::mt19937_64& rng, double rho) {
    static constexpr int kUnits[] = {1, 2, 4, 5, 10};
    std::uniform_int_distribution<int> pick_spu(0, 4);
    std::uniform_int_distribution<int> pick_T(2, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);

    for (;;) {
        const int spu = kUnits[pick_spu(rng)];
        const int T = pick_T(rng);
        const std::size_t n = static_cast<std::size_t>(spu) * T + 1;

        NakaoProblem p;
        p.rho = rho;
        p.phi.t.resize(n);
        p.K.t.resize(n);
        for (std::size_t i = 0; i < n; ++i) p.phi.t[i] = p.K.t[i] = static_cast<double>(i) / spu;

        // non-increasing phi: random decrements with occasional plateaus
        p.phi.y.resize(n);
        double level = 0.1 + 5.0 * unit(rng);
        const double decay = 0.02 + 0.5 * unit(rng);
        for (std::size_t i = 0; i < n; ++i) {
            p.phi.y[i] = level;
            if (unit(rng) > 0.1) level *= std::exp(-decay * expo(rng) / spu);
        }

        // non-decreasing K, zero in a third of the trials
        p.K.y.assign(n, 0.0);
        if (unit(rng) > 0.33) {
            double k = 0.1 * unit(rng) * std::pow(p.phi.y.back(), 1.0 + rho);
            for (std::size_t i = 0; i < n; ++i) {
                p.K.y[i] = k;
                k += 0.05 * unit(rng) * std::pow(p.phi.y.back(), 1.0 + rho) / spu;
            }
        }

        // smallest C0: per-window maximum of ratios; plateau windows with an active
        // constraint admit no finite C0 and trigger a resample
        double C0 = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i + spu < n && finite; ++i) {
            double sup = 0.0;
            for (std::size_t k = i; k <= i + spu; ++k) sup = std::max(sup, std::pow(p.phi.y[k], 1.0 + rho));
            const double need = sup - p.K.y[i];
            if (need <= 0.0) continue;
            const double drop = p.phi.y[i] - p.phi.y[i + spu];
            if (!(drop > 0.0)) {
                finite = false;
                break;
            }
            C0 = std::max(C0, need / drop);
        }
        if (!finite) continue;
        p.C0 = C0 > 0.0 ? C0 * (1.0 + 1e-14) : 1.0;
        return p;
    }
}

HarauxResult haraux_check(std::span<const double> u, std::span<const double> v, double r) {
    if (!(r >= 1.0)) throw DomainError("power-difference bound needs r >= 1");
    if (u.size() != v.size()) throw LengthMismatch("haraux_check", u.size(), v.size());
    double nu = 0.0, nv = 0.0, nd = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        nu += u[i] * u[i];
        nv += v[i] * v[i];
        nd += (u[i] - v[i]) * (u[i] - v[i]);
    }
    nu = std::sqrt(nu);
    nv = std::sqrt(nv);
    nd = std::sqrt(nd);
    HarauxResult res;
    res.lhs = std::abs(std::pow(nu, r) - std::pow(nv, r));
    res.rhs = r * std::pow(std::max(nu, nv), r - 1.0) * nd;
    res.ok = res.lhs <= res.rhs + 1e-12;
    return res;
}

SuiteSummary run_nakao_suite(std::uint64_t seed, long trials, double rho) {
    std::mt19937_64 rng(seed);
    SuiteSummary s;
    s.worst = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < trials; ++i) {
        const auto p = random_nakao_problem(rng, rho);
        const auto v = nakao_verify(p);
        ++s.trials;
        if (!v.hypothesis_ok) {
            ++s.skipped;
            continue;
        }
        s.worst = std::max(s.worst, v.worst_conclusion_margin);
        if (!v.conclusion_ok) ++s.violations;
    }
    return s;
}

SuiteSummary run_haraux_suite(std::uint64_t seed, long trials) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(1, 8);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> power(1.0, 6.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SuiteSummary s;
    s.worst = -std::numeric_limits<double>::infinity();
    std::vector<double> u, v;
    for (long i = 0; i < trials; ++i) {
        const int n = dim(rng);
        u.resize(n);
        v.resize(n);
        for (auto& x : u) x = coord(rng);
        const double mode = unit(rng);
        if (mode < 0.1) {
            v = u;  // identical
        } else if (mode < 0.3) {
            const double c = 2.0 * coord(rng);  // parallel
            for (int k = 0; k < n; ++k) v[k] = c * u[k];
        } else {
            for (auto& x : v) x = coord(rng);
        }
        const double r = mode < 0.2 ? 1.0 : power(rng);
        const auto res = haraux_check(u, v, r);
        ++s.trials;
        s.worst = std::max(s.worst, res.lhs - res.rhs);
        if (!res.ok) ++s.violations;
    }
    return s;
}

}  // namespace nlbeam
