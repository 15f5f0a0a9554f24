#include "nlbeam/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "nlbeam/errors.hpp"

namespace nlbeam {

double euler_lagrange_value(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                            std::span<const double> coeffs) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    if (coeffs.size() != n) throw LengthMismatch("euler_lagrange_value", n, coeffs.size());
    double quad = 0.0;
    double work = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        quad += model.omega_sq(j) * coeffs[j] * coeffs[j];
        if (!forcing.h.empty()) work += forcing.h[j] * coeffs[j];
    }
    return 0.5 * quad + source_potential(model, source, coeffs) - forcing.lambda * work;
}

Coeffs el_gradient(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                   std::span<const double> coeffs) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    if (coeffs.size() != n) throw LengthMismatch("el_gradient", n, coeffs.size());
    Coeffs g = project_source(model, source, coeffs);
    for (std::size_t j = 0; j < n; ++j) {
        g[j] += model.omega_sq(j) * coeffs[j];
        if (!forcing.h.empty()) g[j] -= forcing.lambda * forcing.h[j];
    }
    return g;
}

namespace {

struct Problem {
    const SpectralModel& model;
    const SourceLaw& source;
    const Forcing& forcing;
    std::vector<double> precond;  // 1 / (sigma_j + kappa mu_j)

    double value(std::span<const double> c) const { return euler_lagrange_value(model, source, forcing, c); }
    Coeffs grad(std::span<const double> c) const { return el_gradient(model, source, forcing, c); }

    // Linear part exact; the source part by a central difference of its projection.
    Coeffs hess_vec(std::span<const double> c, std::span<const double> v) const {
        const std::size_t n = c.size();
        Coeffs out(n);
        const double vn = norm2(v);
        if (vn == 0.0) return Coeffs(n, 0.0);
        const double eps = 1e-6 * std::max(1.0, norm2(c)) / vn;
        Coeffs cp(c.begin(), c.end()), cm(c.begin(), c.end());
        for (std::size_t j = 0; j < n; ++j) {
            cp[j] += eps * v[j];
            cm[j] -= eps * v[j];
        }
        const Coeffs sp = project_source(model, source, cp);
        const Coeffs sm = project_source(model, source, cm);
        for (std::size_t j = 0; j < n; ++j)
            out[j] = model.omega_sq(j) * v[j] + (sp[j] - sm[j]) / (2.0 * eps);
        return out;
    }
};

// Preconditioned CG on H p = -g; stops at negative curvature.
Coeffs newton_direction(const Problem& pb, std::span<const double> c, const Coeffs& g) {
    const std::size_t n = c.size();
    Coeffs p(n, 0.0), r(n), z(n), d(n);
    for (std::size_t j = 0; j < n; ++j) {
        r[j] = -g[j];
        z[j] = pb.precond[j] * r[j];
    }
    d = z;
    double rz = dot(r, z);
    const double target = std::min(1e-3, std::sqrt(norm2(g))) * norm2(g);
    const int max_cg = 2 * static_cast<int>(n) + 10;
    for (int it = 0; it < max_cg; ++it) {
        const Coeffs hd = pb.hess_vec(c, d);
        const double curv = dot(d, hd);
        if (!(curv > 0.0)) {
            if (it == 0) return z;  // preconditioned steepest descent
            break;
        }
        const double step = rz / curv;
        for (std::size_t j = 0; j < n; ++j) {
            p[j] += step * d[j];
            r[j] -= step * hd[j];
        }
        if (norm2(r) <= target) break;
        for (std::size_t j = 0; j < n; ++j) z[j] = pb.precond[j] * r[j];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t j = 0; j < n; ++j) d[j] = z[j] + beta * d[j];
    }
    return p;
}

}  // namespace

StationaryResult minimize_functional(const SpectralModel& model, const SourceLaw& source,
                                     const Forcing& forcing, std::span<const double> start, double tol,
                                     int max_iter) {
    validate(source);
    validate(forcing, model.n_modes());
    if (!(tol > 0.0)) throw InvalidConfiguration("stationary tolerance must be positive");
    if (max_iter < 1) throw InvalidConfiguration("max_iter must be at least 1");
    const auto n = static_cast<std::size_t>(model.n_modes());
    if (start.size() != n) throw LengthMismatch("minimize_functional start", n, start.size());

    Problem pb{model, source, forcing, {}};
    pb.precond.resize(n);
    for (std::size_t j = 0; j < n; ++j) pb.precond[j] = 1.0 / model.omega_sq(j);

    StationaryResult res;
    Coeffs c(start.begin(), start.end());
    double I = pb.value(c);
    Coeffs g = pb.grad(c);
    double gn = norm2(g);
    res.value_history.push_back(I);

    const double switch_at = std::sqrt(tol);
    double t_prev = 1.0;
    Coeffs trial(n);
    int it = 0;
    for (; it < max_iter && gn > tol; ++it) {
        bool accepted = false;
        const Coeffs p = newton_direction(pb, c, g);
        const double gp = dot(g, p);
        if (gn <= switch_at) {
            // close to a critical point I changes below rounding, so the merit is the gradient norm
            double t = 1.0;
            for (int k = 0; k < 40; ++k, t *= 0.5) {
                for (std::size_t j = 0; j < n; ++j) trial[j] = c[j] + t * p[j];
                const Coeffs gt = pb.grad(trial);
                const double gtn = norm2(gt);
                const double It = pb.value(trial);
                if (gtn < (1.0 - 1e-4 * t) * gn && It <= I + 1e-12 * std::max(1.0, std::abs(I))) {
                    c = trial;
                    g = gt;
                    gn = gtn;
                    I = std::min(I, It);
                    accepted = true;
                    break;
                }
            }
        } else if (gp < 0.0) {
            double t = 1.0;
            for (int k = 0; k < 40; ++k, t *= 0.5) {
                for (std::size_t j = 0; j < n; ++j) trial[j] = c[j] + t * p[j];
                const double It = pb.value(trial);
                if (It <= I + 1e-4 * t * gp) {
                    c = trial;
                    I = It;
                    g = pb.grad(c);
                    gn = norm2(g);
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) {
            Coeffs d(n);
            double slope = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                d[j] = -pb.precond[j] * g[j];
                slope += g[j] * d[j];
            }
            double t = std::min(1.0, 2.0 * t_prev);
            for (int k = 0; k < 60; ++k, t *= 0.5) {
                for (std::size_t j = 0; j < n; ++j) trial[j] = c[j] + t * d[j];
                const double It = pb.value(trial);
                if (It <= I + 1e-4 * t * slope) {
                    c = trial;
                    I = It;
                    g = pb.grad(c);
                    gn = norm2(g);
                    t_prev = t;
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) break;  // stalled at rounding level
        res.value_history.push_back(I);
    }

    res.coeffs = std::move(c);
    res.functional_value = I;
    res.residual = gn;
    res.iterations = it;
    res.converged = gn <= tol;
    return res;
}

BoundCheck stationary_bound_check(const SpectralModel& model, const AssumptionConstants& constants,
                                  const Forcing& forcing, const StationaryResult& result) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    if (result.coeffs.size() != n) throw LengthMismatch("stationary_bound_check", n, result.coeffs.size());
    const double sigma1 = model.sigma()[0];
    double omega = 1.0;
    double C = constants.C_fu;
    BoundCheck out;
    if (constants.c_f < sigma1) {
        omega = 1.0 - constants.c_f / sigma1;
        C = constants.C_f;
        out.constants_used = "c_f, C_f";
    } else {
        out.constants_used = "C_fu (c_f >= sigma_1)";
    }
    double bend = 0.0, memb = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double c2 = result.coeffs[j] * result.coeffs[j];
        bend += model.sigma()[j] * c2;
        memb += model.mu()[j] * c2;
    }
    out.lhs = 0.5 * omega * bend + model.kappa() * memb;
    out.rhs = C * model.length() + 2.0 * forcing.h_lambda_norm_sq() / (sigma1 * omega);
    out.ok = out.lhs <= out.rhs + 1e-9;
    return out;
}

std::vector<StationaryResult> multistart(const SpectralModel& model, const SourceLaw& source,
                                         const Forcing& forcing, const std::vector<Coeffs>& starts,
                                         double tol, int max_iter, double dedupe) {
    std::vector<std::future<StationaryResult>> jobs;
    jobs.reserve(starts.size());
    for (const auto& s : starts)
        jobs.push_back(std::async(std::launch::async, [&, s] {
            return minimize_functional(model, source, forcing, s, tol, max_iter);
        }));

    std::vector<StationaryResult> found;
    const Coeffs zeros(model.n_modes(), 0.0);
    for (auto& job : jobs) {
        StationaryResult r = job.get();
        if (!r.converged) continue;
        const bool seen = std::any_of(found.begin(), found.end(), [&](const StationaryResult& f) {
            Coeffs d(r.coeffs.size());
            for (std::size_t j = 0; j < d.size(); ++j) d[j] = r.coeffs[j] - f.coeffs[j];
            return std::sqrt(phase_norm_sq(model, d, zeros)) < dedupe;
        });
        if (!seen) found.push_back(std::move(r));
    }
    std::sort(found.begin(), found.end(), [](const StationaryResult& x, const StationaryResult& y) {
        return x.functional_value < y.functional_value;
    });
    return found;
}

}  // namespace nlbeam
