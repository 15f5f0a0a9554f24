#include "nlbeam/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlbeam/errors.hpp"

namespace nlbeam {

SpectralModel::SpectralModel(int n_modes, double length, double kappa, int quad_points)
    : n_(n_modes), m_(quad_points), length_(length), kappa_(kappa) {
    if (n_modes < 1) throw InvalidConfiguration("n_modes must be >= 1");
    if (!(length > 0.0) || !std::isfinite(length)) throw InvalidConfiguration("length must be > 0");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InvalidConfiguration("kappa must be >= 0");
    if (quad_points < 2 * n_modes)
        throw InvalidConfiguration("quad_points must be >= 2 * n_modes");

    weight_ = length / (m_ + 1);
    mu_.resize(n_);
    sigma_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        const double k = (j + 1) * std::numbers::pi / length;
        mu_[j] = k * k;
        sigma_[j] = mu_[j] * mu_[j];
    }
    nodes_.resize(m_);
    table_.resize(static_cast<std::size_t>(m_) * n_);
    const double amp = std::sqrt(2.0 / length);
    for (int m = 0; m < m_; ++m) {
        nodes_[m] = (m + 1) * weight_;
        for (int j = 0; j < n_; ++j) {
            // sin(j pi (m+1) / (M+1)) with the argument reduced mod 2(M+1) to keep it exact
            const long long num = static_cast<long long>(j + 1) * (m + 1) % (2LL * (m_ + 1));
            table_[static_cast<std::size_t>(m) * n_ + j] =
                amp * std::sin(std::numbers::pi * static_cast<double>(num) / (m_ + 1));
        }
    }
}

double SpectralModel::omega_max() const noexcept {
    double w = 0.0;
    for (std::size_t j = 0; j < mu_.size(); ++j) w = std::max(w, omega_sq(j));
    return std::sqrt(w);
}

SpectralModel build_model(int n_modes, double length, double kappa, int quad_points) {
    return SpectralModel(n_modes, length, kappa, quad_points);
}

SpectralModel build_model(int n_modes, double kappa) {
    if (n_modes < 1) throw InvalidConfiguration("n_modes must be >= 1");
    return SpectralModel(n_modes, std::numbers::pi, kappa, 8 * n_modes);
}

bool ModalState::finite() const noexcept {
    auto ok = [](double v) { return std::isfinite(v); };
    return std::all_of(a.begin(), a.end(), ok) && std::all_of(b.begin(), b.end(), ok) &&
           std::isfinite(t);
}

void synthesize_into(const SpectralModel& model, std::span<const double> coeffs,
                     std::span<double> out) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    const auto m = static_cast<std::size_t>(model.quad_points());
    if (coeffs.size() != n) throw LengthMismatch("synthesize", n, coeffs.size());
    if (out.size() != m) throw LengthMismatch("synthesize output", m, out.size());
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = model.basis_row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += coeffs[j] * row[j];
        out[i] = s;
    }
}

void analyze_into(const SpectralModel& model, std::span<const double> field, std::span<double> out) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    const auto m = static_cast<std::size_t>(model.quad_points());
    if (field.size() != m) throw LengthMismatch("analyze", m, field.size());
    if (out.size() != n) throw LengthMismatch("analyze output", n, out.size());
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = model.basis_row(i);
        const double v = field[i];
        for (std::size_t j = 0; j < n; ++j) out[j] += v * row[j];
    }
    for (auto& c : out) c *= model.quad_weight();
}

GridField synthesize(const SpectralModel& model, std::span<const double> coeffs) {
    GridField g{std::vector<double>(model.quad_points())};
    synthesize_into(model, coeffs, g.values);
    return g;
}

Coeffs analyze(const SpectralModel& model, const GridField& field) {
    Coeffs c(model.n_modes());
    analyze_into(model, field.values, c);
    return c;
}

double frac_norm(const SpectralModel& model, std::span<const double> coeffs, Operator op, double s) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    if (coeffs.size() != n) throw LengthMismatch("frac_norm", n, coeffs.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = s == 0.0 ? 1.0 : std::pow(model.eigenvalue(op, j), 2.0 * s);
        acc += w * coeffs[j] * coeffs[j];
    }
    return std::sqrt(acc);
}

double phase_norm_sq(const SpectralModel& model, std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    if (a.size() != n) throw LengthMismatch("phase_norm (a)", n, a.size());
    if (b.size() != n) throw LengthMismatch("phase_norm (b)", n, b.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += model.sigma()[j] * a[j] * a[j] + b[j] * b[j];
    return acc;
}

double phase_norm(const SpectralModel& model, const ModalState& state) {
    return std::sqrt(phase_norm_sq(model, state.a, state.b));
}

double e_alpha(const SpectralModel& model, std::span<const double> a, std::span<const double> b,
               double alpha) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    if (a.size() != n) throw LengthMismatch("e_alpha (a)", n, a.size());
    if (b.size() != n) throw LengthMismatch("e_alpha (b)", n, b.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        // mu_j^{2 alpha}; the common cases avoid pow so alpha = 1 reproduces sigma_j bit-for-bit
        double w;
        if (alpha == 1.0)
            w = model.sigma()[j];
        else if (alpha == 0.5)
            w = model.mu()[j];
        else if (alpha == 0.0)
            w = 1.0;
        else
            w = std::pow(model.mu()[j], 2.0 * alpha);
        acc += w * a[j] * a[j] + b[j] * b[j];
    }
    return acc;
}

double lp_norm_pow(const SpectralModel& model, std::span<const double> coeffs, double p) {
    std::vector<double> u(model.quad_points());
    synthesize_into(model, coeffs, u);
    double acc = 0.0;
    for (double v : u) acc += std::pow(std::abs(v), p);
    return acc * model.quad_weight();
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw LengthMismatch("dot", x.size(), y.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

ModalState difference(const ModalState& lhs, const ModalState& rhs) {
    if (lhs.a.size() != rhs.a.size()) throw LengthMismatch("difference", lhs.a.size(), rhs.a.size());
    ModalState d = lhs;
    for (std::size_t j = 0; j < d.a.size(); ++j) {
        d.a[j] -= rhs.a[j];
        d.b[j] -= rhs.b[j];
    }
    return d;
}

}  // namespace nlbeam
