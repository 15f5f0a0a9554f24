#pragma once

// Spectral realization of the hinged-beam operators on (0, L).
//
// The Dirichlet Laplacian A and the hinged biharmonic A1 share the sine
// eigenbasis
//
//   w_j(x) = sqrt(2/L) sin(j pi x / L),   A w_j = mu_j w_j,   A1 w_j = sigma_j w_j,
//
// with mu_j = (j pi / L)^2 and sigma_j = mu_j^2. Every function of the operators
// therefore acts diagonally on modal coefficients. Nonlinear terms are evaluated
// by collocation on M uniform interior nodes x_m = m L / (M + 1); the weight
// L / (M + 1) turns the node sum into the trapezoid rule on [0, L], which is
// exact for products of sines whose wave numbers sum to less than 2(M + 1).

#include <cstddef>
#include <span>
#include <vector>

namespace nlbeam {

using Coeffs = std::vector<double>;

enum class Operator { A, A1 };

class SpectralModel {
public:
    /// Throws InvalidConfiguration unless n_modes >= 1, length > 0, kappa >= 0
    /// and quad_points >= 2 * n_modes.
    SpectralModel(int n_modes, double length, double kappa, int quad_points);

    int n_modes() const noexcept { return n_; }
    int quad_points() const noexcept { return m_; }
    double length() const noexcept { return length_; }
    double kappa() const noexcept { return kappa_; }
    double quad_weight() const noexcept { return weight_; }

    const std::vector<double>& mu() const noexcept { return mu_; }
    const std::vector<double>& sigma() const noexcept { return sigma_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }

    /// Squared linear frequency sigma_j + kappa mu_j (zero-based j).
    double omega_sq(std::size_t j) const noexcept { return sigma_[j] + kappa_ * mu_[j]; }
    double omega_max() const noexcept;

    /// w_j(x_m), zero-based indices.
    double basis(std::size_t m, std::size_t j) const noexcept { return table_[m * n_ + j]; }
    std::span<const double> basis_row(std::size_t m) const noexcept {
        return {table_.data() + m * n_, static_cast<std::size_t>(n_)};
    }

    /// Eigenvalue of the requested operator for zero-based mode j.
    double eigenvalue(Operator op, std::size_t j) const noexcept {
        return op == Operator::A ? mu_[j] : sigma_[j];
    }

private:
    int n_;
    int m_;
    double length_;
    double kappa_;
    double weight_;
    std::vector<double> mu_;
    std::vector<double> sigma_;
    std::vector<double> nodes_;
    std::vector<double> table_;  // row-major M x N
};

/// Defaults: L = pi, M = 8 N.
SpectralModel build_model(int n_modes, double length, double kappa, int quad_points);
SpectralModel build_model(int n_modes, double kappa = 0.0);

/// Galerkin image of (u, u_t) at time t.
struct ModalState {
    Coeffs a;
    Coeffs b;
    double t = 0.0;

    static ModalState zero(int n) { return {Coeffs(n, 0.0), Coeffs(n, 0.0), 0.0}; }
    bool finite() const noexcept;
};

struct GridField {
    std::vector<double> values;
};

GridField synthesize(const SpectralModel& model, std::span<const double> coeffs);
Coeffs analyze(const SpectralModel& model, const GridField& field);

/// Allocation-free variants used on hot paths.
void synthesize_into(const SpectralModel& model, std::span<const double> coeffs,
                     std::span<double> out);
void analyze_into(const SpectralModel& model, std::span<const double> field, std::span<double> out);

/// ||Op^s c|| = (sum lambda_j^{2s} c_j^2)^{1/2}.
double frac_norm(const SpectralModel& model, std::span<const double> coeffs, Operator op, double s);

/// ||(u, v)||_H = (||A1^{1/2} u||^2 + ||v||^2)^{1/2}.
double phase_norm(const SpectralModel& model, const ModalState& state);
double phase_norm_sq(const SpectralModel& model, std::span<const double> a, std::span<const double> b);

/// Damping argument E_alpha(u, u_t) = ||A^alpha u||^2 + ||u_t||^2.
double e_alpha(const SpectralModel& model, std::span<const double> a, std::span<const double> b,
               double alpha);

/// L^p norm of the collocated field, ||u||_p^p by quadrature.
double lp_norm_pow(const SpectralModel& model, std::span<const double> coeffs, double p);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

ModalState difference(const ModalState& lhs, const ModalState& rhs);

}  // namespace nlbeam
