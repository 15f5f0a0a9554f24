#pragma once

// Time integration of the Galerkin system
//
//   a_j'' + (sigma_j + kappa mu_j) a_j + <f(u), w_j> + k(E_alpha(a, b)) b_j = lambda h_j.
//
// SplitStrang treats the linear part (including the constant force) exactly as a
// per-mode rotation about the static deflection lambda h_j / omega_j^2, so the
// sigma_j = O(j^4) stiffness never limits the step. The nonlinear remainder
// -<f(u), w_j> - k(E_alpha) b_j is applied as two half kicks, each resolved with
// one explicit-midpoint sub-evaluation in b.

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlbeam/functionals.hpp"
#include "nlbeam/laws.hpp"
#include "nlbeam/spectral.hpp"

namespace nlbeam {

enum class Scheme { SplitStrang, RK4 };

struct IntegratorConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::SplitStrang;
    double alpha = 0.5;
    int sample_stride = 1;
    double horizon = 1.0;

    bool operator==(const IntegratorConfig&) const = default;
};

/// RK4 stability ceiling on dt * omega_max.
inline constexpr double kRk4StabilityLimit = 2.8;

/// Throws InvalidConfiguration for dt <= 0, horizon <= 0, stride < 1, alpha outside [0, 1]
/// or an RK4 step beyond the stability ceiling.
void validate(const IntegratorConfig& cfg, const SpectralModel& model);

/// Exact flow of a_j'' + omega_j^2 (a_j - a*_j) = 0 over a fixed step.
class LinearRotation {
public:
    LinearRotation(const SpectralModel& model, double dt, std::span<const double> equilibrium = {});
    void apply(std::span<double> a, std::span<double> b) const;

private:
    std::vector<double> cos_;
    std::vector<double> sin_;
    std::vector<double> omega_;
    std::vector<double> eq_;
};

/// Time stepper with cached rotation factors and scratch buffers. Not thread-safe;
/// create one per trajectory.
class Stepper {
public:
    Stepper(const SpectralModel& model, SourceLaw source, DampingLaw damping, Forcing forcing,
            IntegratorConfig cfg);

    /// Advances state by one step of cfg.dt; throws BlowUp on non-finite output.
    void advance(ModalState& state);

    /// k(E_alpha(a, b)) ||b||^2, the dissipation integrand.
    double dissipation_rate(std::span<const double> a, std::span<const double> b) const;

    const IntegratorConfig& config() const noexcept { return cfg_; }

private:
    void strang(ModalState& s);
    void rk4(ModalState& s);
    void half_kick(std::span<const double> a, std::span<double> b, double h);
    const std::vector<double>& source_force(std::span<const double> a);
    void rhs(std::span<const double> a, std::span<const double> b, std::span<double> da,
             std::span<double> db);

    const SpectralModel& model_;
    SourceLaw source_;
    DampingLaw damping_;
    Forcing forcing_;
    IntegratorConfig cfg_;
    std::optional<LinearRotation> rotation_;
    bool zero_source_;

    std::vector<double> grid_;
    std::vector<double> force_;
    std::vector<double> force_at_;
    bool force_valid_ = false;
    std::vector<double> g_, bmid_;
    std::vector<std::vector<double>> ka_, kb_;
    std::vector<double> ta_, tb_;
};

ModalState step(const SpectralModel& model, const SourceLaw& source, const DampingLaw& damping,
                const Forcing& forcing, const ModalState& state, const IntegratorConfig& cfg);

struct Trajectory {
    std::vector<ModalState> states;
    std::vector<double> times;
    std::vector<double> energy;          // E(t_i)
    std::vector<double> modified;        // E~(t_i); empty when K_lambda is unavailable
    std::vector<double> dissipation;     // D(t_i), trapezoid-accumulated every step
    std::vector<double> phase_norm;
    std::optional<double> K_lambda;
    double alpha = 0.5;

    std::size_t size() const noexcept { return times.size(); }
    SampledSeries energy_series() const { return {times, energy}; }
    SampledSeries modified_series() const { return {times, modified}; }
    SampledSeries phase_norm_series() const { return {times, phase_norm}; }
};

/// Integrates over [t0, t0 + horizon]; records every cfg.sample_stride-th step and the final state.
Trajectory integrate(const SpectralModel& model, const SourceLaw& source, const DampingLaw& damping,
                     const Forcing& forcing, const ModalState& initial, const IntegratorConfig& cfg);

/// Final state only, no bookkeeping.
ModalState evolve(const SpectralModel& model, const SourceLaw& source, const DampingLaw& damping,
                  const Forcing& forcing, const ModalState& initial, const IntegratorConfig& cfg);

/// max_i |E(t_i) + D(t_i) - E(t_0)| / max(|E(t_0)|, 1).
double energy_identity_residual(const Trajectory& traj);

struct ConvergenceReport {
    bool fitted = false;
    double order = 0.0;  // +inf when every difference sits at rounding level
    std::vector<double> differences;
    std::string diagnostic;
};

/// Runs each dt (geometric progression, at least three entries, coarsest first) to the
/// same horizon and fits the order from successive differences of the final states.
ConvergenceReport convergence_order(const SpectralModel& model, const SourceLaw& source,
                                    const DampingLaw& damping, const Forcing& forcing,
                                    const ModalState& initial, IntegratorConfig cfg,
                                    const std::vector<double>& dt_list);

/// Columns: t, E, Et, D, phase_norm, a_1..a_N, b_1..b_N (17 significant digits).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace nlbeam
