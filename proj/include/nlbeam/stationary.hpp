#pragma once

// Stationary solutions of kappa A u + A1 u + f(u) = lambda h as critical points of
//
//   I(u) = 1/2 ||A1^{1/2} u||^2 + kappa/2 ||A^{1/2} u||^2 + (f_hat(u), 1) - (h_lambda, u).
//
// The Galerkin gradient of I is exactly the modal residual of the stationary
// equation, so the final gradient norm doubles as the stationarity certificate.

#include <string>
#include <vector>

#include "nlbeam/laws.hpp"
#include "nlbeam/spectral.hpp"

namespace nlbeam {

struct StationaryResult {
    Coeffs coeffs;
    double functional_value = 0.0;
    double residual = 0.0;  // modal Euclidean norm of the gradient
    int iterations = 0;
    bool converged = false;
    std::vector<double> value_history;  // I after every accepted step
};

double euler_lagrange_value(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                            std::span<const double> coeffs);

/// g_j = (sigma_j + kappa mu_j) c_j + <f(u), w_j> - lambda h_j.
Coeffs el_gradient(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                   std::span<const double> coeffs);

/// Preconditioned gradient descent with Armijo backtracking until ||g|| <= sqrt(tol),
/// then inexact Newton (finite-difference Hessian-vector products, preconditioned CG)
/// to ||g|| <= tol. On iteration exhaustion returns the best iterate, unconverged.
StationaryResult minimize_functional(const SpectralModel& model, const SourceLaw& source,
                                     const Forcing& forcing, std::span<const double> start,
                                     double tol = 1e-8, int max_iter = 10000);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
    std::string constants_used;
};

/// lhs = (omega/2) ||A1^{1/2} u*||^2 + kappa ||A^{1/2} u*||^2,
/// rhs = C L + 2 ||h_lambda||^2 / (sigma_1 omega).
/// Uses (c_f, C_f) when c_f < sigma_1. Otherwise the pair is not admissible and the
/// bound is evaluated with the multiplier constant C_fu = sup(-f(u) u) and omega = 1,
/// which is what testing the equation with u* actually requires.
BoundCheck stationary_bound_check(const SpectralModel& model, const AssumptionConstants& constants,
                                  const Forcing& forcing, const StationaryResult& result);

/// Independent solves from every start; converged results closer than `dedupe`
/// in phase norm are merged. Sorted by functional value.
std::vector<StationaryResult> multistart(const SpectralModel& model, const SourceLaw& source,
                                         const Forcing& forcing, const std::vector<Coeffs>& starts,
                                         double tol = 1e-8, int max_iter = 10000, double dedupe = 1e-4);

}  // namespace nlbeam
