#pragma once

// Checkable forms of two auxiliary inequalities:
//
//  * the generalized Nakao lemma: if
//        sup_{t<=s<=t+1} phi(s)^{1+rho} <= C0 (phi(t) - phi(t+1)) + K(t)
//    on [0, T-1] with K non-decreasing, then phi decays polynomially (rho > 0)
//    or geometrically (rho = 0) down to a K-dependent floor;
//  * the power-difference bound | ||u||^r - ||v||^r | <= r max(||u||, ||v||)^{r-1} ||u - v||.
//
// Suprema over windows are taken on a uniform grid whose spacing divides 1, so
// every window endpoint is a grid point and both hypothesis and conclusion are
// decidable.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nlbeam/functionals.hpp"

namespace nlbeam {

struct NakaoProblem {
    SampledSeries phi;
    double C0 = 1.0;
    double rho = 0.0;
    SampledSeries K;
};

struct NakaoVerdict {
    bool hypothesis_ok = false;
    double worst_hypothesis_residual = 0.0;
    bool conclusion_ok = false;
    double worst_conclusion_margin = 0.0;  // max_i phi(t_i) - bound(t_i)
    bool degenerate_sup = false;           // sup_{[0,1]} phi = 0 with rho > 0
};

/// Number of grid intervals per unit time; throws DomainError if the grid is
/// non-uniform, its spacing does not divide 1, or it is shorter than 1.
int steps_per_unit(const NakaoProblem& p);

/// max over grid t in [0, T-1] of sup-window^{1+rho} - [C0 (phi(t) - phi(t+1)) + K(t)].
double nakao_hypothesis_residual(const NakaoProblem& p);

/// Right-hand side of the lemma's conclusion at time t (K interpolated linearly).
double nakao_bound(const NakaoProblem& p, double t);

/// Conclusion is only asserted when the hypothesis holds.
NakaoVerdict nakao_verify(const NakaoProblem& p);

/// Random non-increasing phi and non-decreasing K on a unit-commensurate grid,
/// with C0 set to the smallest value satisfying the hypothesis. Windows that admit
/// no finite C0 are resampled.
NakaoProblem random_nakao_problem(std::mt19937_64& rng, double rho);

struct HarauxResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

/// Euclidean norms; throws DomainError for r < 1 and LengthMismatch on unequal lengths.
HarauxResult haraux_check(std::span<const double> u, std::span<const double> v, double r);

struct SuiteSummary {
    long trials = 0;
    long violations = 0;
    long skipped = 0;   // Nakao: trials whose hypothesis failed
    double worst = 0.0; // largest conclusion margin / lhs - rhs seen
};

SuiteSummary run_nakao_suite(std::uint64_t seed, long trials, double rho);
SuiteSummary run_haraux_suite(std::uint64_t seed, long trials);

}  // namespace nlbeam
