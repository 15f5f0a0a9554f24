#pragma once

// Covering-number estimate of the epsilon-entropy H_eps = ln N(eps) of a point
// cloud. N(eps) is counted by a greedy epsilon-net, which over-counts the minimal
// cover by at most the ratio N(eps/2)/N(eps), so the fitted scaling exponent is
// unaffected.

#include <vector>

#include "nlbeam/spectral.hpp"

namespace nlbeam {

struct EntropyEstimate {
    std::vector<double> eps;
    std::vector<long> counts;
    std::vector<double> entropy;  // ln counts
    double dimension = 0.0;       // slope of entropy against ln(1/eps)
};

/// Points share one dimension; distances use sum_i w_i (x_i - y_i)^2 with weights
/// `w` (all ones when empty). Requires >= 2 points and a strictly decreasing,
/// positive eps list; throws DomainError otherwise.
EntropyEstimate box_count_entropy(const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& eps, const std::vector<double>& w = {});

/// Weights realizing the phase norm on concatenated (a, b) vectors.
std::vector<double> phase_weights(const SpectralModel& model);

/// Greedy net size at a single radius.
long greedy_cover_count(const std::vector<std::vector<double>>& points, double eps,
                        const std::vector<double>& w = {});

}  // namespace nlbeam
