#pragma once

// Seeded initial data. Phase-space components sqrt(sigma_j) a_j and b_j are
// independent Gaussians with standard deviation j^{-2}, so the continuum limit
// has finite energy; the draw is then rescaled to a requested energy.

#include <cstdint>

#include "nlbeam/laws.hpp"
#include "nlbeam/spectral.hpp"

namespace nlbeam {

/// Unscaled Gaussian draw from std::mt19937_64(seed).
ModalState gaussian_state(const SpectralModel& model, std::uint64_t seed);

/// Scales `state` by s > 0 so that E(s a, s b) = target. Closed form when f = 0 and
/// h = 0; otherwise bisection along the ray. Throws DomainError when target
/// <= E(0) or the energy never reaches the target.
ModalState rescale_to_energy(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                             const ModalState& state, double target);

/// gaussian_state followed by rescale_to_energy.
ModalState random_state(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                        std::uint64_t seed, double target_energy);

/// a = amplitude e_j (one-based j), b = 0.
ModalState mode_state(const SpectralModel& model, int j, double amplitude);

}  // namespace nlbeam
