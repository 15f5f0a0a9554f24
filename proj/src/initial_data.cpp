#include "nlbeam/initial_data.hpp"

#include <cmath>
#include <random>

#include "nlbeam/errors.hpp"
#include "nlbeam/functionals.hpp"

namespace nlbeam {

ModalState gaussian_state(const SpectralModel& model, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int n = model.n_modes();
    ModalState s = ModalState::zero(n);
    for (int j = 0; j < n; ++j) {
        const double decay = 1.0 / ((j + 1.0) * (j + 1.0));
        s.a[j] = normal(rng) * decay / std::sqrt(model.sigma()[j]);
        s.b[j] = normal(rng) * decay;
    }
    return s;
}

namespace {

ModalState scaled(const ModalState& s, double k) {
    ModalState out = s;
    for (auto& x : out.a) x *= k;
    for (auto& x : out.b) x *= k;
    return out;
}

}  // namespace

ModalState rescale_to_energy(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                             const ModalState& state, double target) {
    auto E = [&](double k) {
        const ModalState s = scaled(state, k);
        return total_energy(model, source, forcing, s.a, s.b);
    };
    const double base = E(0.0);
    if (!(target > base)) throw DomainError("requested energy must exceed the energy of the zero state");
    if (is_zero(source) && forcing.vanishes()) {
        const double e1 = E(1.0);
        if (!(e1 > 0.0)) throw DomainError("cannot rescale a zero state");
        return scaled(state, std::sqrt(target / e1));
    }
    double lo = 0.0, hi = 1.0;
    int grow = 0;
    while (E(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 200) throw DomainError("energy does not reach the requested level along the ray");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (E(mid) < target ? lo : hi) = mid;
    }
    return scaled(state, 0.5 * (lo + hi));
}

ModalState random_state(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing,
                        std::uint64_t seed, double target_energy) {
    return rescale_to_energy(model, source, forcing, gaussian_state(model, seed), target_energy);
}

ModalState mode_state(const SpectralModel& model, int j, double amplitude) {
    if (j < 1 || j > model.n_modes()) throw DomainError("mode index out of range");
    ModalState s = ModalState::zero(model.n_modes());
    s.a[j - 1] = amplitude;
    return s;
}

}  // namespace nlbeam
