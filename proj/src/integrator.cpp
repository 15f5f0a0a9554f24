#include "nlbeam/integrator.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "nlbeam/errors.hpp"

namespace nlbeam {

void validate(const IntegratorConfig& cfg, const SpectralModel& model) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidConfiguration("dt must be > 0");
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
        throw InvalidConfiguration("horizon must be > 0");
    if (cfg.sample_stride < 1) throw InvalidConfiguration("sample_stride must be >= 1");
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw InvalidConfiguration("alpha must lie in [0, 1]");
    if (cfg.scheme == Scheme::RK4 && cfg.dt * model.omega_max() > kRk4StabilityLimit)
        throw InvalidConfiguration("RK4 requires dt * omega_max <= 2.8 (got " +
                                   std::to_string(cfg.dt * model.omega_max()) + ")");
}

LinearRotation::LinearRotation(const SpectralModel& model, double dt, std::span<const double> equilibrium) {
    const auto n = static_cast<std::size_t>(model.n_modes());
    cos_.resize(n);
    sin_.resize(n);
    omega_.resize(n);
    eq_.assign(n, 0.0);
    if (!equilibrium.empty()) {
        if (equilibrium.size() != n) throw LengthMismatch("rotation equilibrium", n, equilibrium.size());
        eq_.assign(equilibrium.begin(), equilibrium.end());
    }
    for (std::size_t j = 0; j < n; ++j) {
        omega_[j] = std::sqrt(model.omega_sq(j));
        cos_[j] = std::cos(omega_[j] * dt);
        sin_[j] = std::sin(omega_[j] * dt);
    }
}

void LinearRotation::apply(std::span<double> a, std::span<double> b) const {
    for (std::size_t j = 0; j < cos_.size(); ++j) {
        const double y = a[j] - eq_[j];
        const double v = b[j];
        a[j] = eq_[j] + y * cos_[j] + v * sin_[j] / omega_[j];
        b[j] = -y * omega_[j] * sin_[j] + v * cos_[j];
    }
}

Stepper::Stepper(const SpectralModel& model, SourceLaw source, DampingLaw damping, Forcing forcing,
                 IntegratorConfig cfg)
    : model_(model),
      source_(std::move(source)),
      damping_(std::move(damping)),
      forcing_(std::move(forcing)),
      cfg_(cfg),
      zero_source_(is_zero(source_)) {
    validate(cfg_, model_);
    validate(damping_);
    validate(source_);
    validate(forcing_, model_.n_modes());
    const auto n = static_cast<std::size_t>(model_.n_modes());
    if (cfg_.scheme == Scheme::SplitStrang) {
        std::vector<double> eq(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) eq[j] = forcing_.lambda * forcing_.h[j] / model_.omega_sq(j);
        rotation_.emplace(model_, cfg_.dt, eq);
    }
    grid_.resize(model_.quad_points());
    force_.assign(n, 0.0);
    force_at_.assign(n, 0.0);
    g_.resize(n);
    bmid_.resize(n);
    ka_.assign(4, std::vector<double>(n));
    kb_.assign(4, std::vector<double>(n));
    ta_.resize(n);
    tb_.resize(n);
}

double Stepper::dissipation_rate(std::span<const double> a, std::span<const double> b) const {
    double bb = 0.0;
    for (double v : b) bb += v * v;
    if (bb == 0.0) return 0.0;
    return k_eval(damping_, e_alpha(model_, a, b, cfg_.alpha)) * bb;
}

const std::vector<double>& Stepper::source_force(std::span<const double> a) {
    if (zero_source_) return force_;
    if (!force_valid_ || !std::equal(a.begin(), a.end(), force_at_.begin())) {
        project_source_into(model_, source_, a, grid_, force_);
        std::copy(a.begin(), a.end(), force_at_.begin());
        force_valid_ = true;
    }
    return force_;
}

void Stepper::half_kick(std::span<const double> a, std::span<double> b, double h) {
    const auto& F = source_force(a);
    const std::size_t n = b.size();
    const double k0 = k_eval(damping_, e_alpha(model_, a, b, cfg_.alpha));
    for (std::size_t j = 0; j < n; ++j) bmid_[j] = b[j] + 0.5 * h * (-F[j] - k0 * b[j]);
    const double k1 = k_eval(damping_, e_alpha(model_, a, bmid_, cfg_.alpha));
    for (std::size_t j = 0; j < n; ++j) b[j] += h * (-F[j] - k1 * bmid_[j]);
}

void Stepper::strang(ModalState& s) {
    const double h = 0.5 * cfg_.dt;
    half_kick(s.a, s.b, h);
    rotation_->apply(s.a, s.b);
    half_kick(s.a, s.b, h);
}

void Stepper::rhs(std::span<const double> a, std::span<const double> b, std::span<double> da,
                  std::span<double> db) {
    const auto& F = source_force(a);
    const double k = k_eval(damping_, e_alpha(model_, a, b, cfg_.alpha));
    for (std::size_t j = 0; j < a.size(); ++j) {
        da[j] = b[j];
        db[j] = -model_.omega_sq(j) * a[j] - F[j] - k * b[j] + forcing_.lambda * forcing_.h[j];
    }
}

void Stepper::rk4(ModalState& s) {
    const double dt = cfg_.dt;
    const std::size_t n = s.a.size();
    rhs(s.a, s.b, ka_[0], kb_[0]);
    for (std::size_t j = 0; j < n; ++j) {
        ta_[j] = s.a[j] + 0.5 * dt * ka_[0][j];
        tb_[j] = s.b[j] + 0.5 * dt * kb_[0][j];
    }
    rhs(ta_, tb_, ka_[1], kb_[1]);
    for (std::size_t j = 0; j < n; ++j) {
        ta_[j] = s.a[j] + 0.5 * dt * ka_[1][j];
        tb_[j] = s.b[j] + 0.5 * dt * kb_[1][j];
    }
    rhs(ta_, tb_, ka_[2], kb_[2]);
    for (std::size_t j = 0; j < n; ++j) {
        ta_[j] = s.a[j] + dt * ka_[2][j];
        tb_[j] = s.b[j] + dt * kb_[2][j];
    }
    rhs(ta_, tb_, ka_[3], kb_[3]);
    for (std::size_t j = 0; j < n; ++j) {
        s.a[j] += dt / 6.0 * (ka_[0][j] + 2.0 * ka_[1][j] + 2.0 * ka_[2][j] + ka_[3][j]);
        s.b[j] += dt / 6.0 * (kb_[0][j] + 2.0 * kb_[1][j] + 2.0 * kb_[2][j] + kb_[3][j]);
    }
}

void Stepper::advance(ModalState& state) {
    const auto n = static_cast<std::size_t>(model_.n_modes());
    if (state.a.size() != n) throw LengthMismatch("state a", n, state.a.size());
    if (state.b.size() != n) throw LengthMismatch("state b", n, state.b.size());
    if (cfg_.scheme == Scheme::SplitStrang)
        strang(state);
    else
        rk4(state);
    state.t += cfg_.dt;
    for (std::size_t j = 0; j < n; ++j)
        if (!std::isfinite(state.a[j]) || !std::isfinite(state.b[j])) throw BlowUp(state.t);
}

ModalState step(const SpectralModel& model, const SourceLaw& source, const DampingLaw& damping,
                const Forcing& forcing, const ModalState& state, const IntegratorConfig& cfg) {
    Stepper stepper(model, source, damping, forcing, cfg);
    ModalState out = state;
    stepper.advance(out);
    return out;
}

namespace {

long long step_count(const IntegratorConfig& cfg) {
    return std::max(1LL, std::llround(cfg.horizon / cfg.dt));
}

std::optional<double> try_k_lambda(const SpectralModel& model, const SourceLaw& source,
                                   const Forcing& forcing) {
    const auto constants = default_assumption_constants(source, model.sigma()[0]);
    if (!constants.admissible) return std::nullopt;
    return k_lambda(model, constants, forcing);
}

}  // namespace

Trajectory integrate(const SpectralModel& model, const SourceLaw& source, const DampingLaw& damping,
                     const Forcing& forcing, const ModalState& initial, const IntegratorConfig& cfg) {
    Stepper stepper(model, source, damping, forcing, cfg);
    Trajectory traj;
    traj.alpha = cfg.alpha;
    traj.K_lambda = try_k_lambda(model, source, forcing);

    ModalState state = initial;
    const double t0 = initial.t;
    double D = 0.0;
    auto record = [&] {
        const double E = total_energy(model, source, forcing, state.a, state.b);
        traj.states.push_back(state);
        traj.times.push_back(state.t);
        traj.energy.push_back(E);
        if (traj.K_lambda) traj.modified.push_back(E + *traj.K_lambda);
        traj.dissipation.push_back(D);
        traj.phase_norm.push_back(phase_norm(model, state));
    };
    record();

    const long long n_steps = step_count(cfg);
    double rate0 = stepper.dissipation_rate(state.a, state.b);
    for (long long n = 1; n <= n_steps; ++n) {
        stepper.advance(state);
        state.t = t0 + static_cast<double>(n) * cfg.dt;
        const double rate1 = stepper.dissipation_rate(state.a, state.b);
        D += 0.5 * cfg.dt * (rate0 + rate1);
        rate0 = rate1;
        if (n % cfg.sample_stride == 0 || n == n_steps) record();
    }
    return traj;
}

ModalState evolve(const SpectralModel& model, const SourceLaw& source, const DampingLaw& damping,
                  const Forcing& forcing, const ModalState& initial, const IntegratorConfig& cfg) {
    Stepper stepper(model, source, damping, forcing, cfg);
    ModalState state = initial;
    const long long n_steps = step_count(cfg);
    for (long long n = 1; n <= n_steps; ++n) stepper.advance(state);
    state.t = initial.t + static_cast<double>(n_steps) * cfg.dt;
    return state;
}

double energy_identity_residual(const Trajectory& traj) {
    if (traj.energy.empty()) return 0.0;
    const double E0 = traj.energy.front();
    const double scale = std::max(std::abs(E0), 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.energy.size(); ++i)
        worst = std::max(worst, std::abs(traj.energy[i] + traj.dissipation[i] - E0));
    return worst / scale;
}

ConvergenceReport convergence_order(const SpectralModel& model, const SourceLaw& source,
                                    const DampingLaw& damping, const Forcing& forcing,
                                    const ModalState& initial, IntegratorConfig cfg,
                                    const std::vector<double>& dt_list) {
    if (dt_list.size() < 3) throw InvalidConfiguration("convergence_order needs at least three step sizes");
    const double ratio = dt_list[0] / dt_list[1];
    for (std::size_t i = 1; i + 1 < dt_list.size(); ++i)
        if (std::abs(dt_list[i] / dt_list[i + 1] - ratio) > 1e-9 * ratio)
            throw InvalidConfiguration("step sizes must form a geometric progression");
    if (!(ratio > 1.0)) throw InvalidConfiguration("step sizes must decrease");

    std::vector<ModalState> finals;
    for (double dt : dt_list) {
        cfg.dt = dt;
        finals.push_back(evolve(model, source, damping, forcing, initial, cfg));
    }
    ConvergenceReport rep;
    double scale = 0.0;
    for (const auto& f : finals) scale = std::max(scale, phase_norm(model, f));
    for (std::size_t i = 0; i + 1 < finals.size(); ++i)
        rep.differences.push_back(phase_norm(model, difference(finals[i], finals[i + 1])));

    const double floor = 1e-11 * std::max(scale, 1e-300);
    bool all_rounding = true;
    for (double d : rep.differences) all_rounding = all_rounding && d <= floor;
    if (all_rounding) {
        rep.fitted = true;
        rep.order = std::numeric_limits<double>::infinity();
        rep.diagnostic = "differences at rounding level for every step size";
        return rep;
    }
    for (std::size_t i = 0; i + 1 < rep.differences.size(); ++i) {
        if (!(rep.differences[i + 1] < rep.differences[i])) {
            rep.diagnostic = "successive differences are not monotone: d[" + std::to_string(i) +
                             "] = " + std::to_string(rep.differences[i]) + ", d[" +
                             std::to_string(i + 1) + "] = " + std::to_string(rep.differences[i + 1]);
            return rep;
        }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < rep.differences.size(); ++i)
        acc += std::log(rep.differences[i] / rep.differences[i + 1]) / std::log(ratio);
    rep.order = acc / static_cast<double>(rep.differences.size() - 1);
    rep.fitted = true;
    return rep;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().a.size();
    os << "t,E,Et,D,phase_norm";
    for (std::size_t j = 1; j <= n; ++j) os << ",a_" << j;
    for (std::size_t j = 1; j <= n; ++j) os << ",b_" << j;
    os << '\n';
    os << std::setprecision(17);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double et = traj.modified.empty() ? std::nan("") : traj.modified[i];
        os << traj.times[i] << ',' << traj.energy[i] << ',' << et << ',' << traj.dissipation[i] << ','
           << traj.phase_norm[i];
        for (double v : traj.states[i].a) os << ',' << v;
        for (double v : traj.states[i].b) os << ',' << v;
        os << '\n';
    }
}

}  // namespace nlbeam
