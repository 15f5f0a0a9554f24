#include "nlbeam/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "nlbeam/entropy.hpp"
#include "nlbeam/errors.hpp"
#include "nlbeam/functionals.hpp"
#include "nlbeam/inequalities.hpp"
#include "nlbeam/initial_data.hpp"
#include "nlbeam/stationary.hpp"

namespace nlbeam {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size()) throw InvalidConfiguration("malformed number list: " + text);
        out.push_back(v);
    }
    if (out.empty()) throw InvalidConfiguration("empty number list");
    return out;
}

// Columns of equal length written with full double precision.
void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<const std::vector<double>*>& cols) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n' << std::setprecision(17);
    const std::size_t rows = cols.empty() ? 0 : cols.front()->size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << (*cols[c])[i];
        os << '\n';
    }
}

class Output {
public:
    Output(const RunContext& ctx, ExperimentReport& report) : report_(report) {
        dir_ = ctx.run_dir(report.id, report.seed);
    }
    bool enabled() const { return !dir_.empty(); }

    void columns(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<const std::vector<double>*>& cols) {
        if (!enabled()) return;
        write_columns(dir_ / name, header, cols);
        report_.artifacts.push_back(name);
    }
    void trajectory(const std::string& name, const Trajectory& traj) {
        if (!enabled()) return;
        std::ofstream os(dir_ / name);
        write_trajectory_csv(os, traj);
        report_.artifacts.push_back(name);
    }
    void finish() {
        if (!enabled()) return;
        std::ofstream os(dir_ / "report.txt");
        os << report_.render();
    }

private:
    ExperimentReport& report_;
    std::filesystem::path dir_;
};

ExperimentReport start_report(const ExperimentSetup& setup) {
    ExperimentReport r;
    r.id = setup.id;
    r.seed = setup.seed;
    return r;
}

double omega_of(const SpectralModel& model, const SourceLaw& source) {
    return default_assumption_constants(source, model.sigma()[0]).omega();
}

bool relative_close(double x, double y, double factor) {
    if (x == 0.0 && y == 0.0) return true;
    if (x <= 0.0 || y <= 0.0) return false;
    return std::max(x / y, y / x) <= factor;
}

template <class Law>
const Law& require_law(const DampingLaw& law, const char* what) {
    if (!std::holds_alternative<Law>(law)) throw InvalidConfiguration(std::string(what));
    return std::get<Law>(law);
}

}  // namespace

// ---------------------------------------------------------------- setup

SpectralModel ExperimentSetup::model() const {
    return build_model(n_modes, length, kappa, quad_points > 0 ? quad_points : 8 * n_modes);
}

Forcing ExperimentSetup::forcing() const {
    Forcing f = Forcing::zero(n_modes);
    f.lambda = lambda;
    if (!h.empty()) {
        if (static_cast<int>(h.size()) != n_modes) throw LengthMismatch("forcing h", n_modes, h.size());
        f.h = h;
    }
    return f;
}

ModalState ExperimentSetup::initial_state(const SpectralModel& model) const {
    switch (initial.kind) {
    case InitialSpec::Kind::Zero:
        return ModalState::zero(model.n_modes());
    case InitialSpec::Kind::Mode:
        return mode_state(model, initial.mode, initial.amplitude);
    case InitialSpec::Kind::Random:
        break;
    }
    return random_state(model, source, forcing(), seed, initial.energy);
}

double ExperimentSetup::num(const std::string& key) const {
    auto it = params.find(key);
    if (it != params.end()) return std::stod(it->second);
    if (const auto* info = find_experiment(id))
        for (const auto& p : info->params)
            if (p.key == key) return std::stod(p.default_value);
    throw InvalidConfiguration("missing experiment parameter: " + key);
}

long ExperimentSetup::integer(const std::string& key) const {
    const double v = num(key);
    if (v != std::floor(v)) throw InvalidConfiguration("parameter " + key + " must be an integer");
    return static_cast<long>(v);
}

std::vector<double> ExperimentSetup::list(const std::string& key) const {
    auto it = params.find(key);
    if (it != params.end()) return parse_list(it->second);
    if (const auto* info = find_experiment(id))
        for (const auto& p : info->params)
            if (p.key == key) return parse_list(p.default_value);
    throw InvalidConfiguration("missing experiment parameter: " + key);
}

// ---------------------------------------------------------------- report

bool ExperimentReport::passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
}

void ExperimentReport::check(std::string name, bool pass, std::string detail) {
    criteria.push_back({std::move(name), pass, std::move(detail)});
}

std::string ExperimentReport::render() const {
    std::ostringstream os;
    os << "experiment: " << id << "\nseed: " << seed << '\n';
    for (const auto& c : criteria) os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
    os << std::setprecision(17);
    for (const auto& [k, v] : fitted) os << "fitted " << k << " = " << v << '\n';
    for (const auto& a : artifacts) os << "artifact: " << a << '\n';
    os << "result: " << (passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
}

std::filesystem::path RunContext::run_dir(const std::string& id, std::uint64_t seed) const {
    if (output_dir.empty()) return {};
    auto dir = output_dir / (id + "-seed" + std::to_string(seed));
    std::filesystem::create_directories(dir);
    return dir;
}

Criterion lyapunov_check(const SpectralModel& model, const Trajectory& traj, double omega,
                         const std::string& label) {
    Criterion c{"lyapunov " + label, false, ""};
    if (traj.modified.empty()) {
        c.detail = "K_lambda unavailable";
        return c;
    }
    const double res = energy_identity_residual(traj);
    const double scale = std::max(1.0, std::abs(traj.energy.front()));
    const double tol = 1e-12 * std::max(1.0, std::abs(traj.modified.front())) + 10.0 * res * scale;
    double worst_rise = 0.0;
    double worst_coercive = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (i > 0) worst_rise = std::max(worst_rise, traj.modified[i] - traj.modified[i - 1]);
        const double p = traj.phase_norm[i];
        worst_coercive = std::max(worst_coercive, 0.25 * omega * p * p - traj.modified[i]);
    }
    (void)model;
    const bool mono = worst_rise <= tol;
    const bool coercive = worst_coercive <= 1e-12 * std::max(1.0, traj.modified.front());
    c.pass = mono && coercive;
    c.detail = "max rise " + fmt(worst_rise) + " (tol " + fmt(tol) + "), max (omega/4)|U|^2 - Et " +
               fmt(worst_coercive);
    return c;
}

// ---------------------------------------------------------------- k1

ExperimentReport exp_k1_decay(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    const auto& law = require_law<K1Monomial>(setup.damping, "exp_k1_decay requires a k1 damping law");
    const auto model = setup.model();
    const auto forcing = setup.forcing();
    const auto u0 = setup.initial_state(model);
    const auto constants = default_assumption_constants(setup.source, model.sigma()[0]);
    const double omega = constants.omega();

    // the coarse step is checked against a fine one on a short window first
    const double dt_ref = setup.num("validate_dt");
    const double t_val = setup.num("validate_horizon");
    if (setup.integ.dt > dt_ref) {
        IntegratorConfig coarse = setup.integ;
        coarse.horizon = t_val;
        coarse.sample_stride = 1;
        IntegratorConfig fine = coarse;
        fine.dt = dt_ref;
        fine.sample_stride = static_cast<int>(std::lround(coarse.dt / dt_ref));
        auto fa = std::async(std::launch::async,
                             [&] { return integrate(model, setup.source, setup.damping, forcing, u0, coarse); });
        const auto tf = integrate(model, setup.source, setup.damping, forcing, u0, fine);
        const auto tc = fa.get();
        double worst = 0.0;
        const std::size_t n = std::min(tc.size(), tf.size());
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(tc.energy[i] - tf.energy[i]) /
                                        std::max(std::abs(tf.energy[i]), 1e-300));
        const double tol = setup.num("validate_tol");
        report.check("step validation", worst <= tol,
                     "max relative energy gap dt=" + fmt(coarse.dt) + " vs dt=" + fmt(dt_ref) + " on [0, " +
                         fmt(t_val) + "]: " + fmt(worst) + " (tol " + fmt(tol) + ")");
    }

    const auto traj = integrate(model, setup.source, setup.damping, forcing, u0, setup.integ);
    const double res = energy_identity_residual(traj);
    report.fit("energy_identity_residual", res);
    report.check("energy identity", res <= setup.num("identity_tol"),
                 "residual " + fmt(res) + " (tol " + fmt(setup.num("identity_tol")) + ")");

    const auto& Et = traj.modified;
    const auto P = envelope_constants(law.q, law.gamma, setup.integ.alpha, model, constants, forcing, Et.front());
    report.fit("C_lower", P.C_lower);
    report.fit("C_bar", P.C_bar);
    report.fit("C_upper", P.C_upper);
    report.fit("K_lambda", P.K_lambda);
    const double slack = setup.num("envelope_slack");
    std::vector<double> lower(traj.size()), upper(traj.size());
    double worst_lo = std::numeric_limits<double>::infinity();
    double worst_hi = std::numeric_limits<double>::infinity();
    std::size_t bad = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto env = decay_envelopes(P, traj.times[i]);
        lower[i] = env.lower;
        upper[i] = env.upper;
        worst_lo = std::min(worst_lo, Et[i] / env.lower);
        worst_hi = std::min(worst_hi, env.upper / Et[i]);
        if (!(env.lower * (1.0 - slack) <= Et[i] && Et[i] <= env.upper * (1.0 + slack))) ++bad;
    }
    report.check("envelopes", bad == 0,
                 std::to_string(bad) + " samples outside; min Et/lower " + fmt(worst_lo) + ", min upper/Et " +
                     fmt(worst_hi) + " (slack " + fmt(slack) + ")");

    const double ta = setup.num("fit_from"), tb = setup.num("fit_to");
    const double tol = setup.num("slope_tolerance");
    const auto fe = fit_power_rate(traj.modified_series(), ta, tb);
    const auto fp = fit_power_rate(traj.phase_norm_series(), ta, tb);
    report.fit("slope_E", fe.slope);
    report.fit("slope_phase_norm", fp.slope);
    const double want_e = -1.0 / law.q, want_p = -1.0 / (2.0 * law.q);
    report.check("energy slope", std::abs(fe.slope - want_e) <= tol * std::abs(want_e),
                 "slope " + fmt(fe.slope) + " vs " + fmt(want_e) + " (r2 " + fmt(fe.r2) + ")");
    report.check("phase norm slope", std::abs(fp.slope - want_p) <= tol * std::abs(want_p),
                 "slope " + fmt(fp.slope) + " vs " + fmt(want_p) + " (r2 " + fmt(fp.r2) + ")");
    report.criteria.push_back(lyapunov_check(model, traj, omega, "trajectory"));

    out.columns("series.csv", {"t", "E", "Et", "D", "phase_norm", "lower", "upper"},
                {&traj.times, &traj.energy, &traj.modified, &traj.dissipation, &traj.phase_norm, &lower, &upper});
    out.finish();
    return report;
}

// ---------------------------------------------------------------- k2

ExperimentReport exp_k2_exponential(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    require_law<K2Positive>(setup.damping, "exp_k2_exponential requires a k2 damping law");
    const auto model = setup.model();
    const auto forcing = setup.forcing();
    const auto u0 = setup.initial_state(model);
    const double omega = omega_of(model, setup.source);
    const auto traj = integrate(model, setup.source, setup.damping, forcing, u0, setup.integ);
    const double K = *traj.K_lambda;
    const double ta = setup.num("fit_from"), tb = setup.num("fit_to");

    if (is_zero(setup.source) && forcing.vanishes()) {
        const auto f = fit_exp_rate(traj.energy_series(), ta, tb);
        report.fit("rate", f.rate);
        report.fit("amplitude", f.amplitude);
        report.fit("r2", f.r2);
        const double r2_min = setup.num("r2_min");
        report.check("exponential fit", f.r2 >= r2_min && f.rate > 0.0,
                     "rate " + fmt(f.rate) + ", r2 " + fmt(f.r2) + " (min " + fmt(r2_min) + ")");
    } else {
        // (C, c) with E~(t) <= C E~(0) exp(-c t) + 8 K_lambda at every sample
        const double floor = 8.0 * K;
        const double E0 = traj.modified.front();
        std::vector<double> x, y;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double excess = traj.modified[i] - floor;
            if (excess > 1e-12 * E0 && traj.times[i] <= tb) {
                x.push_back(traj.times[i]);
                y.push_back(std::log(excess / E0));
            }
        }
        double c = 0.0, C = 1.0;
        std::string how;
        if (x.size() >= 10) {
            c = -least_squares_line(x, y).slope;
            how = "fitted on " + std::to_string(x.size()) + " samples above the floor";
        } else {
            c = 1.0;
            how = "trajectory stays at or below the floor; any rate is feasible";
        }
        double worst = -std::numeric_limits<double>::infinity();
        if (c > 0.0) {
            C = 0.0;
            for (std::size_t i = 0; i < traj.size(); ++i)
                C = std::max(C, (traj.modified[i] - floor) / (E0 * std::exp(-c * traj.times[i])));
            C = std::max(C, 1e-300);
            for (std::size_t i = 0; i < traj.size(); ++i)
                worst = std::max(worst, traj.modified[i] - (C * E0 * std::exp(-c * traj.times[i]) + floor));
        }
        report.fit("rate", c);
        report.fit("C", C);
        report.fit("K_lambda", K);
        const bool feasible = c > 0.0 && std::isfinite(C) && worst <= 1e-12 * std::max(1.0, E0);
        report.check("forced exponential fit", feasible,
                     how + "; c " + fmt(c) + ", C " + fmt(C) + ", max residual " + fmt(worst));
        report.check("terminal floor", traj.modified.back() <= floor,
                     "Et(T) " + fmt(traj.modified.back()) + " vs 8 K_lambda " + fmt(floor));
        const double p = traj.phase_norm.back();
        report.check("absorbing ball", p * p <= 64.0 * K / omega,
                     "|U(T)|^2 " + fmt(p * p) + " vs 64 K_lambda / omega " + fmt(64.0 * K / omega));
    }
    report.criteria.push_back(lyapunov_check(model, traj, omega, "trajectory"));
    out.columns("series.csv", {"t", "E", "Et", "D", "phase_norm"},
                {&traj.times, &traj.energy, &traj.modified, &traj.dissipation, &traj.phase_norm});
    out.finish();
    return report;
}

// ---------------------------------------------------------------- k3

namespace {

std::vector<double> uniform_draws(std::uint64_t seed, std::size_t n, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> out(n);
    for (auto& v : out) v = u(rng);
    return out;
}

struct BallRun {
    Trajectory traj;
    double two_e0 = 0.0;
};

// Random start rescaled so that 2E(0) = target.
BallRun ball_run(const SpectralModel& model, const ExperimentSetup& setup, std::uint64_t seed, double target,
                 IntegratorConfig cfg) {
    const auto forcing = setup.forcing();
    const auto u0 = random_state(model, setup.source, forcing, seed, 0.5 * target);
    return {integrate(model, setup.source, setup.damping, forcing, u0, cfg), target};
}

}  // namespace

ExperimentReport exp_k3_ball(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    require_law<K3Threshold>(setup.damping, "exp_k3_ball requires a k3 damping law");
    if (!is_zero(setup.source) || !setup.forcing().vanishes())
        throw InvalidConfiguration("exp_k3_ball requires f = 0 and h = 0");
    const auto model = setup.model();
    if (setup.kappa != 0.0) report.fit("experimental_kappa", setup.kappa);

    const long n_in = setup.integer("inside_count"), n_out = setup.integer("outside_count");
    auto inside_targets = uniform_draws(setup.seed * 7919 + 1, n_in, 0.05, 1.0);
    if (n_in > 0) inside_targets.back() = 1.0;  // the threshold itself
    const auto outside_targets =
        uniform_draws(setup.seed * 7919 + 2, n_out, setup.num("outside_min"), setup.num("outside_max"));

    IntegratorConfig cin = setup.integ;
    cin.horizon = setup.num("inside_horizon");
    std::vector<std::future<BallRun>> jobs;
    for (long i = 0; i < n_in; ++i)
        jobs.push_back(std::async(std::launch::async, ball_run, std::cref(model), std::cref(setup),
                                  setup.seed * 1000 + i, inside_targets[i], cin));
    for (long i = 0; i < n_out; ++i)
        jobs.push_back(std::async(std::launch::async, ball_run, std::cref(model), std::cref(setup),
                                  setup.seed * 1000 + 500 + i, outside_targets[i], setup.integ));

    const double drift_tol = setup.num("drift_tol");
    const double ball_tol = setup.num("ball_tol");
    double worst_drift = 0.0, worst_final = 0.0, worst_rise = 0.0, latest_hit = 0.0;
    bool all_hit = true, lyap = true;
    std::string lyap_detail;
    std::vector<double> col_t0, col_tT, col_hit;
    for (long i = 0; i < n_in + n_out; ++i) {
        const auto run = jobs[i].get();
        const auto& tr = run.traj;
        const auto lc = lyapunov_check(model, tr, 1.0, "run " + std::to_string(i));
        if (!lc.pass) {
            lyap = false;
            lyap_detail = lc.detail;
        }
        const double e0 = tr.energy.front();
        if (i < n_in) {
            for (double e : tr.energy) worst_drift = std::max(worst_drift, std::abs(e - e0) / e0);
            col_t0.push_back(2.0 * e0);
            col_tT.push_back(2.0 * tr.energy.back());
            col_hit.push_back(0.0);
            continue;
        }
        double hit = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < tr.size(); ++k) {
            if (k > 0) worst_rise = std::max(worst_rise, (tr.energy[k] - tr.energy[k - 1]) / e0);
            if (!std::isfinite(hit) && std::abs(2.0 * tr.energy[k] - 1.0) <= ball_tol) hit = tr.times[k];
        }
        worst_final = std::max(worst_final, std::abs(2.0 * tr.energy.back() - 1.0));
        all_hit = all_hit && std::isfinite(hit);
        latest_hit = std::max(latest_hit, hit);
        col_t0.push_back(2.0 * e0);
        col_tT.push_back(2.0 * tr.energy.back());
        col_hit.push_back(hit);
    }
    report.check("inside conservation", worst_drift <= drift_tol,
                 "max relative drift " + fmt(worst_drift) + " over " + std::to_string(n_in) + " starts (tol " +
                     fmt(drift_tol) + ")");
    report.check("outside monotone", worst_rise <= 1e-12,
                 "max relative rise of 2E between samples " + fmt(worst_rise));
    report.check("outside convergence", all_hit && worst_final <= ball_tol,
                 "max |2E(T) - 1| " + fmt(worst_final) + ", latest entry time " + fmt(latest_hit) + " (tol " +
                     fmt(ball_tol) + ")");
    report.fit("distance_to_ball_final", std::sqrt(1.0 + worst_final) - 1.0);
    report.check("lyapunov", lyap, lyap ? "all runs" : lyap_detail);
    out.columns("runs.csv", {"two_E0", "two_ET", "entry_time"}, {&col_t0, &col_tT, &col_hit});
    out.finish();
    return report;
}

// ---------------------------------------------------------------- two trajectories

ExperimentReport exp_two_trajectory(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    const auto& law = require_law<K1Monomial>(setup.damping, "exp_two_trajectory requires a k1 damping law");
    const auto model = setup.model();
    const auto forcing = setup.forcing();
    const auto u1 = setup.initial_state(model);
    ExperimentSetup other = setup;
    other.seed = setup.seed + 1;
    other.initial.kind = InitialSpec::Kind::Random;
    const auto u2 = other.initial_state(model);

    auto fb = std::async(std::launch::async,
                         [&] { return integrate(model, setup.source, setup.damping, forcing, u2, setup.integ); });
    const auto t1 = integrate(model, setup.source, setup.damping, forcing, u1, setup.integ);
    const auto t2 = fb.get();

    const double p = growth_exponent(setup.source);
    const double alpha = setup.integ.alpha;
    const std::size_t n = t1.size();
    std::vector<double> d(n), lower(n);
    double d0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto w = difference(t1.states[i], t2.states[i]);
        const double pn = phase_norm(model, w);
        d[i] = pn * pn;
        const double am = frac_norm(model, w.a, Operator::A, alpha);
        lower[i] = am * am + std::pow(lp_norm_pow(model, w.a, p + 2.0), 2.0 / (p + 2.0));
        if (t1.times[i] <= 1.0) d0 = std::max(d0, d[i]);
    }

    const double q = law.q;
    double best_score = std::numeric_limits<double>::infinity(), best_c1 = 0.0, best_c2 = 0.0;
    for (int k = 0; k <= 240; ++k) {
        const double c1 = std::pow(10.0, -4.0 + 12.0 * k / 240.0);
        double c2 = 0.0;
        bool feasible = true;
        std::vector<double> env(n);
        for (std::size_t i = 0; i < n; ++i) {
            env[i] = d0 > 0.0 ? std::pow(q * std::max(t1.times[i] - 1.0, 0.0) / c1 + std::pow(d0, -q), -1.0 / q) : 0.0;
            const double gap = d[i] - env[i];
            if (gap <= 0.0) continue;
            if (lower[i] <= 0.0) {
                feasible = false;
                break;
            }
            c2 = std::max(c2, gap / lower[i]);
        }
        if (!feasible) continue;
        double score = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = (env[i] + c2 * lower[i] - d[i]) / std::max(d0, 1e-300);
            score += s * s;
        }
        if (score < best_score) {
            best_score = score;
            best_c1 = c1;
            best_c2 = c2;
        }
    }
    const bool ok = std::isfinite(best_score);
    report.fit("C1", best_c1);
    report.fit("C2", best_c2);
    report.fit("d_final", d.back());
    report.check("key inequality feasible", ok,
                 ok ? "C1 " + fmt(best_c1) + ", C2 " + fmt(best_c2) + ", sup_[0,1] d " + fmt(d0)
                    : "no (C1, C2) on the search grid bounds d(t)");
    if (t1.K_lambda) {
        const double omega = omega_of(model, setup.source);
        report.criteria.push_back(lyapunov_check(model, t1, omega, "first"));
        report.criteria.push_back(lyapunov_check(model, t2, omega, "second"));
    }
    out.columns("distance.csv", {"t", "d", "lower_order"}, {&t1.times, &d, &lower});
    out.finish();
    return report;
}

// ---------------------------------------------------------------- lambda

ExperimentReport exp_lambda_lipschitz(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    const auto model = setup.model();
    const double lambda0 = setup.num("lambda0");
    const double t_probe = setup.num("t_probe");
    auto grid = setup.list("lambda_grid");
    for (double l : grid)
        if (!(l >= 0.0 && l <= 1.0)) throw DomainError("lambda grid entries must lie in [0, 1]");
    if (!(lambda0 >= 0.0 && lambda0 <= 1.0)) throw DomainError("lambda0 must lie in [0, 1]");
    std::erase_if(grid, [&](double l) { return std::abs(l - lambda0) < 1e-12; });
    if (grid.size() < 2) throw InvalidConfiguration("lambda grid needs two points besides lambda0");

    ExperimentSetup base = setup;
    base.lambda = lambda0;
    const auto u0 = base.initial_state(model);
    IntegratorConfig cfg = setup.integ;
    cfg.horizon = t_probe;

    auto run = [&](double l) {
        ExperimentSetup s = setup;
        s.lambda = l;
        return evolve(model, s.source, s.damping, s.forcing(), u0, cfg);
    };
    std::vector<std::future<ModalState>> jobs;
    for (double l : grid) jobs.push_back(std::async(std::launch::async, run, l));
    const auto ref = run(lambda0);

    std::vector<double> gaps, ratios;
    bool finite = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto s = jobs[i].get();
        const double gap = std::abs(grid[i] - lambda0);
        const double r = phase_norm(model, difference(s, ref)) / gap;
        finite = finite && std::isfinite(r);
        gaps.push_back(gap);
        ratios.push_back(r);
    }
    std::vector<std::size_t> order(grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return gaps[x] < gaps[y]; });
    const double r1 = ratios[order[0]], r2 = ratios[order[1]];
    const double rmax = *std::max_element(ratios.begin(), ratios.end());
    report.fit("max_ratio", rmax);
    report.check("ratios finite", finite, "max ratio " + fmt(rmax));
    report.check("local linearity", relative_close(r1, r2, 2.0),
                 "ratios at the two smallest gaps " + fmt(r1) + ", " + fmt(r2));
    std::vector<double> lambdas(grid.begin(), grid.end());
    out.columns("ratios.csv", {"lambda", "gap", "ratio"}, {&lambdas, &gaps, &ratios});
    out.finish();
    return report;
}

// ---------------------------------------------------------------- decomposition

namespace {

// u = v + z with v linear (damped, forced, initial U0) and z driven by -f(u) from
// zero data. All three share the same kicks and rotations, so the split is exact
// up to rounding.
class SplitFlow {
public:
    SplitFlow(const SpectralModel& model, const SourceLaw& source, const Forcing& forcing, double gamma, double dt)
        : model_(model),
          source_(source),
          gamma_(gamma),
          dt_(dt),
          eq_(model.n_modes()),
          forced_(model, dt, eq_),
          free_(model, dt) {
        for (int j = 0; j < model.n_modes(); ++j) eq_[j] = forcing.lambda * forcing.h[j] / model.omega_sq(j);
        forced_ = LinearRotation(model, dt, eq_);
        zero_.assign(model.n_modes(), 0.0);
    }

    struct State {
        ModalState u, v, z;
    };

    State start(const ModalState& u0) const { return {u0, u0, ModalState::zero(model_.n_modes())}; }

    void step(State& s) {
        const double h = 0.5 * dt_;
        const auto f1 = project_source(model_, source_, s.u.a);
        kick(s.u, f1, h);
        kick(s.v, zero_, h);
        kick(s.z, f1, h);
        forced_.apply(s.u.a, s.u.b);
        forced_.apply(s.v.a, s.v.b);
        free_.apply(s.z.a, s.z.b);
        const auto f2 = project_source(model_, source_, s.u.a);
        kick(s.u, f2, h);
        kick(s.v, zero_, h);
        kick(s.z, f2, h);
        s.u.t += dt_;
        s.v.t += dt_;
        s.z.t += dt_;
    }

    double split_error(const State& s) const {
        ModalState w = s.u;
        for (std::size_t j = 0; j < w.a.size(); ++j) {
            w.a[j] -= s.v.a[j] + s.z.a[j];
            w.b[j] -= s.v.b[j] + s.z.b[j];
        }
        return phase_norm(model_, w);
    }

private:
    void kick(ModalState& s, const Coeffs& F, double h) const {
        for (std::size_t j = 0; j < s.b.size(); ++j) {
            const double mid = s.b[j] + 0.5 * h * (-F[j] - gamma_ * s.b[j]);
            s.b[j] += h * (-F[j] - gamma_ * mid);
        }
    }

    const SpectralModel& model_;
    const SourceLaw& source_;
    double gamma_;
    double dt_;
    Coeffs eq_;
    LinearRotation forced_;
    LinearRotation free_;
    Coeffs zero_;
};

double w_norm(const SpectralModel& model, const ModalState& s, double smooth) {
    double acc = 0.0;
    for (int j = 0; j < model.n_modes(); ++j) {
        const double sig = model.sigma()[j];
        acc += std::pow(sig, smooth / 2.0) * s.a[j] * s.a[j] + std::pow(sig, (smooth - 2.0) / 2.0) * s.b[j] * s.b[j];
    }
    return std::sqrt(acc);
}

}  // namespace

ExperimentReport exp_decomposition(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    if (!is_constant(setup.damping)) throw InvalidConfiguration("exp_decomposition requires constant damping");
    const double gamma = k_eval(setup.damping, 0.0);
    const double smooth = setup.num("smoothing_s");
    if (!(smooth > 0.0 && smooth < 2.0)) throw InvalidConfiguration("smoothing exponent must lie in (0, 2)");
    const auto probes = setup.list("probes");
    const auto model = setup.model();
    for (double j : probes)
        if (j < 1 || j > model.n_modes() || j != std::floor(j))
            throw InvalidConfiguration("probe modes must be integers in [1, n_modes]");
    const auto forcing = setup.forcing();
    const double dt = setup.integ.dt;
    const long steps = std::max(1L, std::lround(setup.integ.horizon / dt));
    const int stride = setup.integ.sample_stride;
    const double amp = setup.num("perturbation");

    const auto u0 = setup.initial_state(model);
    ExperimentSetup other = setup;
    other.seed = setup.seed + 1;
    other.initial.kind = InitialSpec::Kind::Random;
    const auto u0b = other.initial_state(model);

    // base run: sampled z plus the split error
    struct Base {
        std::vector<ModalState> z;
        std::vector<double> t;
        double split = 0.0;
    };
    auto run_base = [&] {
        SplitFlow flow(model, setup.source, forcing, gamma, dt);
        auto s = flow.start(u0);
        Base b;
        b.z.push_back(s.z);
        b.t.push_back(0.0);
        for (long n = 1; n <= steps; ++n) {
            flow.step(s);
            b.split = std::max(b.split, flow.split_error(s));
            if (n % stride == 0) {
                b.z.push_back(s.z);
                b.t.push_back(s.u.t);
            }
        }
        return b;
    };
    // contraction of the linear part: v^1 - v^2 series
    auto run_pair = [&] {
        SplitFlow fa(model, setup.source, forcing, gamma, dt), fb(model, setup.source, forcing, gamma, dt);
        auto sa = fa.start(u0), sb = fb.start(u0b);
        const double d0 = phase_norm(model, difference(u0, u0b));
        SampledSeries ser;
        double split = 0.0;
        for (long n = 1; n <= steps; ++n) {
            fa.step(sa);
            fb.step(sb);
            split = std::max({split, fa.split_error(sa), fb.split_error(sb)});
            if (n % stride == 0) {
                ser.t.push_back(sa.v.t);
                ser.y.push_back(phase_norm(model, difference(sa.v, sb.v)) / d0);
            }
        }
        return std::make_pair(ser, split);
    };
    auto base_job = std::async(std::launch::async, run_base);
    auto pair_job = std::async(std::launch::async, run_pair);
    const Base base = base_job.get();

    std::vector<std::future<std::pair<double, double>>> probe_jobs;
    for (double jd : probes) {
        const int j = static_cast<int>(jd);
        probe_jobs.push_back(std::async(std::launch::async, [&, j] {
            ModalState pert = u0;
            const double delta = amp / std::sqrt(model.sigma()[j - 1]);
            pert.a[j - 1] += delta;
            ModalState diff0 = ModalState::zero(model.n_modes());
            diff0.a[j - 1] = delta;
            const double wn = w_norm(model, diff0, smooth);
            SplitFlow flow(model, setup.source, forcing, gamma, dt);
            auto s = flow.start(pert);
            double sup = 0.0, split = 0.0;
            std::size_t k = 1;
            for (long n = 1; n <= steps; ++n) {
                flow.step(s);
                split = std::max(split, flow.split_error(s));
                if (n % stride == 0) sup = std::max(sup, phase_norm(model, difference(s.z, base.z[k++])) / wn);
            }
            return std::make_pair(sup, split);
        }));
    }
    double split = base.split;
    std::vector<double> ratios;
    for (auto& job : probe_jobs) {
        const auto [sup, err] = job.get();
        ratios.push_back(sup);
        split = std::max(split, err);
    }
    const auto [contraction, pair_split] = pair_job.get();
    split = std::max(split, pair_split);

    const double split_tol = setup.num("split_tol");
    report.fit("split_error", split);
    report.check("u = v + z", split <= split_tol, "max |u - (v + z)|_H " + fmt(split) + " (tol " + fmt(split_tol) + ")");

    const double fa = setup.num("fit_from");
    const auto fit = fit_exp_rate(contraction, fa, setup.integ.horizon);
    report.fit("contraction_rate", fit.rate);
    report.check("linear contraction", fit.rate > 0.0, "rate " + fmt(fit.rate) + ", r2 " + fmt(fit.r2));

    const double rmax = *std::max_element(ratios.begin(), ratios.end());
    const double rmin = *std::min_element(ratios.begin(), ratios.end());
    const double spread = rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
    const double spread_tol = setup.num("smoothing_spread");
    report.fit("smoothing_spread", spread);
    std::string detail = "ratios";
    for (std::size_t i = 0; i < ratios.size(); ++i) detail += " j=" + fmt(probes[i]) + ":" + fmt(ratios[i]);
    report.check("smoothing", spread <= spread_tol, detail + "; max/min " + fmt(spread) + " (tol " + fmt(spread_tol) + ")");

    std::vector<double> probe_col(probes.begin(), probes.end());
    out.columns("smoothing.csv", {"mode", "ratio"}, {&probe_col, &ratios});
    out.columns("contraction.csv", {"t", "ratio"}, {&contraction.t, &contraction.y});
    out.finish();
    return report;
}

// ---------------------------------------------------------------- entropy

namespace {

std::vector<std::vector<double>> circle_cloud(long n) {
    std::vector<std::vector<double>> pts;
    for (long i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({std::cos(th), 0.0, std::sin(th), 0.0});
    }
    return pts;
}

// Flat torus: two unit circles in the (a_1, b_1) and (a_2, b_2) planes of the
// phase norm (a_2 is scaled by sigma_2^{-1/2}).
std::vector<std::vector<double>> torus_cloud(long side, double sigma2) {
    std::vector<std::vector<double>> pts;
    const double s = 1.0 / std::sqrt(sigma2);
    for (long i = 0; i < side; ++i)
        for (long k = 0; k < side; ++k) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(side);
            const double ph = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(side);
            pts.push_back({std::cos(th), s * std::cos(ph), std::sin(th), std::sin(ph)});
        }
    return pts;
}

}  // namespace

ExperimentReport exp_entropy(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    const auto plane = build_model(2);
    const auto w = phase_weights(plane);

    const auto circle = box_count_entropy(circle_cloud(setup.integer("circle_points")), setup.list("circle_eps"), w);
    const double tol1 = setup.num("circle_tol");
    report.fit("circle_dimension", circle.dimension);
    report.check("circle dimension", std::abs(circle.dimension - 1.0) <= tol1,
                 "estimate " + fmt(circle.dimension) + " (tol " + fmt(tol1) + ")");

    const auto torus =
        box_count_entropy(torus_cloud(setup.integer("torus_side"), plane.sigma()[1]), setup.list("torus_eps"), w);
    const double tol2 = setup.num("torus_tol");
    report.fit("torus_dimension", torus.dimension);
    report.check("torus dimension", std::abs(torus.dimension - 2.0) <= tol2,
                 "estimate " + fmt(torus.dimension) + " (tol " + fmt(tol2) + ")");

    // end states of the threshold-damped flow from outside the unit ball
    const long n_cloud = setup.integer("cloud_count");
    if (n_cloud > 0) {
        if (!std::holds_alternative<K3Threshold>(setup.damping))
            throw InvalidConfiguration("exp_entropy cloud requires a k3 damping law");
        const auto model = setup.model();
        const auto targets = uniform_draws(setup.seed * 7919 + 3, n_cloud, 2.0, 8.0);
        std::vector<std::future<ModalState>> jobs;
        for (long i = 0; i < n_cloud; ++i)
            jobs.push_back(std::async(std::launch::async, [&, i] {
                const auto u0 = random_state(model, setup.source, setup.forcing(), setup.seed * 1000 + 700 + i,
                                             0.5 * targets[i]);
                return evolve(model, setup.source, setup.damping, setup.forcing(), u0, setup.integ);
            }));
        double worst = 0.0;
        for (auto& j : jobs) {
            const auto s = j.get();
            const double p = phase_norm(model, s);
            worst = std::max(worst, std::abs(p * p - 1.0));
        }
        const double tol = setup.num("sphere_tol");
        report.check("end states on the unit sphere", worst <= tol,
                     "max |2E - 1| " + fmt(worst) + " over " + std::to_string(n_cloud) + " runs (tol " + fmt(tol) + ")");
    }
    std::vector<double> ce, ch, te, th;
    for (std::size_t i = 0; i < circle.eps.size(); ++i) {
        ce.push_back(circle.eps[i]);
        ch.push_back(circle.entropy[i]);
    }
    for (std::size_t i = 0; i < torus.eps.size(); ++i) {
        te.push_back(torus.eps[i]);
        th.push_back(torus.entropy[i]);
    }
    out.columns("circle.csv", {"eps", "H"}, {&ce, &ch});
    out.columns("torus.csv", {"eps", "H"}, {&te, &th});
    out.finish();
    return report;
}

// ---------------------------------------------------------------- inequality suites

ExperimentReport nakao_suite(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    const long trials = setup.integer("trials");
    std::vector<double> rhos = setup.list("rhos"), viol, skip, worst;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        const auto s = run_nakao_suite(setup.seed + i, trials, rhos[i]);
        viol.push_back(static_cast<double>(s.violations));
        skip.push_back(static_cast<double>(s.skipped));
        worst.push_back(s.worst);
        report.check("rho = " + fmt(rhos[i]), s.violations == 0 && s.skipped == 0,
                     std::to_string(s.violations) + " violations, " + std::to_string(s.skipped) +
                         " hypothesis failures in " + std::to_string(s.trials) + " trials; worst margin " +
                         fmt(s.worst));
    }
    out.columns("nakao.csv", {"rho", "violations", "hypothesis_failures", "worst_margin"},
                {&rhos, &viol, &skip, &worst});
    out.finish();
    return report;
}

ExperimentReport haraux_suite(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    const auto s = run_haraux_suite(setup.seed, setup.integer("trials"));
    report.fit("worst_lhs_minus_rhs", s.worst);
    report.check("power-difference bound", s.violations == 0,
                 std::to_string(s.violations) + " violations in " + std::to_string(s.trials) +
                     " triples; worst lhs - rhs " + fmt(s.worst));
    out.finish();
    return report;
}

// ---------------------------------------------------------------- stationary

namespace {

Coeffs scaled_start(const SpectralModel& model, std::uint64_t seed, double scale) {
    const auto g = gaussian_state(model, seed);
    const Coeffs zeros(model.n_modes(), 0.0);
    const double n = std::sqrt(phase_norm_sq(model, g.a, zeros));
    Coeffs c = g.a;
    for (auto& x : c) x *= scale / n;
    return c;
}

}  // namespace

ExperimentReport stationary_suite(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    const auto model = setup.model();
    const auto forcing = setup.forcing();
    const double tol = setup.num("tol");
    const int max_iter = static_cast<int>(setup.integer("max_iter"));
    const double far = setup.num("far_scale");
    const bool expect_negative = setup.num("expect_negative") != 0.0;

    const auto main = minimize_functional(model, setup.source, forcing, scaled_start(model, setup.seed, far), tol,
                                          max_iter);
    report.fit("I", main.functional_value);
    report.fit("residual", main.residual);
    report.check("converged", main.converged && main.residual <= tol,
                 "residual " + fmt(main.residual) + " after " + std::to_string(main.iterations) + " iterations");
    if (expect_negative)
        report.check("negative energy", main.functional_value < 0.0, "I(u*) = " + fmt(main.functional_value));

    const auto constants = default_assumption_constants(setup.source, model.sigma()[0]);
    const auto bound = stationary_bound_check(model, constants, forcing, main);
    report.check("stationary bound", bound.ok,
                 "lhs " + fmt(bound.lhs) + " <= rhs " + fmt(bound.rhs) + " using " + bound.constants_used);

    // near-zero and far starts
    std::vector<Coeffs> starts;
    const long n_starts = setup.integer("starts");
    for (long i = 0; i < n_starts; ++i)
        starts.push_back(scaled_start(model, setup.seed * 100 + i, i % 2 == 0 ? 1e-3 : far));
    const auto found = multistart(model, setup.source, forcing, starts, tol, max_iter);
    report.fit("distinct_stationary_points", static_cast<double>(found.size()));
    if (expect_negative)
        report.check("two equilibria", found.size() >= 2,
                     std::to_string(found.size()) + " distinct stationary points from " + std::to_string(n_starts) +
                         " starts");

    // without the focusing term only the trivial state survives
    if (std::holds_alternative<DoublePower>(setup.source) && forcing.vanishes()) {
        auto law = std::get<DoublePower>(setup.source);
        law.sigma = 0.0;
        std::vector<Coeffs> s0;
        for (long i = 0; i < n_starts; ++i)
            s0.push_back(scaled_start(model, setup.seed * 100 + 50 + i, std::pow(10.0, -2.0 + 4.0 * i / std::max(1L, n_starts - 1))));
        const auto triv = multistart(model, SourceLaw{law}, forcing, s0, tol, max_iter);
        const Coeffs zeros(model.n_modes(), 0.0);
        const bool only_zero =
            triv.size() == 1 && std::sqrt(phase_norm_sq(model, triv.front().coeffs, zeros)) < 1e-4;
        report.check("trivial stationary set without focusing", only_zero,
                     std::to_string(triv.size()) + " distinct point(s) from " + std::to_string(n_starts) + " starts");
    }

    if (out.enabled()) {
        std::vector<std::string> header{"lambda", "I", "residual"};
        for (int j = 1; j <= model.n_modes(); ++j) header.push_back("c_" + std::to_string(j));
        std::vector<std::vector<double>> cols(header.size());
        for (const auto& r : found) {
            cols[0].push_back(setup.lambda);
            cols[1].push_back(r.functional_value);
            cols[2].push_back(r.residual);
            for (int j = 0; j < model.n_modes(); ++j) cols[3 + j].push_back(r.coeffs[j]);
        }
        std::vector<const std::vector<double>*> ptrs;
        for (const auto& c : cols) ptrs.push_back(&c);
        out.columns("stationary.csv", header, ptrs);
    }
    out.finish();
    return report;
}

// ---------------------------------------------------------------- simulate

ExperimentReport simulate(const ExperimentSetup& setup, const RunContext& ctx) {
    auto report = start_report(setup);
    Output out(ctx, report);
    const auto model = setup.model();
    const auto forcing = setup.forcing();
    const auto traj = integrate(model, setup.source, setup.damping, forcing, setup.initial_state(model), setup.integ);
    const double res = energy_identity_residual(traj);
    report.fit("energy_identity_residual", res);
    report.fit("E_final", traj.energy.back());
    if (traj.K_lambda) {
        report.criteria.push_back(lyapunov_check(model, traj, omega_of(model, setup.source), "trajectory"));
    } else {
        report.check("lyapunov trajectory", true, "not checked: source constants inadmissible (c_f >= sigma_1)");
    }
    out.trajectory("trajectory.csv", traj);
    out.finish();
    return report;
}

// ---------------------------------------------------------------- registry

namespace {

ExperimentSetup reference(std::string id, int n, DampingLaw law, double dt, double horizon, int stride) {
    ExperimentSetup s;
    s.id = std::move(id);
    s.n_modes = n;
    s.damping = law;
    s.integ.dt = dt;
    s.integ.horizon = horizon;
    s.integ.sample_stride = stride;
    return s;
}

std::vector<ExperimentInfo> build_registry() {
    std::vector<ExperimentInfo> r;
    r.push_back({"exp_k1_decay",
                 "monomial damping k = gamma s^q: two-sided polynomial envelope and fitted decay slopes",
                 "energy decays like t^{-1/q} between explicit envelopes; phase norm like t^{-1/(2q)}",
                 {{"fit_from", "100", "start of the log-log fitting window"},
                  {"fit_to", "10000", "end of the log-log fitting window"},
                  {"slope_tolerance", "0.15", "relative tolerance on fitted slopes"},
                  {"envelope_slack", "0.02", "relative slack on both envelopes"},
                  {"identity_tol", "1e-4", "energy identity residual bound"},
                  {"validate_dt", "1e-3", "reference step for the step validation"},
                  {"validate_horizon", "50", "window of the step validation"},
                  {"validate_tol", "1e-3", "relative energy gap allowed by the step validation"}},
                 [] { return reference("exp_k1_decay", 32, K1Monomial{1.0, 1.0}, 1e-2, 1e4, 100); },
                 exp_k1_decay});
    r.push_back({"exp_k2_exponential",
                 "strictly positive damping: exponential decay, or decay to the 8 K_lambda floor when forced",
                 "E~(t) <= C E~(0) exp(-c t) + 8 K_lambda",
                 {{"fit_from", "10", "start of the exponential fitting window"},
                  {"fit_to", "80", "end of the exponential fitting window"},
                  {"r2_min", "0.999", "minimum coefficient of determination"}},
                 [] { return reference("exp_k2_exponential", 16, K2Positive{}, 1e-2, 100, 10); },
                 exp_k2_exponential});
    r.push_back({"exp_k3_ball",
                 "threshold damping: the closed unit energy ball attracts and is conserved inside",
                 "2E(t) is constant for 2E(0) <= 1 and decreases to 1 otherwise",
                 {{"inside_count", "10", "starts with 2E(0) in (0, 1]"},
                  {"outside_count", "10", "starts with 2E(0) > 1"},
                  {"outside_min", "2", "smallest 2E(0) outside"},
                  {"outside_max", "8", "largest 2E(0) outside"},
                  {"inside_horizon", "100", "horizon of the inside runs"},
                  {"drift_tol", "1e-10", "relative energy drift allowed inside"},
                  {"ball_tol", "1e-3", "tolerance on |2E(T) - 1|"}},
                 [] {
                     auto s = reference("exp_k3_ball", 16, K3Threshold{}, 1e-2, 1000, 10);
                     s.integ.alpha = 1.0;
                     return s;
                 },
                 exp_k3_ball});
    r.push_back({"exp_two_trajectory",
                 "distance of two monomial-damped trajectories against the key inequality shape",
                 "d(t) <= [C1^{-1} q (t-1)^+ + d0^{-q}]^{-1/q} + C2 (lower-order terms) is feasible",
                 {},
                 [] { return reference("exp_two_trajectory", 16, K1Monomial{1.0, 1.0}, 1e-2, 1000, 10); },
                 exp_two_trajectory});
    r.push_back({"exp_lambda_lipschitz",
                 "dependence of trajectories on the forcing intensity",
                 "|S_lambda(t)U0 - S_lambda0(t)U0|_H <= Q(t) |lambda - lambda0|",
                 {{"lambda_grid", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1", "intensities compared"},
                  {"lambda0", "0.5", "reference intensity"},
                  {"t_probe", "10", "comparison time"}},
                 [] {
                     auto s = reference("exp_lambda_lipschitz", 16, K2Positive{}, 1e-3, 10, 1000);
                     s.source = DoublePower{2.0, 1.0, 0.0};
                     s.h.assign(16, 0.0);
                     s.h[0] = 1.0;
                     return s;
                 },
                 exp_lambda_lipschitz});
    r.push_back({"exp_decomposition",
                 "u = v + z splitting under constant damping: exact split, contraction of v, smoothing of z",
                 "the linear part contracts exponentially and the nonlinear part is bounded from W into H",
                 {{"smoothing_s", "1", "exponent s of W = D(A1^{s/4}) x D(A1^{(s-2)/4})"},
                  {"probes", "4,8,16,32", "modes carrying the initial differences"},
                  {"perturbation", "1e-3", "H-norm of each initial difference"},
                  {"split_tol", "1e-9", "bound on |u - (v + z)|_H"},
                  {"smoothing_spread", "10", "bound on max/min of the smoothing ratios"},
                  {"fit_from", "1", "start of the contraction fitting window"}},
                 [] {
                     auto s = reference("exp_decomposition", 32, K2Positive{}, 1e-3, 20, 10);
                     s.source = DoublePower{2.0, 1.0, 0.0};
                     return s;
                 },
                 exp_decomposition});
    r.push_back({"exp_entropy",
                 "covering-number entropy and dimension estimates",
                 "H_eps scales like d ln(1/eps) on d-dimensional sets; threshold-damped end states lie on 2E = 1",
                 {{"circle_points", "10000", "points on the unit circle"},
                  {"circle_eps", "0.2,0.1,0.05,0.025,0.0125", "radii for the circle"},
                  {"circle_tol", "0.2", "tolerance on the circle dimension"},
                  {"torus_side", "100", "lattice points per torus direction"},
                  {"torus_eps", "0.8,0.6,0.45,0.3,0.2", "radii for the torus"},
                  {"torus_tol", "0.3", "tolerance on the torus dimension"},
                  {"cloud_count", "20", "threshold-damped runs whose end states are checked"},
                  {"sphere_tol", "1e-3", "tolerance on |2E - 1| of the end states"}},
                 [] {
                     auto s = reference("exp_entropy", 8, K3Threshold{}, 1e-2, 100, 100);
                     s.integ.alpha = 1.0;
                     return s;
                 },
                 exp_entropy});
    r.push_back({"nakao_suite",
                 "randomized check of the generalized Nakao lemma",
                 "the window hypothesis implies polynomial (rho > 0) or geometric (rho = 0) decay to the K floor",
                 {{"trials", "1000", "problems per rho"}, {"rhos", "0,0.5,1,2", "exponents tested"}},
                 [] {
                     auto s = reference("nakao_suite", 1, K1Monomial{}, 1e-3, 1, 1);
                     return s;
                 },
                 nakao_suite});
    r.push_back({"haraux_suite",
                 "randomized check of the power-difference bound",
                 "| |u|^r - |v|^r | <= r max(|u|, |v|)^{r-1} |u - v| for r >= 1",
                 {{"trials", "100000", "random triples (u, v, r)"}},
                 [] { return reference("haraux_suite", 1, K1Monomial{}, 1e-3, 1, 1); },
                 haraux_suite});
    r.push_back({"stationary",
                 "stationary states by minimizing the Euler-Lagrange functional",
                 "large focusing coefficient gives a negative-energy state besides 0; without it 0 is the only one",
                 {{"tol", "1e-8", "gradient norm at convergence"},
                  {"max_iter", "10000", "iteration cap per solve"},
                  {"far_scale", "10", "phase norm of far starts"},
                  {"starts", "20", "starts for the multistart checks"},
                  {"expect_negative", "1", "1 when a negative-energy state is expected"}},
                 [] {
                     auto s = reference("stationary", 16, K1Monomial{}, 1e-3, 1, 1);
                     s.source = DoublePower{2.0, 1.0, 10.0};
                     return s;
                 },
                 stationary_suite});
    return r;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> registry = build_registry();
    return registry;
}

const ExperimentInfo* find_experiment(const std::string& id) {
    for (const auto& e : experiment_registry())
        if (e.id == id) return &e;
    return nullptr;
}

}  // namespace nlbeam
