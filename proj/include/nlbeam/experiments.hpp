#pragma once

// Numerical experiments. Each driver runs one or more simulations from an
// ExperimentSetup, evaluates a list of named criteria and returns a report; when
// an output directory is given it also writes report.txt and CSV series into
// <output_dir>/<id>-seed<seed>/.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlbeam/integrator.hpp"
#include "nlbeam/laws.hpp"
#include "nlbeam/spectral.hpp"

namespace nlbeam {

/// How the initial state is produced.
struct InitialSpec {
    enum class Kind { Random, Zero, Mode };
    Kind kind = Kind::Random;
    int mode = 1;            // Mode
    double amplitude = 1.0;  // Mode
    double energy = 1.0;     // Random: target E(0)

    bool operator==(const InitialSpec&) const = default;
};

struct ExperimentSetup {
    std::string id = "simulate";
    int n_modes = 16;
    double length = 3.14159265358979323846;
    double kappa = 0.0;
    int quad_points = 0;  // 0 selects 8 N
    DampingLaw damping = K1Monomial{};
    SourceLaw source = ZeroSource{};
    double lambda = 0.0;
    Coeffs h;  // empty means zero
    IntegratorConfig integ;
    InitialSpec initial;
    std::uint64_t seed = 1;
    std::map<std::string, std::string> params;  // experiment-specific keys

    bool operator==(const ExperimentSetup&) const = default;

    SpectralModel model() const;
    Forcing forcing() const;
    ModalState initial_state(const SpectralModel& model) const;

    double num(const std::string& key) const;
    long integer(const std::string& key) const;
    std::vector<double> list(const std::string& key) const;
};

struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::string id;
    std::uint64_t seed = 0;
    std::vector<Criterion> criteria;
    std::vector<std::pair<std::string, double>> fitted;
    std::vector<std::string> artifacts;

    bool passed() const;
    void check(std::string name, bool pass, std::string detail);
    void fit(std::string name, double value) { fitted.emplace_back(std::move(name), value); }
    std::string render() const;
};

struct RunContext {
    std::filesystem::path output_dir;  // empty: no files
    bool quiet = true;

    /// <output_dir>/<id>-seed<seed>, created on demand; empty when output is disabled.
    std::filesystem::path run_dir(const std::string& id, std::uint64_t seed) const;
};

/// Lyapunov sanity on a trajectory with known K_lambda: E~ non-increasing within
/// 1e-12 relative plus 10x the energy-identity residual, and
/// (omega/4) phase_norm^2 <= E~ at every sample.
Criterion lyapunov_check(const SpectralModel& model, const Trajectory& traj, double omega,
                         const std::string& label);

ExperimentReport exp_k1_decay(const ExperimentSetup& setup, const RunContext& ctx);
ExperimentReport exp_k2_exponential(const ExperimentSetup& setup, const RunContext& ctx);
ExperimentReport exp_k3_ball(const ExperimentSetup& setup, const RunContext& ctx);
ExperimentReport exp_two_trajectory(const ExperimentSetup& setup, const RunContext& ctx);
ExperimentReport exp_lambda_lipschitz(const ExperimentSetup& setup, const RunContext& ctx);
ExperimentReport exp_decomposition(const ExperimentSetup& setup, const RunContext& ctx);
ExperimentReport exp_entropy(const ExperimentSetup& setup, const RunContext& ctx);
ExperimentReport nakao_suite(const ExperimentSetup& setup, const RunContext& ctx);
ExperimentReport haraux_suite(const ExperimentSetup& setup, const RunContext& ctx);
ExperimentReport stationary_suite(const ExperimentSetup& setup, const RunContext& ctx);
/// Plain integration: trajectory CSV plus the Lyapunov checks.
ExperimentReport simulate(const ExperimentSetup& setup, const RunContext& ctx);

struct ParamSpec {
    std::string key;
    std::string default_value;
    std::string doc;
};

struct ExperimentInfo {
    std::string id;
    std::string description;
    std::string claim;
    std::vector<ParamSpec> params;
    std::function<ExperimentSetup()> reference;
    std::function<ExperimentReport(const ExperimentSetup&, const RunContext&)> run;
};

/// Every driver above except `simulate`, in a fixed order.
const std::vector<ExperimentInfo>& experiment_registry();
/// nullptr when unknown.
const ExperimentInfo* find_experiment(const std::string& id);

}  // namespace nlbeam
