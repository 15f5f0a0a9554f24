#pragma once

// Run configuration in a flat INI-like format:
//
//   seed = 7
//   output_dir = runs
//
//   [model]       n_modes, length, kappa, quad_points (number or auto)
//   [damping]     variant = k1 | k2_constant | k2_exp_decay | k2_rational | k3_rational | k3_shifted_exp,
//                 gamma, q (k1 only)
//   [source]      variant = zero | double_power, delta, r, sigma
//   [forcing]     lambda, h = zero | mode:j:amplitude | comma-separated list
//   [integrator]  dt, scheme = strang | rk4, horizon, sample_stride, alpha
//   [experiment]  id, initial = random | zero | mode:j:amplitude, initial_energy,
//                 plus the keys declared by the experiment
//
// Unspecified values fall back to the reference setup of the experiment named
// by [experiment] id (or of a plain simulation). '#' and ';' start comments.

#include <iosfwd>
#include <string>

#include "nlbeam/experiments.hpp"

namespace nlbeam {

inline constexpr const char* kSoftwareVersion = "0.3.0";

struct RunConfig {
    ExperimentSetup setup;
    std::string output_dir = "runs";

    bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError carrying the offending line (0 when the problem is not
/// tied to one line). `default_id` applies when the text names no experiment.
RunConfig parse_config(const std::string& text, const std::string& default_id = "simulate");

/// Reference configuration of an experiment id ("simulate" included).
RunConfig reference_config(const std::string& id);

/// Every field written explicitly; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Catalog: id, description and checked claim per experiment.
std::string list_experiments();

/// Runs the configured experiment, writes the report, CSV series and a manifest
/// into <output_dir>/<id>-seed<seed>/ (no files when output_dir is empty) and
/// returns 0 iff every criterion passed. Driver exceptions are reported as a
/// failed criterion.
int run(const RunConfig& config, std::ostream& log, bool quiet = false);

}  // namespace nlbeam
