#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dispersal/config.hpp"

namespace dispersal {

/// Parses the line-oriented configuration format:
///
///   # comment
///   preset = figure1          (optional, before any section: start from a preset)
///   [domain]
///   length = 1
///   n_x = 200
///   bc = neumann              (neumann | dirichlet)
///   [trait]
///   n_theta = 200
///   bc = periodic             (periodic | dirichlet)
///   [model]
///   epsilon = 0.01
///   dispersal = cosine        (constant | cosine | linear | samples)
///   dispersal_params = 0.5, 0.4
///   capacity = hump           (constant | hump | cosine | linear | samples)
///   capacity_params = 1, 20, 8
///   theta_m = 0.5             (optional)
///   initial_center = 0.7
///   initial_width = 0.1
///   epsilons = 0.1, 0.05, 0.025
///   [solver]  eigen_tol, newton_tol, eigen_max_iter, newton_max_iter,
///             steady_tol, max_time, dt, reaction (explicit | semi_implicit)
///   [hj]      gradient_factor (one | D), curvature_floor, tol_ess, theta0,
///             final_time, dt, stall_steps, stall_tol, initial_curvature
///   [output]  final_time, snapshot_times, sample_every
///
/// overrides are "section.key=value" strings applied after the text.
/// Throws ConfigError with the offending line number.
ModelConfig parse_config_text(std::string_view text, const std::vector<std::string>& overrides = {});

/// Reads and parses a file. Unreadable files raise ConfigError.
ModelConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Names of the compiled-in presets.
std::vector<std::string> preset_names();

/// Configuration text of a compiled-in preset; throws ConfigError for unknown names.
std::string preset_text(const std::string& name);

ModelConfig preset_config(const std::string& name, const std::vector<std::string>& overrides = {});

/// Every resolved field, one "section.key = value" line each, in a fixed order.
std::string canonical_config(const ModelConfig& config);

/// 64-bit FNV-1a of canonical_config, as 16 hex digits.
std::string config_digest(const ModelConfig& config);

}  // namespace dispersal
