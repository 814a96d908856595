#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypersens/kicked_top.hpp"

namespace hypersens::cli {

/// Initial state given as "theta,phi_az", "auto-chaotic" or "auto-regular".
struct InitialSpec {
  enum class Mode { coherent, auto_chaotic, auto_regular };

  Mode mode = Mode::auto_chaotic;
  double theta = 0.0;
  double phi_az = 0.0;

  static InitialSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Every parameter of every subcommand. Defaults reproduce the J = 511.5,
/// k = 3, g = 0.003, n = 12 configuration.
struct RunConfig {
  // common
  std::uint64_t seed = 1;
  std::filesystem::path out = ".";
  std::size_t mem_budget = kDefaultMemoryBudget;
  unsigned threads = 1;

  // top-sim
  double J = 511.5;
  double k = 3.0;
  double g = 0.003;
  int n = 12;
  int max_steps = kDefaultMaxSteps;
  std::string initial = "auto-chaotic";
  ScanOptions scan;
  bool histories_csv = false;

  // group-sweep, angles
  std::filesystem::path ensemble = "ensemble.hsen";
  int sweep_points = 50;
  std::vector<double> phis;         ///< explicit grid; overrides sweep_points when non-empty
  std::vector<double> detail_phis;  ///< resolutions with per-group CSV output
  double epsilon = 0.02;
  int bins = 64;
  bool order_check = false;

  // theory-curves
  double dim = 1024.0;
  int theory_points = 200;

  // classical-model
  double K = 1.0;
  double t0 = 0.0;
  int F = 1;
  double delta_H_tol = 1.0;
  double t_max = 20.0;
  double t_step = 1.0;

  // haar-validate
  int haar_dim = 16;
  int samples = 2000;
  int haar_bins = 40;
  double p_threshold = 0.01;
  double l1_threshold = 0.05;

  /// Throws InvalidParameter naming the first out-of-range field for `command`.
  void validate(const std::string& command) const;
};

/// Overlays the keys present in `j`; unknown keys are rejected.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path);

/// Resolved parameters written into run metadata.
nlohmann::ordered_json config_json(const RunConfig& cfg, const std::string& command);

}  // namespace hypersens::cli
