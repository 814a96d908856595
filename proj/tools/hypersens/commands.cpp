#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "hypersens/csv.hpp"
#include "hypersens/ensemble_io.hpp"
#include "hypersens/errors.hpp"
#include "hypersens/grouping_analysis.hpp"
#include "hypersens/haar_validation.hpp"
#include "hypersens/kicked_top.hpp"
#include "hypersens/random_vector_theory.hpp"
#include "output_lock.hpp"

#ifndef HYPERSENS_VERSION
#define HYPERSENS_VERSION "unknown"
#endif

namespace hypersens::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// Writes through a sibling temp file so an interrupted run never leaves a
// truncated output behind.
void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    try {
      body(out);
      out.close();
      if (!out) throw Error("write to " + tmp.string() + " failed");
    } catch (...) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw;
    }
  }
  fs::rename(tmp, path);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// JSON cannot hold inf/nan; they become null.
ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

ordered_json ensemble_json(const VectorEnsemble& e) {
  ordered_json j;
  j["D"] = e.dim();
  j["N"] = e.size();
  if (e.params()) {
    j["J"] = e.params()->spin.value();
    j["k"] = e.params()->k;
    j["g"] = e.params()->g;
    j["n"] = e.params()->steps;
  }
  if (e.initial_state()) {
    const auto& init = *e.initial_state();
    if (init.kind == InitialState::Kind::coherent) {
      j["initial_state"] = {{"kind", "coherent"}, {"theta", init.theta}, {"phi_az", init.phi_az}};
    } else {
      j["initial_state"] = {{"kind", "explicit_amplitudes"}};
    }
  }
  return j;
}

VectorEnsemble load_input_ensemble(const RunConfig& cfg) {
  fs::path path = cfg.ensemble;
  // A bare relative name that is not found here is looked up in the output directory,
  // so `top-sim --out d` followed by `group-sweep --out d` just works.
  if (path.is_relative() && !fs::exists(path) && fs::exists(cfg.out / path)) {
    path = cfg.out / path;
  }
  return load_ensemble(path);
}

std::vector<double> sweep_grid(const RunConfig& cfg) {
  return cfg.phis.empty() ? uniform_phi_grid(cfg.sweep_points) : cfg.phis;
}

}  // namespace

nlohmann::ordered_json cmd_top_sim(const RunConfig& cfg, std::ostream& log) {
  TopParams params;
  params.spin = Spin::from_value(cfg.J);
  params.k = cfg.k;
  params.g = cfg.g;
  params.steps = cfg.n;
  params.validate(cfg.max_steps);
  const Index d = params.spin.dim();

  // Fail before the scan and the Floquet build, not after.
  const std::size_t required = evolve_memory_bytes(d, params.steps);
  if (required > cfg.mem_budget) {
    throw ResourceError("top-sim: 2^" + std::to_string(params.steps) + " histories at D = " +
                            std::to_string(d) + " exceed the memory budget",
                        required, cfg.mem_budget);
  }

  const InitialSpec spec = InitialSpec::parse(cfg.initial);
  InitialState initial;
  ordered_json init_meta;
  if (spec.mode == InitialSpec::Mode::coherent) {
    initial = InitialState::coherent(spec.theta, spec.phi_az);
    init_meta["mode"] = "explicit";
    init_meta["theta"] = spec.theta;
    init_meta["phi_az"] = spec.phi_az;
    init_meta["lyapunov_bits_per_step"] =
        lyapunov_estimate(SpherePoint::from_angles(spec.theta, spec.phi_az), cfg.k, cfg.scan.iterations);
  } else {
    const LyapunovScan scan = scan_lyapunov(cfg.k, cfg.scan);
    const bool chaotic = spec.mode == InitialSpec::Mode::auto_chaotic;
    const ResolvedInitialState r = chaotic ? chaotic_center(scan) : regular_center(scan);
    initial = InitialState::coherent(r.theta, r.phi_az);
    init_meta["mode"] = spec.to_string();
    init_meta["theta"] = r.theta;
    init_meta["phi_az"] = r.phi_az;
    init_meta["lyapunov_bits_per_step"] = r.lyapunov;
    if (!chaotic) init_meta["island_cells"] = r.region_cells;
    init_meta["scan"] = {{"theta_cells", cfg.scan.theta_cells},
                         {"phi_cells", cfg.scan.phi_cells},
                         {"iterations", cfg.scan.iterations},
                         {"regular_threshold", cfg.scan.regular_threshold}};
  }
  log << "initial state: theta=" << init_meta["theta"].get<double>()
      << " phi_az=" << init_meta["phi_az"].get<double>() << '\n';

  ordered_json steps = ordered_json::array();
  steps.push_back({{"step", 0}, {"delta_H_S", 0.0}, {"n_d", 1}});
  EvolveOptions options;
  options.memory_budget_bytes = cfg.mem_budget;
  options.max_steps = cfg.max_steps;
  options.on_level = [&](int level, const ComplexMatrix& vectors) {
    const std::vector<double> q(static_cast<std::size_t>(vectors.cols()), std::ldexp(1.0, -level));
    const Eigen::VectorXd spectrum = ensemble_spectrum(vectors, q);
    const double h = entropy_from_eigenvalues(as_span(spectrum));
    const auto nd = explored_dimensions(as_span(spectrum), d, cfg.epsilon);
    steps.push_back({{"step", level}, {"delta_H_S", h}, {"n_d", nd}});
    log << "step " << level << ": delta_H_S=" << h << " n_d=" << nd << '\n';
  };
  const VectorEnsemble ensemble = evolve_histories(initial, params, options);

  const double norm_dev = (ensemble.vectors().colwise().norm().array() - 1.0).abs().maxCoeff();
  const fs::path ensemble_path = cfg.out / "ensemble.hsen";
  save_ensemble(ensemble_path, ensemble);
  ordered_json outputs = ordered_json::array({ensemble_path.filename().string()});
  if (cfg.histories_csv) {
    write_file(cfg.out / "histories.csv", [&](std::ostream& out) { write_history_csv(out, ensemble); });
    outputs.push_back("histories.csv");
  }

  ordered_json meta;
  meta["ensemble"] = ensemble_json(ensemble);
  meta["initial_state"] = init_meta;
  meta["epsilon"] = cfg.epsilon;
  meta["steps"] = steps;
  meta["delta_H_S"] = steps.back()["delta_H_S"];
  meta["n_d"] = steps.back()["n_d"];
  meta["max_norm_deviation"] = norm_dev;
  meta["outputs"] = outputs;
  return meta;
}

nlohmann::ordered_json cmd_group_sweep(const RunConfig& cfg, std::ostream& log) {
  const VectorEnsemble ensemble = load_input_ensemble(cfg);
  const std::vector<double> phis = sweep_grid(cfg);

  const Eigen::VectorXd spectrum = ensemble_spectrum(ensemble);
  const double delta_H_S = entropy_from_eigenvalues(as_span(spectrum));
  const auto nd = explored_dimensions(as_span(spectrum), ensemble.dim(), cfg.epsilon);
  log << "delta_H_S=" << delta_H_S << " n_d=" << nd << '\n';

  std::optional<PairwiseAngles> angles;
  if (PairwiseAngles::storage_bytes(ensemble.size()) <= cfg.mem_budget) {
    angles = PairwiseAngles::compute(ensemble.vectors(), {cfg.mem_budget, cfg.threads});
  } else {
    log << "angle matrix exceeds the memory budget; streaming rows per seed\n";
  }

  const std::vector<SweepPoint> sweep =
      angles ? resolution_sweep(ensemble, *angles, phis)
             : resolution_sweep(ensemble, phis, SweepOptions{{cfg.mem_budget, cfg.threads}});
  const std::vector<TradeoffPoint> tradeoff = tradeoff_envelope(sweep);

  ordered_json outputs = ordered_json::array();
  write_file(cfg.out / "sweep.csv", [&](std::ostream& out) { write_sweep_csv(out, sweep); });
  outputs.push_back("sweep.csv");
  write_file(cfg.out / "tradeoff.csv", [&](std::ostream& out) { write_tradeoff_csv(out, tradeoff); });
  outputs.push_back("tradeoff.csv");

  ordered_json details = ordered_json::array();
  for (std::size_t i = 0; i < cfg.detail_phis.size(); ++i) {
    const double phi = cfg.detail_phis[i];
    const Grouping grouping =
        angles ? greedy_group(*angles, ensemble.probabilities(), phi) : greedy_group(ensemble, phi);
    const GroupStatistics stats = group_statistics(ensemble, grouping);
    const std::string name = "groups_" + std::to_string(i) + ".csv";
    write_file(cfg.out / name, [&](std::ostream& out) { write_groups_csv(out, grouping, stats); });
    outputs.push_back(name);
    details.push_back({{"file", name}, {"phi", phi}, {"R", grouping.size()},
                       {"delta_I", stats.delta_I}, {"delta_H", stats.delta_H}});
  }

  ordered_json ratios = ordered_json::array();
  for (const SweepPoint& p : sweep) {
    const auto r = hypersensitivity_ratio(p, delta_H_S);
    ratios.push_back({{"phi", p.phi}, {"ratio", r ? number(*r) : ordered_json(nullptr)}});
  }

  ordered_json meta;
  meta["ensemble"] = ensemble_json(ensemble);
  meta["delta_H_S"] = delta_H_S;
  meta["epsilon"] = cfg.epsilon;
  meta["n_d"] = nd;
  meta["angle_matrix"] = angles ? "stored" : "streamed";
  meta["hypersensitivity_ratio"] = ratios;
  meta["groups"] = details;
  if (cfg.order_check) {
    if (angles) {
      ordered_json rows = ordered_json::array();
      for (const auto& row : order_sensitivity(ensemble, *angles, phis, cfg.seed)) {
        rows.push_back({{"phi", row.phi},
                        {"delta_I_list_order", row.delta_I_list_order},
                        {"delta_I_shuffled", row.delta_I_shuffled},
                        {"R_list_order", row.groups_list_order},
                        {"R_shuffled", row.groups_shuffled}});
      }
      meta["order_check"] = rows;
    } else {
      meta["order_check"] = "skipped: angle matrix exceeds the memory budget";
    }
  }
  meta["outputs"] = outputs;
  return meta;
}

nlohmann::ordered_json cmd_angles(const RunConfig& cfg, std::ostream& log) {
  const VectorEnsemble ensemble = load_input_ensemble(cfg);
  const AngleHistogram histogram = angle_histogram(ensemble, cfg.bins);
  write_file(cfg.out / "angles.csv", [&](std::ostream& out) { write_histogram_csv(out, histogram); });

  const double pairs = static_cast<double>(histogram.total());
  double mean = 0.0;
  for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
    mean += 0.5 * (histogram.edges[b] + histogram.edges[b + 1]) * static_cast<double>(histogram.counts[b]);
  }
  mean = pairs > 0.0 ? mean / pairs : 0.0;
  const double below = histogram.mass_below(std::numbers::pi / 4);
  log << "pairs=" << histogram.total() << " mass below pi/4=" << below << '\n';

  ordered_json meta;
  meta["ensemble"] = ensemble_json(ensemble);
  meta["pairs"] = histogram.total();
  meta["mean_angle"] = mean;
  meta["mass_below_pi_4"] = below;
  meta["random_vector_peak"] = random_angle_peak(static_cast<double>(ensemble.dim()));
  meta["outputs"] = ordered_json::array({"angles.csv"});
  return meta;
}

nlohmann::ordered_json cmd_theory(const RunConfig& cfg, std::ostream& log) {
  const std::vector<double> phis = uniform_phi_grid(cfg.theory_points);
  const std::vector<TheoryRow> rows = theory_curve(cfg.dim, phis);
  write_file(cfg.out / "theory.csv", [&](std::ostream& out) { write_theory_csv(out, rows); });
  const double peak = random_angle_peak(cfg.dim);
  log << "D=" << cfg.dim << " g peak at phi=" << peak << '\n';

  ordered_json meta;
  meta["dim"] = cfg.dim;
  meta["log2_dim"] = std::log2(cfg.dim);
  meta["random_vector_peak"] = peak;
  meta["rows"] = rows.size();
  meta["outputs"] = ordered_json::array({"theory.csv"});
  return meta;
}

nlohmann::ordered_json cmd_classical(const RunConfig& cfg, std::ostream& log) {
  CellModelParams base;
  base.K = cfg.K;
  base.t = cfg.t0;
  base.t0 = cfg.t0;
  base.F = cfg.F;
  base.delta_H_tol = cfg.delta_H_tol;
  base.validate();

  std::vector<double> times;
  for (long i = 0;; ++i) {
    const double t = cfg.t0 + static_cast<double>(i) * cfg.t_step;
    if (t > cfg.t_max + 1e-9 * cfg.t_step) break;
    times.push_back(t);
  }
  const std::vector<ClassicalRow> rows = classical_curve(base, times);
  write_file(cfg.out / "classical.csv", [&](std::ostream& out) { write_classical_csv(out, rows); });
  log << rows.size() << " of " << times.size() << " time points have delta_H_S >= delta_H_tol\n";

  ordered_json meta;
  meta["times"] = times.size();
  meta["rows"] = rows.size();
  meta["valid"] = cfg.delta_H_tol / cfg.F >= 1.0;
  meta["outputs"] = ordered_json::array({"classical.csv"});
  return meta;
}

nlohmann::ordered_json cmd_haar_validate(const RunConfig& cfg, std::ostream& log) {
  HaarValidationOptions opts;
  opts.dim = cfg.haar_dim;
  opts.samples = cfg.samples;
  opts.bins = cfg.haar_bins;
  opts.seed = cfg.seed;
  opts.p_threshold = cfg.p_threshold;
  opts.l1_threshold = cfg.l1_threshold;
  const HaarValidation v = validate_haar(opts);
  write_file(cfg.out / "haar_histogram.csv", [&](std::ostream& out) { write_histogram_csv(out, v.histogram); });
  log << (v.passed ? "PASS" : "FAIL") << ": chi2=" << v.chi_square << " dof=" << v.degrees_of_freedom
      << " p=" << v.p_value << " L1=" << v.l1_distance << '\n';

  ordered_json meta;
  meta["chi_square"] = v.chi_square;
  meta["degrees_of_freedom"] = v.degrees_of_freedom;
  meta["p_value"] = v.p_value;
  meta["l1_distance"] = v.l1_distance;
  meta["passed"] = v.passed;
  meta["outputs"] = ordered_json::array({"haar_histogram.csv"});
  return meta;
}

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  using Handler = nlohmann::ordered_json (*)(const RunConfig&, std::ostream&);
  static const std::pair<std::string_view, Handler> handlers[] = {
      {"top-sim", cmd_top_sim},         {"group-sweep", cmd_group_sweep},
      {"angles", cmd_angles},           {"theory-curves", cmd_theory},
      {"classical-model", cmd_classical}, {"haar-validate", cmd_haar_validate},
  };
  Handler handler = nullptr;
  for (const auto& [name, h] : handlers) {
    if (name == command) handler = h;
  }
  try {
    if (handler == nullptr) throw InvalidParameter("unknown command \"" + command + "\"");
    cfg.validate(command);
    fs::create_directories(cfg.out);
    OutputLock lock(cfg.out);

    const auto start = std::chrono::steady_clock::now();
    ordered_json meta;
    meta["command"] = command;
    meta["version"] = HYPERSENS_VERSION;
    meta["parameters"] = config_json(cfg, command);
    const ordered_json result = handler(cfg, log);
    for (const auto& [key, value] : result.items()) meta[key] = value;
    meta["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    meta["finished_at"] = utc_timestamp();
    write_file(cfg.out / (command + ".json"), [&](std::ostream& out) { out << meta.dump(2) << '\n'; });

    if (result.contains("passed") && !result["passed"].get<bool>()) return kExitFailed;
    return kExitOk;
  } catch (const InvalidParameter& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const FormatError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const LockBusy& e) {
    err << "resource busy: " << e.what() << '\n';
    return kExitResource;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
}

int run_main(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  // The config file is read before flag parsing so that flags override it.
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    std::optional<std::string> path;
    if (arg == "--config" && i + 1 < argc) {
      path = argv[i + 1];
    } else if (arg.starts_with("--config=")) {
      path = std::string(arg.substr(9));
    }
    if (path) {
      try {
        cfg = load_config_file(*path);
      } catch (const Error& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kExitInvalid;
      }
    }
  }

  CLI::App app{"Hypersensitivity to perturbation in the quantum kicked top", "hypersens"};
  app.set_version_flag("--version", HYPERSENS_VERSION);
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON file with parameters; flags override it");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--mem-budget", cfg.mem_budget, "memory budget in bytes (suffixes KB, MB, GB accepted)")
      ->transform(CLI::AsSizeValue(false));
  app.add_option("--threads", cfg.threads, "worker threads for the angle kernel");

  auto* top = app.add_subcommand("top-sim", "evolve every perturbation history of the kicked top");
  top->add_option("--J", cfg.J, "spin quantum number (2J a positive integer)");
  top->add_option("--k", cfg.k, "twist strength");
  top->add_option("--g", cfg.g, "perturbation angle per step (radians)");
  top->add_option("--n", cfg.n, "number of perturbed steps");
  top->add_option("--max-steps", cfg.max_steps, "upper limit accepted for n");
  top->add_option("--initial", cfg.initial, "auto-chaotic, auto-regular or theta,phi_az");
  top->add_option("--scan-theta-cells", cfg.scan.theta_cells, "Lyapunov scan cells in theta");
  top->add_option("--scan-phi-cells", cfg.scan.phi_cells, "Lyapunov scan cells in phi");
  top->add_option("--scan-iterations", cfg.scan.iterations, "map iterations per scan cell");
  top->add_option("--regular-threshold", cfg.scan.regular_threshold, "bits/step below which a cell is regular");
  top->add_option("--epsilon", cfg.epsilon, "trace deficit for n_d");
  top->add_flag("--histories-csv", cfg.histories_csv, "also write histories.csv");

  auto* sweep = app.add_subcommand("group-sweep", "information and entropy versus grouping resolution");
  auto* angles = app.add_subcommand("angles", "histogram of pairwise Hilbert-space angles");
  for (auto* sub : {sweep, angles}) {
    sub->add_option("--ensemble", cfg.ensemble, "ensemble file written by top-sim");
  }
  sweep->add_option("--sweep-points", cfg.sweep_points, "uniform resolutions on [0, pi/2]");
  sweep->add_option("--phis", cfg.phis, "explicit ascending resolutions (radians)")->delimiter(',');
  sweep->add_option("--detail-phis", cfg.detail_phis, "resolutions with per-group output")->delimiter(',');
  sweep->add_option("--epsilon", cfg.epsilon, "trace deficit for n_d");
  sweep->add_flag("--order-check", cfg.order_check, "rerun the grouping in a shuffled order");
  angles->add_option("--bins", cfg.bins, "histogram bins on [0, pi/2]");

  auto* theory = app.add_subcommand("theory-curves", "random-vector theory on a uniform angle grid");
  theory->add_option("--dim", cfg.dim, "Hilbert-space dimension D");
  theory->add_option("--points", cfg.theory_points, "grid points on [0, pi/2]");

  auto* classical = app.add_subcommand("classical-model", "correlation-cell counting model");
  classical->add_option("--K", cfg.K, "KS entropy (bits per unit time)");
  classical->add_option("--t0", cfg.t0, "time at which one cell is filled");
  classical->add_option("--F", cfg.F, "number of contracting dimensions");
  classical->add_option("--delta-H-tol", cfg.delta_H_tol, "tolerable entropy increase (bits)");
  classical->add_option("--t-max", cfg.t_max, "last time");
  classical->add_option("--t-step", cfg.t_step, "time spacing");

  auto* haar = app.add_subcommand("haar-validate", "check sampled angles against the random-vector density");
  haar->add_option("--dim", cfg.haar_dim, "Hilbert-space dimension D");
  haar->add_option("--samples", cfg.samples, "number of Haar vectors");
  haar->add_option("--bins", cfg.haar_bins, "histogram bins");
  haar->add_option("--p-threshold", cfg.p_threshold, "chi-square p-value threshold");
  haar->add_option("--l1-threshold", cfg.l1_threshold, "alternative L1 distance threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, log, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, log, err);
    return kExitInvalid;
  }
  return run_command(app.get_subcommands().front()->get_name(), cfg, log, err);
}

}  // namespace hypersens::cli
