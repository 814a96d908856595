#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "hypersens/errors.hpp"

namespace hypersens::cli {

namespace {

using Setter = std::function<void(RunConfig&, const nlohmann::json&)>;

template <class T, class Field>
Setter set(Field RunConfig::*field) {
  return [field](RunConfig& c, const nlohmann::json& v) { c.*field = v.get<T>(); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", set<std::uint64_t>(&RunConfig::seed)},
      {"out", [](RunConfig& c, const nlohmann::json& v) { c.out = v.get<std::string>(); }},
      {"mem_budget", set<std::size_t>(&RunConfig::mem_budget)},
      {"threads", set<unsigned>(&RunConfig::threads)},
      {"J", set<double>(&RunConfig::J)},
      {"k", set<double>(&RunConfig::k)},
      {"g", set<double>(&RunConfig::g)},
      {"n", set<int>(&RunConfig::n)},
      {"max_steps", set<int>(&RunConfig::max_steps)},
      {"initial", set<std::string>(&RunConfig::initial)},
      {"scan_theta_cells", [](RunConfig& c, const nlohmann::json& v) { c.scan.theta_cells = v.get<int>(); }},
      {"scan_phi_cells", [](RunConfig& c, const nlohmann::json& v) { c.scan.phi_cells = v.get<int>(); }},
      {"scan_iterations", [](RunConfig& c, const nlohmann::json& v) { c.scan.iterations = v.get<int>(); }},
      {"regular_threshold", [](RunConfig& c, const nlohmann::json& v) { c.scan.regular_threshold = v.get<double>(); }},
      {"histories_csv", set<bool>(&RunConfig::histories_csv)},
      {"ensemble", [](RunConfig& c, const nlohmann::json& v) { c.ensemble = v.get<std::string>(); }},
      {"sweep_points", set<int>(&RunConfig::sweep_points)},
      {"phis", set<std::vector<double>>(&RunConfig::phis)},
      {"detail_phis", set<std::vector<double>>(&RunConfig::detail_phis)},
      {"epsilon", set<double>(&RunConfig::epsilon)},
      {"bins", set<int>(&RunConfig::bins)},
      {"order_check", set<bool>(&RunConfig::order_check)},
      {"dim", set<double>(&RunConfig::dim)},
      {"theory_points", set<int>(&RunConfig::theory_points)},
      {"K", set<double>(&RunConfig::K)},
      {"t0", set<double>(&RunConfig::t0)},
      {"F", set<int>(&RunConfig::F)},
      {"delta_H_tol", set<double>(&RunConfig::delta_H_tol)},
      {"t_max", set<double>(&RunConfig::t_max)},
      {"t_step", set<double>(&RunConfig::t_step)},
      {"haar_dim", set<int>(&RunConfig::haar_dim)},
      {"samples", set<int>(&RunConfig::samples)},
      {"haar_bins", set<int>(&RunConfig::haar_bins)},
      {"p_threshold", set<double>(&RunConfig::p_threshold)},
      {"l1_threshold", set<double>(&RunConfig::l1_threshold)},
  };
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidParameter("config: " + message);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

InitialSpec InitialSpec::parse(const std::string& text) {
  InitialSpec s;
  if (text == "auto-chaotic") {
    s.mode = Mode::auto_chaotic;
    return s;
  }
  if (text == "auto-regular") {
    s.mode = Mode::auto_regular;
    return s;
  }
  std::istringstream in(text);
  char comma = 0;
  if (!(in >> s.theta >> comma >> s.phi_az) || comma != ',' || !(in >> std::ws).eof()) {
    throw InvalidParameter("config: initial must be auto-chaotic, auto-regular or \"theta,phi_az\", got \"" +
                           text + "\"");
  }
  if (!(s.theta >= 0.0 && s.theta <= std::numbers::pi) || !std::isfinite(s.phi_az)) {
    throw InvalidParameter("config: initial theta must lie in [0, pi]");
  }
  s.mode = Mode::coherent;
  return s;
}

std::string InitialSpec::to_string() const {
  switch (mode) {
    case Mode::auto_chaotic: return "auto-chaotic";
    case Mode::auto_regular: return "auto-regular";
    case Mode::coherent: break;
  }
  std::ostringstream out;
  out.precision(17);
  out << theta << ',' << phi_az;
  return out.str();
}

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) {
    throw InvalidParameter("config: top level must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw InvalidParameter("config: unknown key \"" + key + "\"");
    }
    try {
      it->second(cfg, value);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidParameter("config: bad value for \"" + key + "\": " + e.what());
    }
  }
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidParameter("config: cannot open " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  RunConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

void RunConfig::validate(const std::string& command) const {
  require(mem_budget > 0, "mem_budget must be positive");
  require(threads >= 1, "threads must be at least 1");
  if (command == "top-sim") {
    Spin::from_value(J);
    require(finite(k), "k must be finite");
    require(g >= 0.0 && finite(g), "g must be a finite non-negative angle");
    require(max_steps >= 0 && max_steps <= 40, "max_steps must lie in [0, 40]");
    require(n >= 0 && n <= max_steps, "n must lie in [0, max_steps]");
    InitialSpec::parse(initial);
    require(scan.theta_cells >= 1 && scan.phi_cells >= 1, "scan grid must be non-empty");
    require(scan.iterations >= 100, "scan_iterations must be at least 100");
    require(scan.regular_threshold > 0.0, "regular_threshold must be positive");
  } else if (command == "group-sweep" || command == "angles") {
    require(sweep_points >= 2, "sweep_points must be at least 2");
    for (double phi : phis) require(phi >= 0.0 && phi <= std::numbers::pi / 2, "phis must lie in [0, pi/2]");
    require(std::is_sorted(phis.begin(), phis.end()), "phis must be ascending");
    for (double phi : detail_phis) {
      require(phi >= 0.0 && phi <= std::numbers::pi / 2, "detail_phis must lie in [0, pi/2]");
    }
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
    require(bins >= 2, "bins must be at least 2");
  } else if (command == "theory-curves") {
    require(dim >= 2.0 && finite(dim), "dim must be at least 2");
    require(theory_points >= 2, "theory_points must be at least 2");
  } else if (command == "classical-model") {
    require(K >= 0.0 && finite(K), "K must be non-negative");
    require(finite(t0) && t0 >= 0.0, "t0 must be non-negative");
    require(F >= 1, "F must be a positive integer");
    require(delta_H_tol >= 0.0 && finite(delta_H_tol), "delta_H_tol must be non-negative");
    require(t_step > 0.0 && finite(t_step), "t_step must be positive");
    require(t_max >= t0 && finite(t_max), "t_max must not precede t0");
    require((t_max - t0) / t_step <= 1e6, "too many time points");
  } else if (command == "haar-validate") {
    require(haar_dim >= 2, "haar_dim must be at least 2");
    require(samples >= 2, "samples must be at least 2");
    require(haar_bins >= 2, "haar_bins must be at least 2");
    require(p_threshold > 0.0 && p_threshold < 1.0, "p_threshold must lie in (0, 1)");
    require(l1_threshold > 0.0, "l1_threshold must be positive");
  }
}

nlohmann::ordered_json config_json(const RunConfig& c, const std::string& command) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["out"] = c.out.string();
  j["mem_budget"] = c.mem_budget;
  j["threads"] = c.threads;
  if (command == "top-sim") {
    j["J"] = c.J;
    j["k"] = c.k;
    j["g"] = c.g;
    j["n"] = c.n;
    j["max_steps"] = c.max_steps;
    j["initial"] = c.initial;
    j["scan_theta_cells"] = c.scan.theta_cells;
    j["scan_phi_cells"] = c.scan.phi_cells;
    j["scan_iterations"] = c.scan.iterations;
    j["regular_threshold"] = c.scan.regular_threshold;
    j["histories_csv"] = c.histories_csv;
  } else if (command == "group-sweep" || command == "angles") {
    j["ensemble"] = c.ensemble.string();
    j["sweep_points"] = c.sweep_points;
    j["phis"] = c.phis;
    j["detail_phis"] = c.detail_phis;
    j["epsilon"] = c.epsilon;
    j["bins"] = c.bins;
    j["order_check"] = c.order_check;
  } else if (command == "theory-curves") {
    j["dim"] = c.dim;
    j["theory_points"] = c.theory_points;
  } else if (command == "classical-model") {
    j["K"] = c.K;
    j["t0"] = c.t0;
    j["F"] = c.F;
    j["delta_H_tol"] = c.delta_H_tol;
    j["t_max"] = c.t_max;
    j["t_step"] = c.t_step;
  } else if (command == "haar-validate") {
    j["haar_dim"] = c.haar_dim;
    j["samples"] = c.samples;
    j["haar_bins"] = c.haar_bins;
    j["p_threshold"] = c.p_threshold;
    j["l1_threshold"] = c.l1_threshold;
  }
  return j;
}

}  // namespace hypersens::cli
