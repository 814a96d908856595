#include "hypersens/classical_model.hpp"

#include <cmath>
#include <string>

#include "hypersens/errors.hpp"

namespace hypersens {

void CellModelParams::validate() const {
  if (!(K >= 0.0) || !std::isfinite(K)) {
    throw InvalidParameter("cell model: K must be finite and non-negative");
  }
  if (!std::isfinite(t) || !std::isfinite(t0) || !(t >= 0.0)) {
    throw InvalidParameter("cell model: t must be finite and non-negative");
  }
  if (t < t0) {
    throw InvalidParameter("cell model: t must not precede t0");
  }
  if (F < 1) {
    throw InvalidParameter("cell model: F must be a positive integer");
  }
  if (!(delta_H_tol >= 0.0) || !std::isfinite(delta_H_tol)) {
    throw InvalidParameter("cell model: tolerable entropy must be finite and non-negative");
  }
}

double occupied_cells(double K, double t, double t0) {
  if (!(K >= 0.0) || !std::isfinite(K)) {
    throw InvalidParameter("occupied cells: K must be finite and non-negative");
  }
  if (!(t >= t0)) {
    throw InvalidParameter("occupied cells: t = " + std::to_string(t) + " precedes t0 = " +
                           std::to_string(t0));
  }
  return std::exp2(K * (t - t0));
}

double classical_entropy_increase(double K, double t) {
  if (!(K >= 0.0) || !(t >= 0.0)) {
    throw InvalidParameter("entropy increase: K and t must be non-negative");
  }
  return K * t;
}

RequiredInformation required_information(const CellModelParams& params, const CellGrowth& cells) {
  params.validate();
  RequiredInformation out;
  out.delta_H_S = classical_entropy_increase(params.K, params.t);
  if (params.delta_H_tol > out.delta_H_S) {
    throw InvalidParameter("required information: tolerable entropy " +
                           std::to_string(params.delta_H_tol) + " exceeds Delta H_S = " +
                           std::to_string(out.delta_H_S));
  }
  out.cells = cells(params.t);
  out.bits = out.cells * (out.delta_H_S - params.delta_H_tol);
  out.coarse_volume_factor = std::exp2(params.delta_H_tol);
  out.valid = params.delta_H_tol / params.F >= 1.0;
  return out;
}

RequiredInformation required_information(const CellModelParams& params) {
  return required_information(params, [&](double t) { return occupied_cells(params.K, t, params.t0); });
}

double hypersensitivity_law(const CellModelParams& params, const CellGrowth& cells) {
  params.validate();
  if (params.delta_H_tol > classical_entropy_increase(params.K, params.t)) {
    throw InvalidParameter("hypersensitivity law: tolerable entropy exceeds Delta H_S");
  }
  return cells(params.t);
}

double hypersensitivity_law(const CellModelParams& params) {
  return hypersensitivity_law(params, [&](double t) { return occupied_cells(params.K, t, params.t0); });
}

std::vector<ClassicalRow> classical_curve(const CellModelParams& base, const std::vector<double>& times) {
  std::vector<ClassicalRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    CellModelParams p = base;
    p.t = t;
    if (t < p.t0 || p.delta_H_tol > classical_entropy_increase(p.K, t)) continue;
    const auto info = required_information(p);
    rows.push_back({t, info.cells, info.delta_H_S, info.bits, hypersensitivity_law(p), info.valid});
  }
  return rows;
}

}  // namespace hypersens
