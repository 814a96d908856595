#pragma once

// Correlation-cell counting model of classical exponential hypersensitivity.
// K is the Kolmogorov-Sinai entropy in bits per unit time; entropies in bits.

#include <functional>
#include <vector>

namespace hypersens {

struct CellModelParams {
  double K = 0.0;            ///< KS entropy (bits / time)
  double t = 0.0;            ///< time
  double t0 = 0.0;           ///< time at which the unperturbed density fills one cell
  int F = 1;                 ///< contracting dimensions (half the phase-space dimension)
  double delta_H_tol = 0.0;  ///< tolerable entropy increase

  void validate() const;
};

/// Number of occupied cells as a function of time.
using CellGrowth = std::function<double(double t)>;

/// R(t) = 2^{K (t - t0)}.
double occupied_cells(double K, double t, double t0);

/// Delta H_S = K t.
double classical_entropy_increase(double K, double t);

struct RequiredInformation {
  double bits = 0.0;                ///< R(t) (Delta H_S - Delta H_tol)
  double cells = 0.0;               ///< R(t)
  double delta_H_S = 0.0;
  double coarse_volume_factor = 0.0;  ///< 2^{Delta H_tol}
  /// Delta H_tol / F >= 1: the information reflects the dynamics rather than
  /// the perturbation.
  bool valid = false;
};

RequiredInformation required_information(const CellModelParams& params);
/// Same with a user-supplied R(t), e.g. sub-exponential growth for regular shear.
RequiredInformation required_information(const CellModelParams& params, const CellGrowth& cells);

/// Delta I_min / (Delta H_S - Delta H_tol) = R(t).
double hypersensitivity_law(const CellModelParams& params);
double hypersensitivity_law(const CellModelParams& params, const CellGrowth& cells);

struct ClassicalRow {
  double t = 0.0;
  double R = 0.0;
  double delta_H_S = 0.0;
  double delta_I_min = 0.0;
  double ratio = 0.0;
  bool valid = false;
};

/// Evaluates the model at each time; rows with Delta H_tol > Delta H_S are skipped.
std::vector<ClassicalRow> classical_curve(const CellModelParams& base, const std::vector<double>& times);

}  // namespace hypersens
