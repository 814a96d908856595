#pragma once

// Quantum kicked top with a stochastic +-g z-rotation perturbation, exhaustive
// evolution of every perturbation history, and the classical limit map used to
// pick regular and chaotic initial conditions.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hypersens/spin_hilbert.hpp"

namespace hypersens {

inline constexpr int kDefaultMaxSteps = 20;
inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;  // 2 GiB

struct TopParams {
  Spin spin{1};
  double k = 3.0;  ///< twist strength
  double g = 0.0;  ///< perturbation angle per step (radians)
  int steps = 0;   ///< number of kicks n

  /// Throws InvalidParameter when k, g or n are out of range.
  void validate(int max_steps = kDefaultMaxSteps) const;
  std::uint64_t history_count() const { return std::uint64_t{1} << steps; }
};

/// One realization of the perturbation: labels l_1 .. l_n, each -1 or +1.
struct PerturbationHistory {
  std::vector<int> labels;
  double probability = 1.0;

  /// History number `index` in enumeration order: l_1 is the most significant
  /// bit, bit value 0 meaning -1 and 1 meaning +1.
  static PerturbationHistory from_index(std::uint64_t index, int steps);
};

/// How the initial state was produced; persisted with every ensemble.
struct InitialState {
  enum class Kind : std::uint32_t { coherent = 0, explicit_amplitudes = 1 };

  Kind kind = Kind::coherent;
  double theta = 0.0;
  double phi_az = 0.0;
  ComplexVector amplitudes;  ///< only for explicit_amplitudes

  static InitialState coherent(double theta, double phi_az);
  static InitialState explicit_state(const StateVector& psi);

  StateVector realize(Spin spin) const;
};

/// The list of N vectors with probabilities q_j. Vectors are stored as the
/// columns of a D x N matrix in history order.
class VectorEnsemble {
 public:
  /// Generic list of vectors (e.g. a Haar sample). Checks unit norms and that
  /// the probabilities are non-negative and sum to 1.
  VectorEnsemble(ComplexMatrix vectors, std::vector<double> probabilities);

  /// Ensemble produced by the kicked top; additionally requires N = 2^n.
  VectorEnsemble(ComplexMatrix vectors, std::vector<double> probabilities, TopParams params,
                 InitialState initial);

  /// Uniform probabilities 1/N.
  static VectorEnsemble uniform(ComplexMatrix vectors);

  Index size() const noexcept { return vectors_.cols(); }
  Index dim() const noexcept { return vectors_.rows(); }
  const ComplexMatrix& vectors() const noexcept { return vectors_; }
  auto column(Index j) const { return vectors_.col(j); }
  StateVector state(Index j) const;
  std::span<const double> probabilities() const noexcept { return probabilities_; }

  const std::optional<TopParams>& params() const noexcept { return params_; }
  const std::optional<InitialState>& initial_state() const noexcept { return initial_; }
  /// Requires an ensemble built by the kicked top.
  PerturbationHistory history(Index j) const;

 private:
  void check_invariants() const;

  ComplexMatrix vectors_;
  std::vector<double> probabilities_;
  std::optional<TopParams> params_;
  std::optional<InitialState> initial_;
};

/// T = exp(-i (k/2J) Jx^2) exp(-i pi Jz / 2).
UnitaryOperator floquet_operator(const TopParams& params);

/// T(l) = exp(-i g l Jz) T for l = -1 or +1.
UnitaryOperator perturbed_floquet(const TopParams& params, int l);

struct EvolveOptions {
  std::size_t memory_budget_bytes = kDefaultMemoryBudget;
  int max_steps = kDefaultMaxSteps;
  /// Called after each level m = 1 .. n with the 2^m vectors of that level.
  std::function<void(int level, const ComplexMatrix& vectors)> on_level;
};

/// Bytes held at the final level of evolve_histories (both the last two levels).
std::size_t evolve_memory_bytes(Index dim, int steps);

/// Applies every sequence T(l_n) ... T(l_1) to the initial state. Level m holds
/// 2^m vectors; history j at level m-1 spawns children 2j (l = -1) and 2j+1 (l = +1).
VectorEnsemble evolve_histories(const InitialState& initial, const TopParams& params,
                                const EvolveOptions& options = {});
VectorEnsemble evolve_histories(const StateVector& initial, const TopParams& params,
                                const EvolveOptions& options = {});

// ---------------------------------------------------------------------------
// Classical limit

struct SpherePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  static SpherePoint from_angles(double theta, double phi_az);
  double theta() const;
  double phi_az() const;  ///< in [0, 2 pi)
  double norm() const;
};

/// Rotation by pi/2 about z, then a twist about x by the angle k x.
SpherePoint classical_step(SpherePoint p, double k);

/// Largest Lyapunov exponent in bits per step from tangent-vector renormalization.
double lyapunov_estimate(SpherePoint p, double k, int iterations);

struct ScanOptions {
  int theta_cells = 32;
  int phi_cells = 64;
  int iterations = 2000;
  /// Cells with an exponent below this count as regular.
  double regular_threshold = 0.02;
};

/// Lyapunov exponents on a grid of cell centers theta_i = pi (i + 1/2) / theta_cells,
/// phi_j = 2 pi (j + 1/2) / phi_cells.
struct LyapunovScan {
  double k = 0.0;
  ScanOptions options;
  std::vector<double> exponents;  ///< row-major [theta][phi]

  double theta_at(int i) const;
  double phi_at(int j) const;
  double at(int i, int j) const { return exponents[static_cast<std::size_t>(i) * options.phi_cells + j]; }
};

LyapunovScan scan_lyapunov(double k, const ScanOptions& options = {});

struct ResolvedInitialState {
  double theta = 0.0;
  double phi_az = 0.0;
  double lyapunov = 0.0;  ///< bits/step at the chosen point
  std::size_t region_cells = 0;  ///< size of the regular island (regular rule only)
};

/// Grid cell with the largest exponent.
ResolvedInitialState chaotic_center(const LyapunovScan& scan);

/// Center of the largest connected set of regular cells (4-neighbour, periodic
/// in phi): the normalized mean of its points on the sphere, snapped to the
/// member cell nearest to that mean.
ResolvedInitialState regular_center(const LyapunovScan& scan);

}  // namespace hypersens
