#pragma once

// Grouping of an ensemble of perturbed vectors at a Hilbert-space angle
// resolution, and the information / conditional-entropy statistics that follow.
// Entropies and informations are in bits, angles in radians.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hypersens/kicked_top.hpp"
#include "hypersens/pairwise_angles.hpp"
#include "hypersens/spin_hilbert.hpp"

namespace hypersens {

inline constexpr double kDefaultTraceDeficit = 0.02;
inline constexpr int kDefaultSweepPoints = 50;

struct Group {
  Index seed = 0;
  std::vector<Index> members;  ///< ascending ensemble indices, seed first
  double probability = 0.0;    ///< p_r
};

struct Grouping {
  double resolution_phi = 0.0;
  std::vector<Group> groups;  ///< in seed order

  std::size_t size() const noexcept { return groups.size(); }
  /// Same partition, ignoring the resolution.
  bool same_partition(const Grouping& other) const;
};

struct GroupStatistics {
  double delta_I = 0.0;
  double delta_H = 0.0;
  std::vector<double> group_entropies;  ///< Delta H_r, parallel to Grouping::groups
};

struct SweepPoint {
  double phi = 0.0;
  double delta_I = 0.0;
  double delta_H = 0.0;
  std::size_t groups = 0;  ///< R
};

struct TradeoffPoint {
  double delta_H_tol = 0.0;
  double delta_I_min = 0.0;
  double phi = 0.0;  ///< resolution of the sweep point that realizes the minimum
};

struct AngleHistogram {
  std::vector<double> edges;            ///< bins + 1 uniform edges on [0, pi/2]
  std::vector<std::uint64_t> counts;
  std::vector<double> density;          ///< counts / (pairs * width)

  std::uint64_t total() const;
  double mass_below(double phi) const;  ///< fraction of pairs in bins whose upper edge <= phi
};

/// rho_S = sum_j q_j |psi_j><psi_j|.
DensityMatrix average_density(const VectorEnsemble& ensemble);

/// Nonzero spectrum of rho_S, descending, computed from the N x N weighted Gram
/// matrix when N < D and from rho_S otherwise.
Eigen::VectorXd ensemble_spectrum(const VectorEnsemble& ensemble);
Eigen::VectorXd ensemble_spectrum(const ComplexMatrix& vectors, std::span<const double> q);

/// Delta H_S in bits.
double ensemble_entropy(const VectorEnsemble& ensemble);

/// Greedy grouping: the first ungrouped vector in scan order seeds a group and
/// absorbs every later ungrouped vector within angle phi (inclusive) of the seed.
/// `order` defaults to list order.
Grouping greedy_group(const PairwiseAngles& angles, std::span<const double> q, double phi,
                      std::span<const Index> order = {});

/// Same procedure, recomputing each seed's row of angles instead of storing them.
Grouping greedy_group(const VectorEnsemble& ensemble, double phi);

/// Delta I = -sum p_r log2 p_r, Delta H = sum p_r Delta H_r.
GroupStatistics group_statistics(const VectorEnsemble& ensemble, const Grouping& grouping);

/// Entropy of the normalized mixture of the listed members.
double group_entropy(const VectorEnsemble& ensemble, std::span<const Index> members);

/// `count` uniform angles from 0 to pi/2 inclusive.
std::vector<double> uniform_phi_grid(int count = kDefaultSweepPoints);

struct SweepOptions {
  AngleOptions angles;
};

/// One SweepPoint per resolution; `phis` must be ascending. The angle matrix is
/// computed once when it fits the budget, otherwise rows are recomputed per seed.
std::vector<SweepPoint> resolution_sweep(const VectorEnsemble& ensemble, std::span<const double> phis,
                                         const SweepOptions& options = {});
std::vector<SweepPoint> resolution_sweep(const VectorEnsemble& ensemble, const PairwiseAngles& angles,
                                         std::span<const double> phis);

/// Lower envelope of the sweep: for each Delta H_tol taken from the sweep points,
/// the smallest Delta I among points with Delta H <= Delta H_tol. One point per
/// distinct Delta H, sorted by Delta H_tol.
std::vector<TradeoffPoint> tradeoff_envelope(std::span<const SweepPoint> sweep);

AngleHistogram angle_histogram(const PairwiseAngles& angles, int bins);
/// Streams the pairs; needs no N^2 storage.
AngleHistogram angle_histogram(const VectorEnsemble& ensemble, int bins);

/// Smallest number of leading eigenvalues whose sum reaches 1 - epsilon.
std::size_t explored_dimensions(const DensityMatrix& rho, double epsilon = kDefaultTraceDeficit);
std::size_t explored_dimensions(std::span<const double> descending_spectrum, Index dim,
                                double epsilon = kDefaultTraceDeficit);

/// Delta I / (Delta H_S - Delta H); std::nullopt when the denominator is not positive.
std::optional<double> hypersensitivity_ratio(const SweepPoint& point, double delta_H_S);

struct OrderSensitivityRow {
  double phi = 0.0;
  double delta_I_list_order = 0.0;
  double delta_I_shuffled = 0.0;
  std::size_t groups_list_order = 0;
  std::size_t groups_shuffled = 0;
};

/// Reruns the grouping with a seeded random scan order to expose the order dependence.
std::vector<OrderSensitivityRow> order_sensitivity(const VectorEnsemble& ensemble,
                                                   const PairwiseAngles& angles,
                                                   std::span<const double> phis, std::uint64_t seed);

}  // namespace hypersens
