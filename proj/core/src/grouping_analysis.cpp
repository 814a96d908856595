#include "hypersens/grouping_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "hypersens/errors.hpp"

namespace hypersens {

namespace {

Eigen::VectorXd hermitian_spectrum_descending(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spectrum: eigenvalue computation failed");
  }
  return solver.eigenvalues().reverse();
}

double information_bits(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return std::max(h, 0.0);
}

void check_phi(double phi) {
  if (!(phi >= 0.0 && phi <= std::numbers::pi / 2.0)) {
    throw InvalidParameter("grouping: resolution angle must lie in [0, pi/2]");
  }
}

}  // namespace

bool Grouping::same_partition(const Grouping& other) const {
  if (groups.size() != other.groups.size()) return false;
  for (std::size_t r = 0; r < groups.size(); ++r) {
    if (groups[r].members != other.groups[r].members) return false;
  }
  return true;
}

std::uint64_t AngleHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double AngleHistogram::mass_below(double phi) const {
  const auto all = total();
  if (all == 0) return 0.0;
  std::uint64_t below = 0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (edges[b + 1] <= phi + 1e-15) below += counts[b];
  }
  return static_cast<double>(below) / static_cast<double>(all);
}

// ---------------------------------------------------------------------------
// Densities and spectra

DensityMatrix average_density(const VectorEnsemble& ensemble) {
  const auto q = ensemble.probabilities();
  Eigen::VectorXd w(static_cast<Index>(q.size()));
  for (std::size_t j = 0; j < q.size(); ++j) w[static_cast<Index>(j)] = q[j];
  const ComplexMatrix& psi = ensemble.vectors();
  ComplexMatrix rho = psi * w.asDiagonal() * psi.adjoint();
  // Exact Hermitian symmetry; GEMM leaves ~1e-17 asymmetry.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

Eigen::VectorXd ensemble_spectrum(const ComplexMatrix& vectors, std::span<const double> q) {
  const Index n = vectors.cols();
  const Index d = vectors.rows();
  Eigen::VectorXd sqrt_q(n);
  for (Index j = 0; j < n; ++j) sqrt_q[j] = std::sqrt(q[static_cast<std::size_t>(j)]);
  if (n < d) {
    const ComplexMatrix weighted = vectors * sqrt_q.asDiagonal();
    ComplexMatrix gram = weighted.adjoint() * weighted;
    gram = 0.5 * (gram + gram.adjoint()).eval();
    return hermitian_spectrum_descending(gram);
  }
  const ComplexMatrix weighted = vectors * sqrt_q.asDiagonal();
  ComplexMatrix rho = weighted * weighted.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return hermitian_spectrum_descending(rho);
}

Eigen::VectorXd ensemble_spectrum(const VectorEnsemble& ensemble) {
  return ensemble_spectrum(ensemble.vectors(), ensemble.probabilities());
}

double ensemble_entropy(const VectorEnsemble& ensemble) {
  const Eigen::VectorXd ev = ensemble_spectrum(ensemble);
  return entropy_from_eigenvalues(std::span<const double>(ev.data(), ev.size()));
}

// ---------------------------------------------------------------------------
// Grouping

Grouping greedy_group(const PairwiseAngles& angles, std::span<const double> q, double phi,
                      std::span<const Index> order) {
  check_phi(phi);
  const Index n = angles.size();
  if (q.size() != static_cast<std::size_t>(n)) {
    throw InvalidParameter("grouping: one probability per vector required");
  }
  std::vector<Index> scan(static_cast<std::size_t>(n));
  if (order.empty()) {
    std::iota(scan.begin(), scan.end(), Index{0});
  } else {
    std::vector<char> seen(scan.size(), 0);
    bool ok = order.size() == scan.size();
    for (std::size_t i = 0; ok && i < order.size(); ++i) {
      const Index j = order[i];
      ok = j >= 0 && j < n && !seen[static_cast<std::size_t>(j)];
      if (ok) seen[static_cast<std::size_t>(j)] = 1;
    }
    if (!ok) {
      throw InvalidParameter("grouping: scan order must be a permutation of the ensemble");
    }
    scan.assign(order.begin(), order.end());
  }

  Grouping out{phi, {}};
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  for (std::size_t s = 0; s < scan.size(); ++s) {
    const Index seed = scan[s];
    if (taken[static_cast<std::size_t>(seed)]) continue;
    Group g;
    g.seed = seed;
    g.members.push_back(seed);
    taken[static_cast<std::size_t>(seed)] = 1;
    for (std::size_t t = s + 1; t < scan.size(); ++t) {
      const Index j = scan[t];
      if (!taken[static_cast<std::size_t>(j)] && angles(seed, j) <= phi) {
        taken[static_cast<std::size_t>(j)] = 1;
        g.members.push_back(j);
      }
    }
    std::sort(g.members.begin() + 1, g.members.end());
    double p = 0.0;
    for (Index j : g.members) p += q[static_cast<std::size_t>(j)];
    g.probability = p;
    out.groups.push_back(std::move(g));
  }
  return out;
}

Grouping greedy_group(const VectorEnsemble& ensemble, double phi) {
  check_phi(phi);
  const Index n = ensemble.size();
  const auto q = ensemble.probabilities();
  const ComplexMatrix& psi = ensemble.vectors();

  const AngleKernel angle(psi);
  Grouping out{phi, {}};
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  for (Index seed = 0; seed < n; ++seed) {
    if (taken[static_cast<std::size_t>(seed)]) continue;
    Group g;
    g.seed = seed;
    g.members.push_back(seed);
    taken[static_cast<std::size_t>(seed)] = 1;
    for (Index j = seed + 1; j < n; ++j) {
      if (!taken[static_cast<std::size_t>(j)] && angle(seed, j) <= phi) {
        taken[static_cast<std::size_t>(j)] = 1;
        g.members.push_back(j);
      }
    }
    double p = 0.0;
    for (Index j : g.members) p += q[static_cast<std::size_t>(j)];
    g.probability = p;
    out.groups.push_back(std::move(g));
  }
  return out;
}

double group_entropy(const VectorEnsemble& ensemble, std::span<const Index> members) {
  if (members.size() <= 1) return 0.0;
  const auto q = ensemble.probabilities();
  const auto nr = static_cast<Index>(members.size());
  double p = 0.0;
  for (Index j : members) p += q[static_cast<std::size_t>(j)];
  if (!(p > 0.0)) return 0.0;

  ComplexMatrix block(ensemble.dim(), nr);
  std::vector<double> weights(members.size());
  for (Index c = 0; c < nr; ++c) {
    block.col(c) = ensemble.column(members[static_cast<std::size_t>(c)]);
    weights[static_cast<std::size_t>(c)] = q[static_cast<std::size_t>(members[static_cast<std::size_t>(c)])] / p;
  }
  const Eigen::VectorXd ev = ensemble_spectrum(block, weights);
  const double h = entropy_from_eigenvalues(std::span<const double>(ev.data(), ev.size()));
  return std::min(h, std::log2(static_cast<double>(std::min<Index>(nr, ensemble.dim()))));
}

GroupStatistics group_statistics(const VectorEnsemble& ensemble, const Grouping& grouping) {
  GroupStatistics stats;
  stats.group_entropies.reserve(grouping.groups.size());
  std::vector<double> p;
  p.reserve(grouping.groups.size());
  for (const auto& g : grouping.groups) {
    for (Index j : g.members) {
      if (j < 0 || j >= ensemble.size()) {
        throw InvalidParameter("group statistics: grouping does not belong to this ensemble");
      }
    }
    const double h = group_entropy(ensemble, g.members);
    stats.group_entropies.push_back(h);
    stats.delta_H += g.probability * h;
    p.push_back(g.probability);
  }
  stats.delta_I = information_bits(p);
  return stats;
}

std::vector<double> uniform_phi_grid(int count) {
  if (count < 2) {
    throw InvalidParameter("phi grid: at least two points required");
  }
  std::vector<double> phis(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    phis[static_cast<std::size_t>(i)] = (std::numbers::pi / 2.0) * i / (count - 1);
  }
  phis.back() = std::numbers::pi / 2.0;
  return phis;
}

namespace {

void check_sorted(std::span<const double> phis) {
  if (!std::is_sorted(phis.begin(), phis.end())) {
    throw InvalidParameter("resolution sweep: angles must be ascending");
  }
  for (double phi : phis) check_phi(phi);
}

template <class GroupFn>
std::vector<SweepPoint> sweep_with(const VectorEnsemble& ensemble, std::span<const double> phis,
                                   GroupFn&& group_at) {
  std::vector<SweepPoint> points;
  points.reserve(phis.size());
  Grouping previous;
  GroupStatistics previous_stats;
  bool have_previous = false;
  for (double phi : phis) {
    Grouping g = group_at(phi);
    // Neighbouring resolutions often produce the identical partition.
    if (!have_previous || !g.same_partition(previous)) {
      previous_stats = group_statistics(ensemble, g);
      previous = std::move(g);
      have_previous = true;
    }
    points.push_back({phi, previous_stats.delta_I, previous_stats.delta_H, previous.size()});
  }
  return points;
}

}  // namespace

std::vector<SweepPoint> resolution_sweep(const VectorEnsemble& ensemble, const PairwiseAngles& angles,
                                         std::span<const double> phis) {
  check_sorted(phis);
  if (angles.size() != ensemble.size()) {
    throw InvalidParameter("resolution sweep: angle matrix does not match the ensemble");
  }
  return sweep_with(ensemble, phis, [&](double phi) {
    return greedy_group(angles, ensemble.probabilities(), phi);
  });
}

std::vector<SweepPoint> resolution_sweep(const VectorEnsemble& ensemble, std::span<const double> phis,
                                         const SweepOptions& options) {
  check_sorted(phis);
  if (PairwiseAngles::storage_bytes(ensemble.size()) <= options.angles.memory_budget_bytes) {
    const auto angles = PairwiseAngles::compute(ensemble.vectors(), options.angles);
    return resolution_sweep(ensemble, angles, phis);
  }
  return sweep_with(ensemble, phis, [&](double phi) { return greedy_group(ensemble, phi); });
}

std::vector<TradeoffPoint> tradeoff_envelope(std::span<const SweepPoint> sweep) {
  std::vector<SweepPoint> sorted(sweep.begin(), sweep.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return a.delta_H < b.delta_H;
  });
  std::vector<TradeoffPoint> out;
  out.reserve(sorted.size());
  double best = std::numeric_limits<double>::infinity();
  double best_phi = 0.0;
  // Points sharing a Delta H are absorbed together, so each Delta H_tol appears once.
  for (std::size_t i = 0; i < sorted.size();) {
    const double tol = sorted[i].delta_H;
    for (; i < sorted.size() && sorted[i].delta_H == tol; ++i) {
      if (sorted[i].delta_I < best) {
        best = sorted[i].delta_I;
        best_phi = sorted[i].phi;
      }
    }
    out.push_back({tol, best, best_phi});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Histograms and diagnostics

namespace {

AngleHistogram empty_histogram(int bins) {
  if (bins < 2) {
    throw InvalidParameter("angle histogram: at least two bins required");
  }
  AngleHistogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) {
    h.edges[static_cast<std::size_t>(b)] = (std::numbers::pi / 2.0) * b / bins;
  }
  h.edges.back() = std::numbers::pi / 2.0;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  return h;
}

void add_angle(AngleHistogram& h, double phi) {
  const auto bins = static_cast<double>(h.counts.size());
  auto b = static_cast<std::size_t>(phi / (std::numbers::pi / 2.0) * bins);
  b = std::min(b, h.counts.size() - 1);
  ++h.counts[b];
}

void finish_density(AngleHistogram& h) {
  const double total = static_cast<double>(h.total());
  h.density.assign(h.counts.size(), 0.0);
  if (total == 0.0) return;
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double width = h.edges[b + 1] - h.edges[b];
    h.density[b] = static_cast<double>(h.counts[b]) / (total * width);
  }
}

}  // namespace

AngleHistogram angle_histogram(const PairwiseAngles& angles, int bins) {
  auto h = empty_histogram(bins);
  for (double phi : angles.packed()) add_angle(h, phi);
  finish_density(h);
  return h;
}

AngleHistogram angle_histogram(const VectorEnsemble& ensemble, int bins) {
  auto h = empty_histogram(bins);
  const AngleKernel angle(ensemble.vectors());
  for (Index i = 0; i < ensemble.size(); ++i) {
    for (Index j = i + 1; j < ensemble.size(); ++j) add_angle(h, angle(i, j));
  }
  finish_density(h);
  return h;
}

std::size_t explored_dimensions(std::span<const double> spectrum, Index dim, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw InvalidParameter("explored dimensions: epsilon must lie in [0, 1)");
  }
  const double target = 1.0 - epsilon - 1e-12;
  double captured = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    captured += spectrum[k];
    if (captured >= target) return k + 1;
  }
  return static_cast<std::size_t>(std::max<Index>(dim, 1));
}

std::size_t explored_dimensions(const DensityMatrix& rho, double epsilon) {
  const Eigen::VectorXd ev = rho.eigenvalues();
  return explored_dimensions(std::span<const double>(ev.data(), ev.size()), rho.dim(), epsilon);
}

std::optional<double> hypersensitivity_ratio(const SweepPoint& point, double delta_H_S) {
  const double denom = delta_H_S - point.delta_H;
  if (!(denom > 0.0)) return std::nullopt;
  return point.delta_I / denom;
}

std::vector<OrderSensitivityRow> order_sensitivity(const VectorEnsemble& ensemble,
                                                   const PairwiseAngles& angles,
                                                   std::span<const double> phis, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(ensemble.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<OrderSensitivityRow> rows;
  rows.reserve(phis.size());
  const auto q = ensemble.probabilities();
  for (double phi : phis) {
    const auto listed = greedy_group(angles, q, phi);
    const auto shuffled = greedy_group(angles, q, phi, order);
    std::vector<double> p1, p2;
    for (const auto& g : listed.groups) p1.push_back(g.probability);
    for (const auto& g : shuffled.groups) p2.push_back(g.probability);
    rows.push_back({phi, information_bits(p1), information_bits(p2), listed.size(), shuffled.size()});
  }
  return rows;
}

}  // namespace hypersens
