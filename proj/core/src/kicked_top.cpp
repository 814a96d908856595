#include "hypersens/kicked_top.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hypersens/errors.hpp"

namespace hypersens {

namespace {

constexpr double kProbabilityTolerance = 1e-12;

ComplexVector z_rotation_phases(Spin spin, double angle) {
  ComplexVector phases(spin.dim());
  for (Index i = 0; i < spin.dim(); ++i) {
    phases[i] = std::polar(1.0, -angle * spin.m(i));
  }
  return phases;
}

}  // namespace

void TopParams::validate(int max_steps) const {
  if (!std::isfinite(k)) {
    throw InvalidParameter("top params: k must be finite");
  }
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw InvalidParameter("top params: g must be a finite non-negative angle");
  }
  if (steps < 0 || steps > max_steps) {
    throw InvalidParameter("top params: n = " + std::to_string(steps) + " outside [0, " +
                           std::to_string(max_steps) + "]");
  }
}

PerturbationHistory PerturbationHistory::from_index(std::uint64_t index, int steps) {
  if (steps < 0 || steps > 63 || (steps < 63 && index >= (std::uint64_t{1} << steps))) {
    throw InvalidParameter("perturbation history: index out of range");
  }
  PerturbationHistory h;
  h.labels.resize(static_cast<std::size_t>(steps));
  for (int m = 0; m < steps; ++m) {
    const auto bit = (index >> (steps - 1 - m)) & 1U;
    h.labels[static_cast<std::size_t>(m)] = bit ? +1 : -1;
  }
  h.probability = std::ldexp(1.0, -steps);
  return h;
}

InitialState InitialState::coherent(double theta, double phi_az) {
  InitialState s;
  s.kind = Kind::coherent;
  s.theta = theta;
  s.phi_az = phi_az;
  return s;
}

InitialState InitialState::explicit_state(const StateVector& psi) {
  InitialState s;
  s.kind = Kind::explicit_amplitudes;
  s.amplitudes = psi.amplitudes();
  return s;
}

StateVector InitialState::realize(Spin spin) const {
  if (kind == Kind::coherent) {
    return coherent_state(spin, theta, phi_az);
  }
  if (amplitudes.size() != spin.dim()) {
    throw InvalidParameter("initial state: explicit amplitudes have dimension " +
                           std::to_string(amplitudes.size()) + ", expected " +
                           std::to_string(spin.dim()));
  }
  return StateVector(amplitudes);
}

// ---------------------------------------------------------------------------
// VectorEnsemble

VectorEnsemble::VectorEnsemble(ComplexMatrix vectors, std::vector<double> probabilities)
    : vectors_(std::move(vectors)), probabilities_(std::move(probabilities)) {
  check_invariants();
}

VectorEnsemble::VectorEnsemble(ComplexMatrix vectors, std::vector<double> probabilities,
                               TopParams params, InitialState initial)
    : vectors_(std::move(vectors)),
      probabilities_(std::move(probabilities)),
      params_(params),
      initial_(std::move(initial)) {
  check_invariants();
  if (static_cast<std::uint64_t>(size()) != params.history_count()) {
    throw InvalidParameter("ensemble: N must equal 2^n");
  }
  if (dim() != params.spin.dim()) {
    throw InvalidParameter("ensemble: vector dimension does not match 2J+1");
  }
}

VectorEnsemble VectorEnsemble::uniform(ComplexMatrix vectors) {
  const auto n = static_cast<std::size_t>(vectors.cols());
  std::vector<double> q(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  return VectorEnsemble(std::move(vectors), std::move(q));
}

void VectorEnsemble::check_invariants() const {
  if (vectors_.cols() == 0 || vectors_.rows() < 2) {
    throw InvalidParameter("ensemble: needs at least one vector of dimension >= 2");
  }
  if (probabilities_.size() != static_cast<std::size_t>(vectors_.cols())) {
    throw InvalidParameter("ensemble: one probability per vector required");
  }
  double total = 0.0;
  for (double q : probabilities_) {
    if (!(q >= 0.0)) {
      throw InvalidParameter("ensemble: probabilities must be non-negative");
    }
    total += q;
  }
  if (!(std::abs(total - 1.0) <= kProbabilityTolerance)) {
    throw InvalidParameter("ensemble: probabilities sum to " + std::to_string(total));
  }
  for (Index j = 0; j < vectors_.cols(); ++j) {
    const double norm = vectors_.col(j).norm();
    if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
      throw InvalidParameter("ensemble: vector " + std::to_string(j) + " has norm " +
                             std::to_string(norm));
    }
  }
}

StateVector VectorEnsemble::state(Index j) const { return StateVector(vectors_.col(j)); }

PerturbationHistory VectorEnsemble::history(Index j) const {
  if (!params_) {
    throw InvalidParameter("ensemble: no perturbation histories attached");
  }
  auto h = PerturbationHistory::from_index(static_cast<std::uint64_t>(j), params_->steps);
  h.probability = probabilities_[static_cast<std::size_t>(j)];
  return h;
}

// ---------------------------------------------------------------------------
// Floquet operators and evolution

UnitaryOperator floquet_operator(const TopParams& params) {
  params.validate(std::max(params.steps, kDefaultMaxSteps));
  const auto ops = angular_momentum_ops(params.spin);
  const ComplexMatrix jx2 = ops.x.matrix() * ops.x.matrix();
  const auto twist =
      unitary_from_hermitian(HermitianOperator(jx2), params.k / (2.0 * params.spin.value()));
  const ComplexVector rotation = z_rotation_phases(params.spin, std::numbers::pi / 2.0);
  // Right-multiplying by a diagonal scales the columns.
  ComplexMatrix t = twist.matrix() * rotation.asDiagonal();
  return UnitaryOperator::from_trusted(std::move(t));
}

UnitaryOperator perturbed_floquet(const TopParams& params, int l) {
  if (l != -1 && l != 1) {
    throw InvalidParameter("perturbed floquet: l must be -1 or +1");
  }
  const auto t = floquet_operator(params);
  const ComplexVector kick = z_rotation_phases(params.spin, params.g * l);
  ComplexMatrix out = kick.asDiagonal() * t.matrix();
  return UnitaryOperator::from_trusted(std::move(out));
}

std::size_t evolve_memory_bytes(Index dim, int steps) {
  const std::size_t n_final = std::size_t{1} << steps;
  const std::size_t n_prev = steps > 0 ? n_final / 2 : 0;
  return (n_final + n_prev) * static_cast<std::size_t>(dim) * sizeof(Complex);
}

VectorEnsemble evolve_histories(const InitialState& initial, const TopParams& params,
                                const EvolveOptions& options) {
  params.validate(options.max_steps);
  const Index d = params.spin.dim();
  const std::size_t required = evolve_memory_bytes(d, params.steps);
  if (required > options.memory_budget_bytes) {
    throw ResourceError("evolve histories: ensemble of 2^" + std::to_string(params.steps) +
                            " vectors of dimension " + std::to_string(d) +
                            " exceeds the memory budget",
                        required, options.memory_budget_bytes);
  }

  const StateVector psi0 = initial.realize(params.spin);
  ComplexMatrix level(d, 1);
  level.col(0) = psi0.amplitudes();

  if (params.steps > 0) {
    const auto t = floquet_operator(params);
    const ComplexVector minus = z_rotation_phases(params.spin, -params.g);
    const ComplexVector plus = z_rotation_phases(params.spin, params.g);
    for (int m = 1; m <= params.steps; ++m) {
      // T is shared by both children; only the trailing z-kick differs.
      const ComplexMatrix advanced = t.matrix() * level;
      ComplexMatrix next(d, 2 * advanced.cols());
      for (Index j = 0; j < advanced.cols(); ++j) {
        next.col(2 * j) = minus.cwiseProduct(advanced.col(j));
        next.col(2 * j + 1) = plus.cwiseProduct(advanced.col(j));
      }
      level = std::move(next);
      if (options.on_level) {
        options.on_level(m, level);
      }
    }
  }

  const auto n = static_cast<std::size_t>(level.cols());
  std::vector<double> q(n, std::ldexp(1.0, -params.steps));
  return VectorEnsemble(std::move(level), std::move(q), params, initial);
}

VectorEnsemble evolve_histories(const StateVector& initial, const TopParams& params,
                                const EvolveOptions& options) {
  if (initial.dim() != params.spin.dim()) {
    throw InvalidParameter("evolve histories: initial state dimension does not match 2J+1");
  }
  return evolve_histories(InitialState::explicit_state(initial), params, options);
}

// ---------------------------------------------------------------------------
// Classical map

SpherePoint SpherePoint::from_angles(double theta, double phi_az) {
  return {std::sin(theta) * std::cos(phi_az), std::sin(theta) * std::sin(phi_az), std::cos(theta)};
}

double SpherePoint::theta() const { return std::acos(std::clamp(z / norm(), -1.0, 1.0)); }

double SpherePoint::phi_az() const {
  double phi = std::atan2(y, x);
  if (phi < 0.0) {
    phi += 2.0 * std::numbers::pi;
  }
  return phi;
}

double SpherePoint::norm() const { return std::sqrt(x * x + y * y + z * z); }

SpherePoint classical_step(SpherePoint p, double k) {
  const double xr = -p.y;
  const double yr = p.x;
  const double zr = p.z;
  const double c = std::cos(k * xr);
  const double s = std::sin(k * xr);
  return {xr, yr * c - zr * s, yr * s + zr * c};
}

double lyapunov_estimate(SpherePoint p, double k, int iterations) {
  if (iterations < 100) {
    throw InvalidParameter("lyapunov estimate: at least 100 iterations required");
  }
  const Eigen::Vector3d start(p.x, p.y, p.z);
  // Any tangent direction works; take one orthogonal to p.
  Eigen::Vector3d tangent = start.cross(Eigen::Vector3d(0.3, 0.5, 0.7));
  if (tangent.norm() < 1e-8) {
    tangent = start.cross(Eigen::Vector3d(1.0, 0.0, 0.0));
  }
  tangent.normalize();

  double log_growth = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double xr = -p.y;
    const double yr = p.x;
    const double zr = p.z;
    const double c = std::cos(k * xr);
    const double s = std::sin(k * xr);
    // Tangent map: rotation about z, then the x-dependent twist.
    const Eigen::Vector3d tr(-tangent.y(), tangent.x(), tangent.z());
    const double dtwist = k * tr.x();
    Eigen::Vector3d next_tangent(tr.x(),
                                 c * tr.y() - s * tr.z() - (yr * s + zr * c) * dtwist,
                                 s * tr.y() + c * tr.z() + (yr * c - zr * s) * dtwist);
    p = {xr, yr * c - zr * s, yr * s + zr * c};
    const Eigen::Vector3d pv(p.x, p.y, p.z);
    next_tangent -= pv * pv.dot(next_tangent);
    const double len = next_tangent.norm();
    log_growth += std::log(len);
    tangent = next_tangent / len;
  }
  const double bits = log_growth / (iterations * std::numbers::ln2);
  return std::max(bits, 0.0);
}

double LyapunovScan::theta_at(int i) const {
  return std::numbers::pi * (i + 0.5) / options.theta_cells;
}

double LyapunovScan::phi_at(int j) const {
  return 2.0 * std::numbers::pi * (j + 0.5) / options.phi_cells;
}

LyapunovScan scan_lyapunov(double k, const ScanOptions& options) {
  if (options.theta_cells < 1 || options.phi_cells < 1) {
    throw InvalidParameter("lyapunov scan: grid must have at least one cell");
  }
  LyapunovScan scan{k, options, {}};
  scan.exponents.resize(static_cast<std::size_t>(options.theta_cells) * options.phi_cells);
  for (int i = 0; i < options.theta_cells; ++i) {
    for (int j = 0; j < options.phi_cells; ++j) {
      const auto p = SpherePoint::from_angles(scan.theta_at(i), scan.phi_at(j));
      scan.exponents[static_cast<std::size_t>(i) * options.phi_cells + j] =
          lyapunov_estimate(p, k, options.iterations);
    }
  }
  return scan;
}

ResolvedInitialState chaotic_center(const LyapunovScan& scan) {
  const auto it = std::max_element(scan.exponents.begin(), scan.exponents.end());
  const auto idx = static_cast<int>(std::distance(scan.exponents.begin(), it));
  const int i = idx / scan.options.phi_cells;
  const int j = idx % scan.options.phi_cells;
  return {scan.theta_at(i), scan.phi_at(j), *it, 0};
}

ResolvedInitialState regular_center(const LyapunovScan& scan) {
  const int rows = scan.options.theta_cells;
  const int cols = scan.options.phi_cells;
  const auto cell = [cols](int i, int j) { return static_cast<std::size_t>(i) * cols + j; };

  std::vector<int> label(scan.exponents.size(), -1);
  std::vector<std::vector<std::size_t>> regions;
  for (int i0 = 0; i0 < rows; ++i0) {
    for (int j0 = 0; j0 < cols; ++j0) {
      if (label[cell(i0, j0)] >= 0 || scan.at(i0, j0) >= scan.options.regular_threshold) {
        continue;
      }
      const int id = static_cast<int>(regions.size());
      std::vector<std::size_t> members;
      std::vector<std::pair<int, int>> stack{{i0, j0}};
      label[cell(i0, j0)] = id;
      while (!stack.empty()) {
        const auto [i, j] = stack.back();
        stack.pop_back();
        members.push_back(cell(i, j));
        const std::pair<int, int> neighbours[] = {
            {i - 1, j}, {i + 1, j}, {i, (j + 1) % cols}, {i, (j + cols - 1) % cols}};
        for (const auto& [ni, nj] : neighbours) {
          if (ni < 0 || ni >= rows) continue;
          if (label[cell(ni, nj)] >= 0 || scan.at(ni, nj) >= scan.options.regular_threshold) continue;
          label[cell(ni, nj)] = id;
          stack.emplace_back(ni, nj);
        }
      }
      regions.push_back(std::move(members));
    }
  }
  if (regions.empty()) {
    throw NumericalError("regular center: no regular cells below threshold " +
                         std::to_string(scan.options.regular_threshold));
  }

  // Largest island by solid angle; ties resolved by scan order.
  const auto area = [&](const std::vector<std::size_t>& r) {
    double a = 0.0;
    for (auto c : r) a += std::sin(scan.theta_at(static_cast<int>(c) / cols));
    return a;
  };
  std::size_t best = 0;
  double best_area = area(regions[0]);
  for (std::size_t r = 1; r < regions.size(); ++r) {
    const double a = area(regions[r]);
    if (a > best_area + 1e-12) {
      best = r;
      best_area = a;
    }
  }

  const auto& island = regions[best];
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (auto c : island) {
    const int i = static_cast<int>(c) / cols;
    const int j = static_cast<int>(c) % cols;
    const auto p = SpherePoint::from_angles(scan.theta_at(i), scan.phi_at(j));
    mean += Eigen::Vector3d(p.x, p.y, p.z) * std::sin(scan.theta_at(i));
  }
  std::size_t nearest = island.front();
  double nearest_dot = -2.0;
  for (auto c : island) {
    const int i = static_cast<int>(c) / cols;
    const int j = static_cast<int>(c) % cols;
    const auto p = SpherePoint::from_angles(scan.theta_at(i), scan.phi_at(j));
    const double d = Eigen::Vector3d(p.x, p.y, p.z).dot(mean.normalized());
    if (d > nearest_dot) {
      nearest_dot = d;
      nearest = c;
    }
  }
  const int ni = static_cast<int>(nearest) / cols;
  const int nj = static_cast<int>(nearest) % cols;
  return {scan.theta_at(ni), scan.phi_at(nj), scan.at(ni, nj), island.size()};
}

}  // namespace hypersens
