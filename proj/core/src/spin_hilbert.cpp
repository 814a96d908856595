#include "hypersens/spin_hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "hypersens/errors.hpp"

namespace hypersens {

namespace {

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------
// Spin

Spin::Spin(int twice_j) : twice_j_(twice_j) {
  if (twice_j <= 0) {
    throw InvalidParameter("spin: 2J must be a positive integer, got " + std::to_string(twice_j));
  }
}

Spin Spin::from_value(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-9 || rounded < 1.0 || rounded > 1e8) {
    throw InvalidParameter("spin: J must be a positive half-integer, got " + std::to_string(j));
  }
  return Spin(static_cast<int>(rounded));
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) {
    throw InvalidParameter("state vector: dimension must be at least 2");
  }
  const double norm = amps_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw InvalidParameter("state vector: norm " + std::to_string(norm) + " is not 1");
  }
}

StateVector StateVector::normalized(ComplexVector amplitudes) {
  if (amplitudes.size() < 2) {
    throw InvalidParameter("state vector: dimension must be at least 2");
  }
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidParameter("state vector: cannot normalize a zero or non-finite vector");
  }
  amplitudes /= norm;
  return StateVector(std::move(amplitudes), Unchecked{});
}

StateVector StateVector::basis(Index dim, Index k) {
  if (dim < 2 || k < 0 || k >= dim) {
    throw InvalidParameter("state vector: basis index out of range");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v[k] = 1.0;
  return StateVector(std::move(v), Unchecked{});
}

// ---------------------------------------------------------------------------
// Operators

HermitianOperator::HermitianOperator(ComplexMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw InvalidParameter("hermitian operator: matrix must be square and non-empty");
  }
  const double scale = std::max(max_abs_entry(m_), 1.0);
  const double defect = max_abs_entry(m_ - m_.adjoint());
  if (!(defect <= kHermitianTolerance * scale)) {
    throw InvalidParameter("hermitian operator: not Hermitian (defect " + std::to_string(defect) +
                           ")");
  }
}

UnitaryOperator::UnitaryOperator(ComplexMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw InvalidParameter("unitary operator: matrix must be square and non-empty");
  }
  const double defect = unitarity_defect();
  if (!(defect < kUnitaryTolerance)) {
    throw InvalidParameter("unitary operator: U^dagger U deviates from I by " +
                           std::to_string(defect));
  }
}

UnitaryOperator UnitaryOperator::from_trusted(ComplexMatrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw InvalidParameter("unitary operator: matrix must be square and non-empty");
  }
  return UnitaryOperator(std::move(entries), Unchecked{});
}

UnitaryOperator UnitaryOperator::identity(Index dim) {
  return from_trusted(ComplexMatrix::Identity(dim, dim));
}

StateVector UnitaryOperator::apply(const StateVector& psi) const {
  if (psi.dim() != dim()) {
    throw InvalidParameter("unitary operator: dimension mismatch in apply");
  }
  ComplexVector out = m_ * psi.amplitudes();
  // Unitarity holds to ~1e-13; renormalize so the result stays a valid state.
  return StateVector::normalized(std::move(out));
}

UnitaryOperator UnitaryOperator::adjoint() const {
  return UnitaryOperator(m_.adjoint(), Unchecked{});
}

double UnitaryOperator::unitarity_defect() const {
  const ComplexMatrix gram = m_.adjoint() * m_;
  return max_abs_entry(gram - ComplexMatrix::Identity(dim(), dim()));
}

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
  if (a.dim() != b.dim()) {
    throw InvalidParameter("unitary operator: dimension mismatch in product");
  }
  return UnitaryOperator(a.m_ * b.m_, UnitaryOperator::Unchecked{});
}

DensityMatrix::DensityMatrix(ComplexMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw InvalidParameter("density matrix: matrix must be square and non-empty");
  }
  const double scale = std::max(max_abs_entry(m_), 1.0);
  if (!(max_abs_entry(m_ - m_.adjoint()) <= kHermitianTolerance * scale)) {
    throw InvalidParameter("density matrix: not Hermitian");
  }
  const double trace = m_.trace().real();
  if (!(std::abs(trace - 1.0) <= kTraceTolerance)) {
    throw InvalidParameter("density matrix: trace " + std::to_string(trace) + " is not 1");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const ComplexVector& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("density matrix: eigenvalue computation failed");
  }
  Eigen::VectorXd ev = solver.eigenvalues().reverse();
  return ev;
}

// ---------------------------------------------------------------------------
// Spin operators and states

AngularMomentum angular_momentum_ops(Spin j) {
  const Index d = j.dim();
  const double jv = j.value();
  ComplexMatrix jx = ComplexMatrix::Zero(d, d);
  ComplexMatrix jy = ComplexMatrix::Zero(d, d);
  ComplexMatrix jz = ComplexMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    jz(i, i) = j.m(i);
  }
  // J+ |m> = sqrt(J(J+1) - m(m+1)) |m+1>; |m+1> sits one index above |m>.
  for (Index i = 1; i < d; ++i) {
    const double m = j.m(i);
    const double c = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
    jx(i - 1, i) = 0.5 * c;
    jx(i, i - 1) = 0.5 * c;
    jy(i - 1, i) = Complex(0.0, -0.5 * c);
    jy(i, i - 1) = Complex(0.0, 0.5 * c);
  }
  return {HermitianOperator(std::move(jx)), HermitianOperator(std::move(jy)),
          HermitianOperator(std::move(jz))};
}

StateVector coherent_state(Spin j, double theta, double phi_az) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi) || !std::isfinite(phi_az)) {
    throw InvalidParameter("coherent state: theta must lie in [0, pi]");
  }
  const auto ops = angular_momentum_ops(j);
  const ComplexMatrix axis_component =
      -std::sin(phi_az) * ops.x.matrix() + std::cos(phi_az) * ops.y.matrix();
  const auto rotation = unitary_from_hermitian(HermitianOperator(axis_component), theta);
  return rotation.apply(StateVector::basis(j.dim(), 0));
}

double angle_from_overlap(double magnitude) noexcept {
  if (magnitude >= 1.0 - kOverlapSnap) return 0.0;
  return std::acos(std::clamp(magnitude, 0.0, 1.0));
}

double hilbert_angle(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw InvalidParameter("hilbert angle: dimension mismatch");
  }
  const ComplexVector& u = a.amplitudes();
  const ComplexVector& v = b.amplitudes();
  const double norms = std::sqrt(std::abs(u.dot(u)) * std::abs(v.dot(v)));
  return angle_from_overlap(std::abs(u.dot(v)) / norms);
}

double entropy_from_eigenvalues(std::span<const double> eigenvalues) {
  double h = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda < -kNormTolerance) {
      throw InvalidParameter("entropy: negative eigenvalue " + std::to_string(lambda));
    }
    if (lambda > kEigenvalueFloor) {
      h -= lambda * std::log2(lambda);
    }
  }
  return std::max(h, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd ev = rho.eigenvalues();
  const double h = entropy_from_eigenvalues(std::span<const double>(ev.data(), ev.size()));
  return std::min(h, std::log2(static_cast<double>(rho.dim())));
}

UnitaryOperator unitary_from_hermitian(const HermitianOperator& h, double scale) {
  if (!std::isfinite(scale)) {
    throw InvalidParameter("unitary from hermitian: scale must be finite");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("unitary from hermitian: eigendecomposition failed");
  }
  ComplexMatrix v = solver.eigenvectors();
  v.colwise().normalize();
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  ComplexVector phases(lambda.size());
  for (Index k = 0; k < lambda.size(); ++k) {
    phases[k] = std::polar(1.0, -scale * lambda[k]);
  }
  ComplexMatrix u = v * phases.asDiagonal() * v.adjoint();
  return UnitaryOperator::from_trusted(std::move(u));
}

StateVector haar_random_vector(Index dim, std::mt19937_64& rng) {
  if (dim < 2) {
    throw InvalidParameter("haar random vector: dimension must be at least 2");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Complex(re, im);
  }
  return StateVector::normalized(std::move(v));
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(seed ^ mix(index));
}

}  // namespace hypersens
