#pragma once

// Finite-dimensional Hilbert-space primitives for a spin-J system.
//
// Basis convention: the Jz eigenbasis ordered by descending magnetic quantum
// number, i.e. index i carries m = J - i for i = 0 .. 2J.

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

#include <Eigen/Dense>

namespace hypersens {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kEigenvalueFloor = 1e-14;
/// Overlaps this close to 1 are read as exactly 1. arccos has infinite slope
/// there, so a one-ulp shortfall would otherwise turn into a 2e-8 angle.
inline constexpr double kOverlapSnap = 8 * std::numeric_limits<double>::epsilon();

/// Spin quantum number J, stored exactly as the integer 2J.
class Spin {
 public:
  explicit Spin(int twice_j);

  /// Accepts J = 1/2, 1, 3/2, ...; rejects anything that is not a positive half-integer.
  static Spin from_value(double j);

  int twice_j() const noexcept { return twice_j_; }
  double value() const noexcept { return 0.5 * twice_j_; }
  Index dim() const noexcept { return twice_j_ + 1; }
  /// Magnetic quantum number carried by basis index i.
  double m(Index i) const noexcept { return value() - static_cast<double>(i); }

  friend bool operator==(Spin, Spin) = default;

 private:
  int twice_j_;
};

/// Unit-norm vector of D >= 2 complex amplitudes.
class StateVector {
 public:
  /// Throws InvalidParameter unless the norm is 1 within kNormTolerance.
  explicit StateVector(ComplexVector amplitudes);

  /// Rescales to unit norm; throws on a zero vector.
  static StateVector normalized(ComplexVector amplitudes);
  static StateVector basis(Index dim, Index k);

  const ComplexVector& amplitudes() const noexcept { return amps_; }
  Index dim() const noexcept { return amps_.size(); }
  Complex operator[](Index i) const { return amps_[i]; }

 private:
  struct Unchecked {};
  StateVector(ComplexVector amplitudes, Unchecked) : amps_(std::move(amplitudes)) {}

  ComplexVector amps_;
};

class HermitianOperator {
 public:
  /// Throws InvalidParameter if the matrix is not square or not Hermitian
  /// within kHermitianTolerance relative to its largest entry.
  explicit HermitianOperator(ComplexMatrix entries);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

class UnitaryOperator {
 public:
  /// Verifies U^dagger U = I within kUnitaryTolerance (max-entry norm). O(D^3).
  explicit UnitaryOperator(ComplexMatrix entries);

  /// For matrices unitary by construction (products and spectral exponentials);
  /// skips the O(D^3) check.
  static UnitaryOperator from_trusted(ComplexMatrix entries);
  static UnitaryOperator identity(Index dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

  StateVector apply(const StateVector& psi) const;
  UnitaryOperator adjoint() const;
  /// Largest |(U^dagger U - I)_ij|.
  double unitarity_defect() const;

  friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);

 private:
  struct Unchecked {};
  UnitaryOperator(ComplexMatrix entries, Unchecked) : m_(std::move(entries)) {}

  ComplexMatrix m_;
};

/// Hermitian, unit-trace, positive semidefinite. Construction checks the first
/// two; the spectrum is checked when the entropy is computed.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix entries);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(Index dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

  /// Eigenvalues in descending order.
  Eigen::VectorXd eigenvalues() const;

 private:
  ComplexMatrix m_;
};

struct AngularMomentum {
  HermitianOperator x;
  HermitianOperator y;
  HermitianOperator z;
};

/// Jx, Jy built from the ladder operators; Jz diagonal. Units of hbar.
AngularMomentum angular_momentum_ops(Spin j);

/// SU(2) coherent state: |J,J> rotated by theta about (-sin phi_az, cos phi_az, 0),
/// so that <J>/J points along (sin theta cos phi_az, sin theta sin phi_az, cos theta).
StateVector coherent_state(Spin j, double theta, double phi_az);

/// Hilbert-space angle arccos(|<a|b>|) in [0, pi/2]. The overlap is divided by
/// both norms so that a vector and itself give exactly 0.
double hilbert_angle(const StateVector& a, const StateVector& b);

/// arccos of an overlap magnitude clamped to [0, 1]; 0 within kOverlapSnap of 1.
double angle_from_overlap(double magnitude) noexcept;

/// -sum lambda log2 lambda with eigenvalues below kEigenvalueFloor dropped.
/// Throws InvalidParameter on eigenvalues below -kNormTolerance.
double entropy_from_eigenvalues(std::span<const double> eigenvalues);

/// Von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho);

/// exp(-i * scale * H) via the Hermitian eigendecomposition H = V diag(lambda) V^dagger.
UnitaryOperator unitary_from_hermitian(const HermitianOperator& h, double scale);

/// Haar-distributed pure state: D independent standard complex Gaussians, normalized.
StateVector haar_random_vector(Index dim, std::mt19937_64& rng);

/// Seed of the independent substream used for sample `index` of a run seeded with `seed`.
/// Two rounds of splitmix64 mixing; the mapping is stable across releases.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace hypersens
