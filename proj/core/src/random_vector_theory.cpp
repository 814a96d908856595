#include "hypersens/random_vector_theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hypersens/errors.hpp"

namespace hypersens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dim(double dim) {
  if (!(dim >= 2.0) || !std::isfinite(dim)) {
    throw InvalidParameter("random-vector theory: D must be a finite value >= 2, got " +
                           std::to_string(dim));
  }
}

void check_phi(double phi) {
  if (!(phi >= 0.0 && phi <= std::numbers::pi / 2.0)) {
    throw InvalidParameter("random-vector theory: phi must lie in [0, pi/2]");
  }
}

// x log2 x with 0 log 0 = 0.
double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Entropy of the two-level spectrum {1 - a, a/(D-1) repeated D-1 times}, with s = sin^2 phi
// and a = (D-1)/D s.
double sphere_entropy_from_sin2(double dim, double s) {
  if (s <= 0.0) return 0.0;
  const double a = (dim - 1.0) / dim * s;
  return -xlog2x(1.0 - a) - a * std::log2(s / dim);
}

}  // namespace

double random_angle_density(double dim, double phi) {
  check_dim(dim);
  check_phi(phi);
  return 2.0 * (dim - 1.0) * std::pow(std::sin(phi), 2.0 * dim - 3.0) * std::cos(phi);
}

double random_angle_cdf(double dim, double phi) {
  check_dim(dim);
  check_phi(phi);
  return std::pow(std::sin(phi), 2.0 * (dim - 1.0));
}

double random_angle_peak(double dim) {
  check_dim(dim);
  return std::atan(std::sqrt(2.0 * dim - 3.0));
}

double sphere_entropy(double dim, double phi) {
  check_dim(dim);
  if (!(phi > 0.0)) {
    check_phi(phi);
    return 0.0;
  }
  check_phi(phi);
  const double s = std::sin(phi);
  return sphere_entropy_from_sin2(dim, s * s);
}

double sphere_information(double dim, double phi) {
  check_dim(dim);
  check_phi(phi);
  if (phi == 0.0) return kInf;
  const double s = std::sin(phi);
  return -(dim - 1.0) * std::log2(s * s);
}

double tradeoff_curve(double dim, double delta_I_tilde) {
  check_dim(dim);
  if (!(delta_I_tilde >= 0.0)) {
    throw InvalidParameter("tradeoff curve: information must be non-negative");
  }
  // sin^2 phi recovered from the sphere information.
  const double s = std::exp2(-delta_I_tilde / (dim - 1.0));
  return sphere_entropy_from_sin2(dim, s);
}

double marginal_tradeoff(double dim, double phi) {
  check_dim(dim);
  check_phi(phi);
  if (phi == 0.0 || phi == std::numbers::pi / 2.0) return -kInf;
  const double s = std::sin(phi);
  const double cot = std::cos(phi) / s;
  return -dim / (s * s * std::log1p(dim * cot * cot));
}

double marginal_tradeoff_near_pi_half(double dim, double epsilon) {
  check_dim(dim);
  if (!(epsilon >= 0.0)) {
    throw InvalidParameter("marginal tradeoff: epsilon must be non-negative");
  }
  if (epsilon == 0.0) return -kInf;
  return -dim / std::log1p(dim * epsilon * epsilon);
}

double near_pi_half_info(double dim, double epsilon) {
  check_dim(dim);
  if (!(epsilon >= 0.0)) {
    throw InvalidParameter("near-pi/2 information: epsilon must be non-negative");
  }
  return (dim - 1.0) * epsilon * epsilon / std::numbers::ln2;
}

double explored_dims_from_entropy(double delta_H_S) {
  if (!(delta_H_S >= 0.0)) {
    throw InvalidParameter("explored dimensions: entropy must be non-negative");
  }
  return std::exp2(delta_H_S);
}

std::vector<TheoryRow> theory_curve(double dim, std::span<const double> phis) {
  check_dim(dim);
  std::vector<TheoryRow> rows;
  rows.reserve(phis.size());
  for (double phi : phis) {
    rows.push_back({phi, random_angle_density(dim, phi), sphere_entropy(dim, phi),
                    sphere_information(dim, phi), marginal_tradeoff(dim, phi)});
  }
  return rows;
}

}  // namespace hypersens
