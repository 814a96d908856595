#pragma once

// Closed-form results for vectors distributed randomly in a D-dimensional
// Hilbert space. D may be real-valued (D = 2^{Delta H_S} is not an integer in
// general). Unbounded results are returned as +/- infinity.

#include <span>
#include <vector>

namespace hypersens {

/// g(phi) = 2 (D-1) sin^{2D-3}(phi) cos(phi): density of the angle between two
/// random vectors. Requires D >= 2 and phi in [0, pi/2].
double random_angle_density(double dim, double phi);

/// Cumulative distribution sin^{2(D-1)}(phi) of random_angle_density.
double random_angle_cdf(double dim, double phi);

/// Location of the maximum of g: tan^2(phi) = 2D - 3.
double random_angle_peak(double dim);

/// Entropy (bits) of random vectors filling a Hilbert-space sphere of radius phi:
///   -(1 - a) log2(1 - a) - a log2(sin^2(phi) / D),  a = (D-1)/D sin^2(phi).
/// Zero at phi = 0 by continuity.
double sphere_entropy(double dim, double phi);

/// Information (bits) needed to single out one sphere of radius phi:
/// -(D-1) log2(sin^2 phi). +infinity at phi = 0.
double sphere_information(double dim, double phi);

/// Tolerable entropy as a function of the sphere information, obtained by
/// eliminating phi between sphere_entropy and sphere_information.
double tradeoff_curve(double dim, double delta_I_tilde);

/// d(Delta I~) / d(Delta H_tol) = -D / (sin^2(phi) ln(1 + D cot^2 phi)).
/// -infinity at the endpoints phi = 0 and phi = pi/2.
double marginal_tradeoff(double dim, double phi);

/// Near-pi/2 form of marginal_tradeoff in terms of epsilon = pi/2 - phi:
/// -D / ln(1 + D epsilon^2).
double marginal_tradeoff_near_pi_half(double dim, double epsilon);

/// Near-pi/2 form of sphere_information: (D-1) epsilon^2 / ln 2.
double near_pi_half_info(double dim, double epsilon);

/// D(t) = 2^{Delta H_S}.
double explored_dims_from_entropy(double delta_H_S);

struct TheoryRow {
  double phi = 0.0;
  double g = 0.0;
  double delta_H_tol = 0.0;
  double delta_I_tilde = 0.0;
  double slope = 0.0;
};

/// All theory quantities for one dimension over an angle grid.
std::vector<TheoryRow> theory_curve(double dim, std::span<const double> phis);

}  // namespace hypersens
