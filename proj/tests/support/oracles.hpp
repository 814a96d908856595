#pragma once

// Independent reference implementations. None of them call into the code they
// check beyond plain data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hypersens/spin_hilbert.hpp"

namespace hypersens::oracle {

// Binomial coherent-state amplitudes, index i <-> m = J - i:
// sqrt(C(2J, J+m)) cos^{J+m}(theta/2) sin^{J-m}(theta/2) e^{i (J-m) phi}.
inline ComplexVector coherent_amplitudes(int twice_j, double theta, double phi) {
  ComplexVector v(twice_j + 1);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  for (int i = 0; i <= twice_j; ++i) {
    const int up = twice_j - i;  // J + m
    const double log_binom =
        std::lgamma(twice_j + 1.0) - std::lgamma(up + 1.0) - std::lgamma(i + 1.0);
    const double mag = std::exp(0.5 * log_binom) * std::pow(c, up) * std::pow(s, i);
    v[i] = std::polar(mag, i * phi);
  }
  return v;
}

inline double overlap(const ComplexVector& a, const ComplexVector& b) {
  Complex acc = 0.0;
  for (Index i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return std::abs(acc);
}

inline double angle(const ComplexVector& a, const ComplexVector& b) {
  return std::acos(std::clamp(overlap(a, b), 0.0, 1.0));
}

// Plain transcription of the scan: list order, seed absorbs later unassigned
// vectors within phi (inclusive). Returns the group label of every vector.
inline std::vector<int> greedy_labels(const ComplexMatrix& v, double phi) {
  const Index n = v.cols();
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (Index i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    for (Index j = i + 1; j < n; ++j) {
      if (label[j] < 0 && angle(v.col(i), v.col(j)) <= phi) label[j] = next;
    }
    ++next;
  }
  return label;
}

// Entropy of sum_j w_j |v_j><v_j| / sum w, from the full D x D matrix through the
// general (non-Hermitian) complex eigensolver.
inline double mixture_entropy(const ComplexMatrix& v, const std::vector<double>& w,
                              const std::vector<Index>& members) {
  double total = 0.0;
  for (Index j : members) total += w[j];
  ComplexMatrix rho = ComplexMatrix::Zero(v.rows(), v.rows());
  for (Index j : members) rho += (w[j] / total) * v.col(j) * v.col(j).adjoint();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(rho);
  double h = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()[i].real();
    if (lam > 1e-14) h -= lam * std::log2(lam);
  }
  return h;
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  if (intervals % 2 != 0) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Five-point central difference.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline std::size_t trace_capture(std::vector<double> eig, double eps) {
  std::sort(eig.begin(), eig.end(), std::greater<>());
  double acc = 0.0;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    acc += eig[i];
    if (acc >= 1.0 - eps) return i + 1;
  }
  return eig.size();
}

}  // namespace hypersens::oracle
