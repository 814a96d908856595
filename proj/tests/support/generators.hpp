#pragma once

// Seeded generators for property tests. Every case draws from its own
// substream so a failing case can be replayed from (seed, case) alone.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "hypersens/kicked_top.hpp"

namespace hypersens::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  ComplexVector gaussian(Index dim) {
    std::normal_distribution<double> n;
    ComplexVector v(dim);
    for (Index i = 0; i < dim; ++i) {
      const double re = n(rng_);
      v[i] = Complex(re, n(rng_));
    }
    return v;
  }

  StateVector state(Index dim) { return StateVector::normalized(gaussian(dim)); }

  // Probabilities drawn from a flat Dirichlet, or uniform.
  std::vector<double> probabilities(Index n, bool uniform) {
    std::vector<double> q(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    if (uniform) return q;
    std::exponential_distribution<double> e(1.0);
    double total = 0.0;
    for (auto& x : q) total += (x = e(rng_) + 1e-3);
    for (auto& x : q) x /= total;
    // Push the residual into the largest entry so the sum is 1 to roundoff.
    double sum = 0.0;
    for (double x : q) sum += x;
    *std::max_element(q.begin(), q.end()) += 1.0 - sum;
    return q;
  }

  // Vectors scattered around a few centers with angular spread controlled by
  // `spread`, so that groupings at moderate phi are neither trivial nor singletons.
  ComplexMatrix clustered(Index n, Index dim, int centers, double spread) {
    std::vector<ComplexVector> c;
    for (int i = 0; i < centers; ++i) c.push_back(state(dim).amplitudes());
    ComplexMatrix m(dim, n);
    for (Index j = 0; j < n; ++j) {
      ComplexVector v = c[static_cast<std::size_t>(integer(0, centers - 1))] + spread * gaussian(dim);
      m.col(j) = v / v.norm();
    }
    return m;
  }

  ComplexMatrix haar(Index n, Index dim) {
    ComplexMatrix m(dim, n);
    for (Index j = 0; j < n; ++j) m.col(j) = state(dim).amplitudes();
    return m;
  }

  VectorEnsemble ensemble(Index n, Index dim, bool uniform, double spread, int centers = 3) {
    ComplexMatrix v = spread > 0.0 ? clustered(n, dim, centers, spread) : haar(n, dim);
    return VectorEnsemble(std::move(v), probabilities(n, uniform));
  }

 private:
  std::mt19937_64 rng_;
};

inline std::uint64_t case_seed(std::uint64_t suite, int index) {
  return substream_seed(suite, static_cast<std::uint64_t>(index));
}

}  // namespace hypersens::testing
