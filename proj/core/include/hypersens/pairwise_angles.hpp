#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hypersens/spin_hilbert.hpp"

namespace hypersens {

/// Dimension from which overlaps use compensated (Kahan) accumulation.
inline constexpr Index kCompensatedDotThreshold = 512;

/// |<a|b>| for two columns of length d. Compensated when d >= kCompensatedDotThreshold.
/// The reduction order is fixed, so the result does not depend on the caller.
double overlap_magnitude(const Complex* a, const Complex* b, Index d) noexcept;

/// Angles between columns of a D x N matrix. Each overlap is divided by the two
/// column norms (computed once with the same kernel), so bitwise-equal columns
/// give exactly 0 rather than the arccos of a roundoff shortfall.
class AngleKernel {
 public:
  explicit AngleKernel(const ComplexMatrix& vectors);

  double operator()(Index i, Index j) const noexcept {
    const double ov = overlap_magnitude(v_.col(i).data(), v_.col(j).data(), v_.rows());
    return angle_from_overlap(ov / (norms_[static_cast<std::size_t>(i)] * norms_[static_cast<std::size_t>(j)]));
  }

 private:
  const ComplexMatrix& v_;
  std::vector<double> norms_;
};

/// Hilbert-space angle between columns i and j of `vectors`.
double pair_angle(const ComplexMatrix& vectors, Index i, Index j) noexcept;

struct AngleOptions {
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
  /// Worker threads for the O(N^2 D) overlap kernel. Results are identical for any count.
  unsigned threads = 1;
};

/// All N(N-1)/2 pairwise angles, packed as the strict upper triangle in row order.
class PairwiseAngles {
 public:
  static std::size_t storage_bytes(Index n) noexcept;

  /// Throws ResourceError when storage_bytes(N) exceeds the budget.
  static PairwiseAngles compute(const ComplexMatrix& vectors, const AngleOptions& options = {});

  Index size() const noexcept { return n_; }
  /// Angle between vectors i and j; zero on the diagonal.
  double operator()(Index i, Index j) const noexcept {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return data_[row_offset(i) + static_cast<std::size_t>(j - i - 1)];
  }
  std::span<const double> packed() const noexcept { return data_; }

 private:
  PairwiseAngles(Index n, std::vector<double> data) : n_(n), data_(std::move(data)) {}
  std::size_t row_offset(Index i) const noexcept {
    const auto ii = static_cast<std::size_t>(i);
    const auto nn = static_cast<std::size_t>(n_);
    return ii * (2 * nn - ii - 1) / 2;
  }

  Index n_ = 0;
  std::vector<double> data_;
};

}  // namespace hypersens
