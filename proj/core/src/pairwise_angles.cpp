#include "hypersens/pairwise_angles.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "hypersens/errors.hpp"

namespace hypersens {

namespace {

constexpr int kLanes = 4;

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) noexcept {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double plain_overlap(const Complex* a, const Complex* b, Index d) noexcept {
  double re = 0.0;
  double im = 0.0;
  for (Index k = 0; k < d; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return std::hypot(re, im);
}

// Independent lanes break the serial Kahan dependency chain; lanes are merged
// in a fixed order.
double compensated_overlap(const Complex* a, const Complex* b, Index d) noexcept {
  KahanSum re[kLanes];
  KahanSum im[kLanes];
  Index k = 0;
  for (; k + kLanes <= d; k += kLanes) {
    for (int l = 0; l < kLanes; ++l) {
      const double ar = a[k + l].real(), ai = a[k + l].imag();
      const double br = b[k + l].real(), bi = b[k + l].imag();
      re[l].add(ar * br + ai * bi);
      im[l].add(ar * bi - ai * br);
    }
  }
  for (; k < d; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    re[0].add(ar * br + ai * bi);
    im[0].add(ar * bi - ai * br);
  }
  KahanSum re_total;
  KahanSum im_total;
  for (int l = 0; l < kLanes; ++l) {
    re_total.add(re[l].sum);
    re_total.add(-re[l].carry);
    im_total.add(im[l].sum);
    im_total.add(-im[l].carry);
  }
  return std::hypot(re_total.sum, im_total.sum);
}

}  // namespace

double overlap_magnitude(const Complex* a, const Complex* b, Index d) noexcept {
  return d >= kCompensatedDotThreshold ? compensated_overlap(a, b, d) : plain_overlap(a, b, d);
}

AngleKernel::AngleKernel(const ComplexMatrix& vectors) : v_(vectors), norms_(static_cast<std::size_t>(vectors.cols())) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    norms_[static_cast<std::size_t>(j)] =
        std::sqrt(overlap_magnitude(vectors.col(j).data(), vectors.col(j).data(), vectors.rows()));
  }
}

double pair_angle(const ComplexMatrix& vectors, Index i, Index j) noexcept {
  const Index d = vectors.rows();
  const double ov = overlap_magnitude(vectors.col(i).data(), vectors.col(j).data(), d);
  const double ni = overlap_magnitude(vectors.col(i).data(), vectors.col(i).data(), d);
  const double nj = overlap_magnitude(vectors.col(j).data(), vectors.col(j).data(), d);
  return angle_from_overlap(ov / std::sqrt(ni * nj));
}

std::size_t PairwiseAngles::storage_bytes(Index n) noexcept {
  const auto nn = static_cast<std::size_t>(std::max<Index>(n, 0));
  return nn * (nn > 0 ? nn - 1 : 0) / 2 * sizeof(double);
}

PairwiseAngles PairwiseAngles::compute(const ComplexMatrix& vectors, const AngleOptions& options) {
  const Index n = vectors.cols();
  const std::size_t bytes = storage_bytes(n);
  if (bytes > options.memory_budget_bytes) {
    throw ResourceError("pairwise angles: " + std::to_string(n) + " vectors", bytes,
                        options.memory_budget_bytes);
  }
  PairwiseAngles out(n, std::vector<double>(bytes / sizeof(double)));
  const AngleKernel angle(vectors);

  const auto fill_rows = [&](Index first, Index stride) {
    for (Index i = first; i < n; i += stride) {
      const std::size_t base = out.row_offset(i);
      for (Index j = i + 1; j < n; ++j) {
        out.data_[base + static_cast<std::size_t>(j - i - 1)] = angle(i, j);
      }
    }
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(std::max<Index>(n, 1))));
  if (workers == 1) {
    fill_rows(0, 1);
  } else {
    // Rows are dealt round-robin so that the triangle's uneven rows balance out.
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { fill_rows(static_cast<Index>(w), static_cast<Index>(workers)); });
    }
  }
  return out;
}

}  // namespace hypersens
