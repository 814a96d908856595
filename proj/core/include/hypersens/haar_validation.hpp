#pragma once

#include <cstdint>

#include "hypersens/grouping_analysis.hpp"

namespace hypersens {

struct HaarValidationOptions {
  Index dim = 16;
  Index samples = 2000;
  int bins = 40;
  std::uint64_t seed = 1;
  double p_threshold = 0.01;
  double l1_threshold = 0.05;
  /// Adjacent bins are merged until each expected count reaches this value.
  double min_expected = 5.0;
};

struct HaarValidation {
  AngleHistogram histogram;
  double chi_square = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 0.0;
  /// sum over bins of |observed fraction - expected fraction|.
  double l1_distance = 0.0;
  bool passed = false;  ///< p_value > p_threshold or l1_distance < l1_threshold
};

/// `samples` Haar vectors; sample i is drawn from substream_seed(seed, i).
VectorEnsemble haar_ensemble(Index dim, Index samples, std::uint64_t seed);

/// Goodness of fit of a pairwise-angle histogram against the random-vector
/// angle density of dimension `dim`.
HaarValidation compare_with_random_density(const AngleHistogram& histogram, double dim,
                                           const HaarValidationOptions& options);

HaarValidation validate_haar(const HaarValidationOptions& options);

}  // namespace hypersens
