#include "hypersens/haar_validation.hpp"

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "hypersens/errors.hpp"
#include "hypersens/random_vector_theory.hpp"

namespace hypersens {

VectorEnsemble haar_ensemble(Index dim, Index samples, std::uint64_t seed) {
  if (samples < 1) {
    throw InvalidParameter("haar ensemble: at least one sample required");
  }
  ComplexMatrix vectors(dim, samples);
  for (Index i = 0; i < samples; ++i) {
    std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(i)));
    vectors.col(i) = haar_random_vector(dim, rng).amplitudes();
  }
  return VectorEnsemble::uniform(std::move(vectors));
}

HaarValidation compare_with_random_density(const AngleHistogram& histogram, double dim,
                                           const HaarValidationOptions& options) {
  HaarValidation out;
  out.histogram = histogram;
  const double total = static_cast<double>(histogram.total());
  if (total == 0.0) {
    throw InvalidParameter("haar validation: histogram is empty");
  }

  double chi2 = 0.0;
  double l1 = 0.0;
  int cells = 0;
  double observed_acc = 0.0;
  double expected_acc = 0.0;
  const std::size_t bins = histogram.counts.size();
  for (std::size_t b = 0; b < bins; ++b) {
    const double p = random_angle_cdf(dim, histogram.edges[b + 1]) - random_angle_cdf(dim, histogram.edges[b]);
    const double observed = static_cast<double>(histogram.counts[b]);
    l1 += std::abs(observed / total - p);
    observed_acc += observed;
    expected_acc += p * total;
    // The last cell absorbs whatever remains, even if still sparse.
    if (expected_acc >= options.min_expected || b + 1 == bins) {
      if (expected_acc > 0.0) {
        chi2 += (observed_acc - expected_acc) * (observed_acc - expected_acc) / expected_acc;
        ++cells;
      }
      observed_acc = 0.0;
      expected_acc = 0.0;
    }
  }
  out.chi_square = chi2;
  out.degrees_of_freedom = std::max(cells - 1, 1);
  out.p_value = boost::math::gamma_q(0.5 * out.degrees_of_freedom, 0.5 * chi2);
  out.l1_distance = l1;
  out.passed = out.p_value > options.p_threshold || out.l1_distance < options.l1_threshold;
  return out;
}

HaarValidation validate_haar(const HaarValidationOptions& options) {
  if (options.dim < 2 || options.samples < 2) {
    throw InvalidParameter("haar validation: need D >= 2 and at least two samples");
  }
  const auto ensemble = haar_ensemble(options.dim, options.samples, options.seed);
  const auto histogram = angle_histogram(ensemble, options.bins);
  return compare_with_random_density(histogram, static_cast<double>(options.dim), options);
}

}  // namespace hypersens
