#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "implicert/instance.hpp"
#include "implicert/model.hpp"
#include "implicert/restriction.hpp"
#include "implicert/rng.hpp"

namespace implicert {

/// Sampling knobs shared by the Monte-Carlo estimators.
struct EstimatorConfig {
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  double noise_rate = 0.1;

  /// Throws std::invalid_argument unless samples >= 1 and noise_rate in (0, 1].
  void validate() const;
};

struct EstimateReport {
  double estimate = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t queries = 0;
};

// Substreams of one seed. Children of a node use kChildStreamBase + 2i + (b > 0).
inline constexpr std::uint64_t kNoiseStream = 0;
inline constexpr std::uint64_t kMeanStream = 1;
inline constexpr std::uint64_t kPrecisionStream = 2;
inline constexpr std::uint64_t kChildStreamBase = 16;

constexpr std::uint64_t child_stream(int feature, Sign value) {
  return kChildStreamBase + 2 * static_cast<std::uint64_t>(feature) + (value > 0 ? 1 : 0);
}

/// Rerandomizes each coordinate independently with probability p
/// (so each coordinate flips with probability p/2). out may alias x.
void perturb(std::span<const Sign> x, double p, CounterRng& rng, std::span<Sign> out);
Instance perturb(const Instance& x, double p, CounterRng& rng);

/// Fraction of m pairs (x, perturb(x, p)) on which f disagrees. 2m queries.
EstimateReport estimate_noise_sensitivity(const BlackboxModel& f, const EstimatorConfig& cfg,
                                          std::uint64_t stream = kNoiseStream);

/// NS(f) - (NS(f_{i=-1}) + NS(f_{i=+1})) / 2 from three independent NS
/// estimates of m pairs each. 6m queries.
EstimateReport estimate_score(const ModelPtr& f, int feature, const EstimatorConfig& cfg);

/// Scores of several features sharing one estimate of NS(f); each child
/// estimate draws from child_stream(i, b), so the result does not depend on
/// `threads`. Queries: 2m + 4m per feature.
std::vector<EstimateReport> estimate_scores(const ModelPtr& f, std::span<const int> features,
                                            const EstimatorConfig& cfg, int threads = 1);

/// Pr[f(y) != f(x) | y_C = x_C] over m uniform completions. m + 1 queries.
/// Throws std::invalid_argument when C disagrees with x.
EstimateReport estimate_precision_error(const BlackboxModel& f, const Instance& x, const Restriction& certificate,
                                        const EstimatorConfig& cfg);

/// Sample mean of f over m uniform instances. m queries.
EstimateReport estimate_mean(const BlackboxModel& f, const EstimatorConfig& cfg, std::uint64_t stream = kMeanStream);

/// ceil(ln(2/delta) / (2 eta^2)): two-sided Hoeffding count for a [0,1] mean.
/// Throws std::invalid_argument unless eta, delta in (0, 1).
std::uint64_t hoeffding_samples(double eta, double delta);

}  // namespace implicert
