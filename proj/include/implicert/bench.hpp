#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "implicert/implicit_tree.hpp"
#include "implicert/model_expr.hpp"

namespace implicert {

/// f(x) = x_{d-2} xor x_{d-1}: two relevant features, C(f) = 2.
ModelExpr two_parity_model(int d);

struct ParityBenchConfig {
  std::vector<int> dims{6, 8, 10};
  ScoreMode mode = ScoreMode::ExactOracle;
  int seeds = 1;
  std::uint64_t base_seed = 0;
  double epsilon = 0.1;
  double delta = 0.1;
  int depth = 2;
  /// Unset falls back to the certifier wiring (eps / depth). The default
  /// 0.5 maximizes the two-parity score p(1-p)/2, which Monte-Carlo mode
  /// needs to separate relevant from irrelevant features at small depth.
  std::optional<double> noise_rate = 0.5;
  std::optional<double> score_tolerance;
  /// Per-estimate samples for the Monte-Carlo baseline; 0 uses the verification count.
  std::uint64_t baseline_samples = 0;
  int threads = 1;

  /// Throws std::invalid_argument on an empty grid or bad values.
  void validate() const;
};

struct ParityBenchRow {
  int dimension = 0;
  int seeds = 0;
  std::uint64_t instances = 0;  // per seed
  double exact_certificate_complexity = 0.0;

  double implicit_mean_size = 0.0;
  double implicit_bottom_rate = 0.0;
  /// Fraction of (seed, instance) runs whose accepted certificate is exactly the relevant pair.
  double implicit_match_rate = 0.0;
  /// Fraction of seeds where every instance got the relevant pair.
  double implicit_seed_success_rate = 0.0;
  double implicit_max_exact_error = 0.0;
  double implicit_mean_queries = 0.0;

  double baseline_mean_size = 0.0;
  int baseline_min_size = 0;
  int baseline_max_size = 0;
  double baseline_max_exact_error = 0.0;
  double baseline_mean_queries = 0.0;
};

/// Implicit certifier vs greedy precision baseline on two_parity_model(d),
/// over every instance (d <= 12) or 1024 sampled instances (12 < d <= 16).
std::vector<ParityBenchRow> run_parity_bench(const ParityBenchConfig& cfg);

}  // namespace implicert
