#pragma once

#include <cstdint>
#include <memory>

#include "implicert/implicit_tree.hpp"
#include "implicert/instance.hpp"
#include "implicert/model.hpp"
#include "implicert/restriction.hpp"
#include "implicert/truth_table.hpp"

namespace implicert {

/// Greedy precision-gain anchor search: grow C one feature at a time,
/// always adding the feature whose addition gives the lowest (estimated)
/// conditional error, until that error is at most epsilon.
struct BaselineConfig {
  double epsilon = 0.1;
  std::uint64_t samples = 1000;  // per precision estimate, Monte-Carlo mode
  ScoreMode precision_mode = ScoreMode::ExactOracle;
  bool randomized_ties = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct BaselineResult {
  Restriction features;  // insertion order
  double error = 0.0;    // exact or estimated, per mode
  std::uint64_t queries = 0;
};

/// `table` is required in exact mode and ignored otherwise.
BaselineResult greedy_precision_certificate(const ModelPtr& f, const Instance& x, const BaselineConfig& cfg,
                                            const TruthTable* table = nullptr);

}  // namespace implicert
