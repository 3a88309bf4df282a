#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "implicert/instance.hpp"
#include "implicert/model.hpp"
#include "implicert/restriction.hpp"
#include "implicert/truth_table.hpp"

namespace implicert {

enum class ScoreMode { MonteCarlo, ExactOracle };

const char* to_string(ScoreMode mode);

/// Parameters of the depth-k eta-approximate greedy noise-stabilizing tree.
struct TreeParams {
  int depth_budget = 0;
  double score_tolerance = 0.1;
  double noise_rate = 0.1;
  std::uint64_t global_seed = 0;
  ScoreMode score_mode = ScoreMode::MonteCarlo;
  bool prune_constant = false;
  /// Failure probability per node estimate; 0 selects 0.01 / (d k).
  double node_confidence = 0.0;

  /// Throws std::invalid_argument on out-of-domain values.
  void validate(int dimension) const;
  double effective_node_confidence(int dimension) const;
};

/// What the tree knows about one node, plus the queries spent learning it.
struct NodeDecision {
  bool leaf = false;
  int feature = -1;
  Sign label = kPos;
  std::uint64_t queries = 0;
};

/// Canonical restriction -> decision. First write wins; entries never change.
class NodeCache {
 public:
  /// The stored decision for `key`, inserting `decision` if absent.
  NodeDecision insert(const std::string& key, const NodeDecision& decision);
  std::optional<NodeDecision> find(const std::string& key) const;
  std::size_t size() const;
  /// Sum of queries over every cached node.
  std::uint64_t total_queries() const;
  void clear();

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::string, NodeDecision> entries_;
};

struct WalkResult {
  Restriction path;
  /// Queries needed to decide every node on the path (cached or not).
  std::uint64_t queries = 0;
};

/// Implicit access to Upsilon^{k,eta}_{f,p}: nodes are decided on demand
/// and never materialized as a whole.
///
/// In Monte-Carlo mode every decision at node alpha is a deterministic
/// function of (f, params, alpha) because all sampling is seeded from
/// node_seed(global_seed, alpha); the cache only saves work. Exact mode
/// reads scores and means from a truth table instead of querying f.
class ImplicitTree {
 public:
  ImplicitTree(ModelPtr f, TreeParams params, int threads = 1);
  ImplicitTree(ModelPtr f, TreeParams params, std::shared_ptr<const TruthTable> table, int threads = 1);

  const TreeParams& params() const { return params_; }
  const ModelPtr& model() const { return f_; }
  const NodeCache& cache() const { return cache_; }
  NodeCache& cache() { return cache_; }

  /// Samples per node estimate in Monte-Carlo mode.
  std::uint64_t samples_per_estimate() const;

  /// Throws std::invalid_argument when |alpha| > k, std::out_of_range when
  /// alpha does not fit d.
  bool is_leaf(const Restriction& alpha);
  /// Throws std::logic_error at a leaf.
  int query(const Restriction& alpha);
  /// Throws std::logic_error at an internal node.
  Sign leaf_value(const Restriction& alpha);

  WalkResult walk(const Instance& x);

  /// Decision for alpha (computing it if needed).
  NodeDecision decide(const Restriction& alpha);

 private:
  void check_node(const Restriction& alpha) const;
  NodeDecision compute(const Restriction& alpha) const;

  ModelPtr f_;
  TreeParams params_;
  std::shared_ptr<const TruthTable> table_;
  int threads_;
  NodeCache cache_;
};

}  // namespace implicert
