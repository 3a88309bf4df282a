#include "implicert/implicit_tree.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "implicert/estimators.hpp"
#include "implicert/exact_oracles.hpp"
#include "implicert/rng.hpp"

namespace implicert {

const char* to_string(ScoreMode mode) { return mode == ScoreMode::ExactOracle ? "exact" : "mc"; }

void TreeParams::validate(int dimension) const {
  if (depth_budget < 0 || depth_budget > dimension) throw std::invalid_argument("depth budget must lie in [0, d]");
  if (!(score_tolerance > 0.0 && score_tolerance <= 1.0)) throw std::invalid_argument("score tolerance must lie in (0, 1]");
  if (!(noise_rate > 0.0 && noise_rate <= 1.0)) throw std::invalid_argument("noise rate must lie in (0, 1]");
  if (!(node_confidence >= 0.0 && node_confidence < 1.0)) throw std::invalid_argument("node confidence must lie in [0, 1)");
}

double TreeParams::effective_node_confidence(int dimension) const {
  if (node_confidence > 0.0) return node_confidence;
  const double denom = static_cast<double>(std::max(dimension, 1)) * static_cast<double>(std::max(depth_budget, 1));
  return 0.01 / denom;
}

NodeDecision NodeCache::insert(const std::string& key, const NodeDecision& decision) {
  std::lock_guard lock(mutex_);
  return entries_.try_emplace(key, decision).first->second;
}

std::optional<NodeDecision> NodeCache::find(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::size_t NodeCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::uint64_t NodeCache::total_queries() const {
  std::lock_guard lock(mutex_);
  std::uint64_t total = 0;
  for (const auto& [key, decision] : entries_) total += decision.queries;
  return total;
}

void NodeCache::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
}

ImplicitTree::ImplicitTree(ModelPtr f, TreeParams params, int threads)
    : ImplicitTree(std::move(f), params, nullptr, threads) {}

ImplicitTree::ImplicitTree(ModelPtr f, TreeParams params, std::shared_ptr<const TruthTable> table, int threads)
    : f_(std::move(f)), params_(params), table_(std::move(table)), threads_(std::max(threads, 1)) {
  if (!f_) throw std::invalid_argument("null model");
  params_.validate(f_->dimension());
  if (params_.score_mode == ScoreMode::ExactOracle) {
    if (!table_) throw std::invalid_argument("exact-oracle mode needs the model's truth table");
    if (table_->dimension() != f_->dimension()) throw std::invalid_argument("truth table dimension does not match model");
  }
}

std::uint64_t ImplicitTree::samples_per_estimate() const {
  return hoeffding_samples(params_.score_tolerance / 2.0, params_.effective_node_confidence(f_->dimension()));
}

void ImplicitTree::check_node(const Restriction& alpha) const {
  if (static_cast<int>(alpha.size()) > params_.depth_budget) {
    throw std::invalid_argument("node " + alpha.to_string() + " is deeper than the depth budget");
  }
  if (!alpha.fits(f_->dimension())) throw std::out_of_range("restriction index out of range");
}

NodeDecision ImplicitTree::compute(const Restriction& alpha) const {
  NodeDecision out;
  const bool at_depth = static_cast<int>(alpha.size()) == params_.depth_budget;
  const double prune_threshold = 1.0 - 2.0 * params_.score_tolerance;

  if (params_.score_mode == ScoreMode::ExactOracle) {
    const TruthTable sub = table_->restrict(alpha);
    const double mean = sub.mean();
    if (at_depth || (params_.prune_constant && std::abs(mean) > prune_threshold)) {
      out.leaf = true;
      out.label = exact_leaf_value(*table_, alpha);
    } else {
      out.feature = exact_greedy_tree_query(*table_, alpha, params_.noise_rate);
    }
    return out;
  }

  const std::uint64_t m = samples_per_estimate();
  const EstimatorConfig cfg{m, node_seed(params_.global_seed, alpha), params_.noise_rate};
  const ModelPtr sub = restrict(f_, alpha);

  std::optional<double> mean;
  if (at_depth || params_.prune_constant) {
    const auto r = estimate_mean(*sub, cfg);
    mean = r.estimate;
    out.queries += r.queries;
  }
  if (at_depth || (params_.prune_constant && std::abs(*mean) > prune_threshold)) {
    out.leaf = true;
    out.label = *mean >= 0.0 ? kPos : kNeg;
    return out;
  }

  std::vector<int> free;
  for (int i = 0; i < f_->dimension(); ++i) {
    if (!alpha.contains(i)) free.push_back(i);
  }
  if (free.empty()) throw std::logic_error("no unrestricted feature left to query");
  const auto scores = estimate_scores(sub, free, cfg, threads_);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < free.size(); ++j) {
    if (scores[j].estimate > best) {
      best = scores[j].estimate;
      out.feature = free[j];
    }
  }
  out.queries += 2 * m + 4 * m * free.size();
  return out;
}

NodeDecision ImplicitTree::decide(const Restriction& alpha) {
  check_node(alpha);
  const std::string key = alpha.canonical_key();
  if (auto hit = cache_.find(key)) return *hit;
  return cache_.insert(key, compute(alpha));
}

bool ImplicitTree::is_leaf(const Restriction& alpha) {
  check_node(alpha);
  if (static_cast<int>(alpha.size()) == params_.depth_budget) return true;
  if (!params_.prune_constant) return false;
  return decide(alpha).leaf;
}

int ImplicitTree::query(const Restriction& alpha) {
  const NodeDecision d = decide(alpha);
  if (d.leaf) throw std::logic_error("query called on leaf " + alpha.to_string());
  return d.feature;
}

Sign ImplicitTree::leaf_value(const Restriction& alpha) {
  const NodeDecision d = decide(alpha);
  if (!d.leaf) throw std::logic_error("leaf_value called on internal node " + alpha.to_string());
  return d.label;
}

WalkResult ImplicitTree::walk(const Instance& x) {
  if (x.dimension() != f_->dimension()) throw std::invalid_argument("instance dimension does not match model");
  WalkResult out;
  // Nodes at depth k are leaves structurally; their labels are not needed here.
  while (static_cast<int>(out.path.size()) < params_.depth_budget) {
    const NodeDecision d = decide(out.path);
    out.queries += d.queries;
    if (d.leaf) break;
    out.path = out.path.extended(d.feature, x[d.feature]);
  }
  return out;
}

}  // namespace implicert
