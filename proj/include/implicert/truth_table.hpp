#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "implicert/instance.hpp"
#include "implicert/model_expr.hpp"
#include "implicert/restriction.hpp"

namespace implicert {

/// f materialized as 2^d labels indexed by instance code (bit i set <=> x_i = +1).
class TruthTable {
 public:
  /// Throws std::invalid_argument unless labels.size() == 2^d, d <= 20 and every label is a sign.
  TruthTable(int d, std::vector<Sign> labels);

  /// Evaluates the expression on every point. Not a counted model query.
  static TruthTable from_expr(const ModelExpr& expr);
  static TruthTable from_function(int d, const std::function<Sign(const Instance&)>& f);

  int dimension() const { return d_; }
  std::size_t size() const { return labels_.size(); }
  Sign operator[](std::uint64_t code) const { return labels_[code]; }
  Sign at(const Instance& x) const;
  std::span<const Sign> labels() const { return labels_; }

  /// Number of +1 labels.
  std::uint64_t count_positive() const;
  /// E[f].
  double mean() const;

  /// The subfunction f_alpha as a table over the free features only,
  /// ordered by increasing original index (see free_features()).
  TruthTable restrict(const Restriction& alpha) const;
  std::vector<int> free_features(const Restriction& alpha) const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  int d_;
  std::vector<Sign> labels_;
};

}  // namespace implicert
