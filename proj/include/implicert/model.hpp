#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>

#include "implicert/instance.hpp"
#include "implicert/model_expr.hpp"
#include "implicert/restriction.hpp"

namespace implicert {

/// Monotone count of model evaluations. Safe under concurrent increments.
class QueryCounter {
 public:
  void increment(std::uint64_t n = 1) { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t value() const { return count_.load(std::memory_order_relaxed); }
  /// Only between jobs.
  void reset() { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

/// Query access to f : {-1,+1}^d -> {-1,+1}.
///
/// Every call to query() is one model query and is counted against the
/// counter of the underlying (unrestricted) model. Implementations are
/// immutable and may be queried from several threads at once.
class BlackboxModel {
 public:
  virtual ~BlackboxModel() = default;

  virtual int dimension() const = 0;

  /// Throws std::invalid_argument when x.size() != dimension().
  Sign query(std::span<const Sign> x) const;
  Sign query(const Instance& x) const { return query(x.bits()); }

  /// Counter charged by queries through this model or any view of it.
  virtual const QueryCounter& counter() const = 0;
  std::uint64_t queries() const { return counter().value(); }

 protected:
  /// x has the right length.
  virtual Sign do_query(std::span<const Sign> x) const = 0;
};

using ModelPtr = std::shared_ptr<const BlackboxModel>;

/// A model backed by a parsed DSL expression.
class ExprModel final : public BlackboxModel {
 public:
  explicit ExprModel(ModelExpr expr);

  int dimension() const override { return expr_.dimension(); }
  const QueryCounter& counter() const override { return *counter_; }
  const ModelExpr& expression() const { return expr_; }

 protected:
  Sign do_query(std::span<const Sign> x) const override;

 private:
  ModelExpr expr_;
  std::shared_ptr<QueryCounter> counter_;
};

/// f_alpha: same dimension as the parent, restricted coordinates overridden.
class RestrictedModel final : public BlackboxModel {
 public:
  RestrictedModel(ModelPtr parent, Restriction alpha);

  int dimension() const override { return parent_->dimension(); }
  const QueryCounter& counter() const override { return parent_->counter(); }
  const ModelPtr& parent() const { return parent_; }
  const Restriction& restriction() const { return alpha_; }

 protected:
  Sign do_query(std::span<const Sign> x) const override;

 private:
  ModelPtr parent_;
  Restriction alpha_;
};

std::shared_ptr<const ExprModel> make_model(ModelExpr expr);
std::shared_ptr<const ExprModel> make_model(std::string_view dsl_text);

/// Restricted view f_alpha. Views of views are flattened onto the
/// unrestricted model; on overlapping indices the inner restriction wins,
/// matching the nested evaluation order.
/// Throws std::out_of_range if alpha does not fit the model's dimension.
ModelPtr restrict(const ModelPtr& f, const Restriction& alpha);

}  // namespace implicert
