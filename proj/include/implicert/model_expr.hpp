#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "implicert/instance.hpp"

namespace implicert {

/// Largest dimension a truth table (literal or materialized) may have: 2^20 labels.
inline constexpr int kMaxTableDimension = 20;

/// Syntax or semantic error in model DSL text, with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class ExprKind { Const, Var, Not, And, Or, Xor, Maj, Tree, Table };

/// One node of the model AST.
///
/// `index` holds the constant's sign for Const, the variable for Var and
/// the split feature for Tree (children: negative branch, positive branch).
/// Table literals keep their labels indexed by instance code.
struct ExprNode {
  ExprKind kind = ExprKind::Const;
  int index = 1;
  std::vector<ExprNode> children;
  std::shared_ptr<const std::vector<Sign>> table;
};

/// A parsed model: AST plus declared dimension. Immutable.
class ModelExpr {
 public:
  /// Validates variable indices and table sizes against `dimension`.
  ModelExpr(ExprNode root, int dimension);

  int dimension() const { return dimension_; }
  const ExprNode& root() const { return root_; }

  /// Pure evaluation; does not touch any query counter.
  Sign evaluate(std::span<const Sign> x) const;

 private:
  ExprNode root_;
  int dimension_;
};

/// Parses `<expr> d=<int>`. Throws ParseError.
ModelExpr parse_model(std::string_view text);

/// Canonical form; parse_model(print_model(m)) reproduces m.
std::string print_model(const ModelExpr& model);

/// Hex encoding of a table literal: bit `code` of the number is set when
/// label(code) = +1, written with ceil(2^d / 4) digits, most significant
/// digit first (so the all-+1 corner is the top bit).
std::string encode_table_hex(std::span<const Sign> labels, int d);
std::vector<Sign> decode_table_hex(std::string_view hex, int d);

// Builders used by tests, benchmarks and generators.
namespace expr {
ExprNode constant(Sign value);
ExprNode var(int i);
ExprNode negate(ExprNode e);
ExprNode conj(std::vector<ExprNode> es);
ExprNode disj(std::vector<ExprNode> es);
ExprNode parity(std::vector<ExprNode> es);
ExprNode majority(std::vector<ExprNode> es);
ExprNode tree(int feature, ExprNode on_neg, ExprNode on_pos);
ExprNode table(std::vector<Sign> labels);
}  // namespace expr

}  // namespace implicert
