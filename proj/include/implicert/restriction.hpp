#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "implicert/instance.hpp"

namespace implicert {

struct Literal {
  int feature = 0;
  Sign value = kPos;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// A partial assignment of features, kept in insertion (root-to-node) order.
///
/// Identifies a node of a decision tree and, equally, the content of a
/// certificate. Two restrictions with the same assignment set share one
/// canonical key regardless of insertion order.
class Restriction {
 public:
  Restriction() = default;

  /// Throws std::invalid_argument on a duplicate feature or a non-sign value.
  explicit Restriction(std::vector<Literal> literals);

  /// The restriction that fixes `features` to x's values, in the given order.
  static Restriction from_instance(const Instance& x, std::span<const int> features);

  /// Parses "x3=+1,x7=-1" (whitespace and braces tolerated, empty string is the empty restriction).
  static Restriction parse(std::string_view text);

  std::size_t size() const { return literals_.size(); }
  bool empty() const { return literals_.empty(); }
  std::span<const Literal> literals() const { return literals_; }

  bool contains(int feature) const;
  std::optional<Sign> value_of(int feature) const;

  /// Copy with (feature = value) appended. Throws if feature is already fixed.
  Restriction extended(int feature, Sign value) const;

  /// Features in insertion order.
  std::vector<int> features() const;

  bool agrees_with(const Instance& x) const;

  /// Every feature index is in [0, d).
  bool fits(int d) const;

  /// Writes this restriction's values into x (coordinates outside it untouched).
  void apply(std::span<Sign> x) const;

  /// Sorted-by-index encoding, e.g. "3+,7-"; unique per assignment set.
  std::string canonical_key() const;

  /// Human form in insertion order, e.g. "{x3=+1, x7=-1}".
  std::string to_string() const;

  /// Same assignment set (order-insensitive).
  bool same_assignment(const Restriction& other) const;

  /// Insertion-order equality.
  friend bool operator==(const Restriction&, const Restriction&) = default;

 private:
  std::vector<Literal> literals_;
};

}  // namespace implicert
