#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace implicert {

/// Feature values and labels are signs: -1 or +1.
using Sign = std::int8_t;

inline constexpr Sign kNeg = -1;
inline constexpr Sign kPos = +1;

inline constexpr bool is_sign(int v) { return v == -1 || v == 1; }

/// A point of the d-dimensional hypercube {-1,+1}^d.
class Instance {
 public:
  Instance() = default;

  /// Throws std::invalid_argument if any entry is not -1 or +1.
  explicit Instance(std::vector<Sign> bits);

  /// All-`value` instance of dimension d.
  static Instance filled(int d, Sign value);

  /// Parses the '0'/'1' wire format: index 0 leftmost, '0' -> -1, '1' -> +1.
  static Instance from_bitstring(std::string_view text);

  /// Bit i of `code` set means feature i is +1.
  static Instance from_code(int d, std::uint64_t code);

  int dimension() const { return static_cast<int>(bits_.size()); }
  Sign operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }
  std::span<const Sign> bits() const { return bits_; }

  Instance with(int i, Sign value) const;

  std::string to_bitstring() const;

  /// Inverse of from_code; requires d <= 64.
  std::uint64_t code() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<Sign> bits_;
};

}  // namespace implicert
