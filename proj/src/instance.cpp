#include "implicert/instance.hpp"

#include <stdexcept>

namespace implicert {

Instance::Instance(std::vector<Sign> bits) : bits_(std::move(bits)) {
  for (Sign b : bits_) {
    if (!is_sign(b)) throw std::invalid_argument("instance entries must be -1 or +1");
  }
}

Instance Instance::filled(int d, Sign value) {
  if (d < 0) throw std::invalid_argument("negative dimension");
  return Instance(std::vector<Sign>(static_cast<std::size_t>(d), value));
}

Instance Instance::from_bitstring(std::string_view text) {
  std::vector<Sign> bits;
  bits.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '0') {
      bits.push_back(kNeg);
    } else if (c == '1') {
      bits.push_back(kPos);
    } else {
      throw std::invalid_argument("instance string has non-binary character at position " +
                                  std::to_string(i));
    }
  }
  return Instance(std::move(bits));
}

Instance Instance::from_code(int d, std::uint64_t code) {
  if (d < 0 || d > 64) throw std::invalid_argument("from_code requires 0 <= d <= 64");
  std::vector<Sign> bits(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) bits[static_cast<std::size_t>(i)] = ((code >> i) & 1U) ? kPos : kNeg;
  return Instance(std::move(bits));
}

Instance Instance::with(int i, Sign value) const {
  if (i < 0 || i >= dimension()) throw std::out_of_range("feature index out of range");
  if (!is_sign(value)) throw std::invalid_argument("value must be -1 or +1");
  Instance copy = *this;
  copy.bits_[static_cast<std::size_t>(i)] = value;
  return copy;
}

std::string Instance::to_bitstring() const {
  std::string out;
  out.reserve(bits_.size());
  for (Sign b : bits_) out.push_back(b > 0 ? '1' : '0');
  return out;
}

std::uint64_t Instance::code() const {
  if (dimension() > 64) throw std::out_of_range("instance code requires d <= 64");
  std::uint64_t code = 0;
  for (int i = 0; i < dimension(); ++i) {
    if (bits_[static_cast<std::size_t>(i)] > 0) code |= std::uint64_t{1} << i;
  }
  return code;
}

}  // namespace implicert
