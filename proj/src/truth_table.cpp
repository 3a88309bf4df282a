#include "implicert/truth_table.hpp"

#include <stdexcept>

namespace implicert {

TruthTable::TruthTable(int d, std::vector<Sign> labels) : d_(d), labels_(std::move(labels)) {
  if (d_ < 0 || d_ > kMaxTableDimension) {
    throw std::invalid_argument("truth tables require 0 <= d <= " + std::to_string(kMaxTableDimension));
  }
  if (labels_.size() != (std::size_t{1} << d_)) throw std::invalid_argument("truth table must have 2^d labels");
  for (Sign s : labels_) {
    if (!is_sign(s)) throw std::invalid_argument("truth table labels must be -1 or +1");
  }
}

TruthTable TruthTable::from_expr(const ModelExpr& expr) {
  const int d = expr.dimension();
  if (d > kMaxTableDimension) throw std::invalid_argument("dimension over truth-table cap (d <= 20)");
  const std::size_t n = std::size_t{1} << d;
  std::vector<Sign> labels(n);
  std::vector<Sign> x(static_cast<std::size_t>(d));
  for (std::size_t code = 0; code < n; ++code) {
    for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = ((code >> i) & 1U) ? kPos : kNeg;
    labels[code] = expr.evaluate(x);
  }
  return TruthTable(d, std::move(labels));
}

TruthTable TruthTable::from_function(int d, const std::function<Sign(const Instance&)>& f) {
  if (d < 0 || d > kMaxTableDimension) throw std::invalid_argument("dimension over truth-table cap (d <= 20)");
  const std::size_t n = std::size_t{1} << d;
  std::vector<Sign> labels(n);
  for (std::size_t code = 0; code < n; ++code) labels[code] = f(Instance::from_code(d, code));
  return TruthTable(d, std::move(labels));
}

Sign TruthTable::at(const Instance& x) const {
  if (x.dimension() != d_) throw std::invalid_argument("instance dimension does not match table");
  return labels_[x.code()];
}

std::uint64_t TruthTable::count_positive() const {
  std::uint64_t n = 0;
  for (Sign s : labels_) n += s > 0 ? 1 : 0;
  return n;
}

double TruthTable::mean() const {
  const auto pos = static_cast<double>(count_positive());
  const auto total = static_cast<double>(labels_.size());
  return (2.0 * pos - total) / total;
}

std::vector<int> TruthTable::free_features(const Restriction& alpha) const {
  std::vector<int> out;
  for (int i = 0; i < d_; ++i) {
    if (!alpha.contains(i)) out.push_back(i);
  }
  return out;
}

TruthTable TruthTable::restrict(const Restriction& alpha) const {
  if (!alpha.fits(d_)) throw std::out_of_range("restriction index out of range");
  const std::vector<int> free = free_features(alpha);
  std::uint64_t base = 0;
  for (const auto& lit : alpha.literals()) {
    if (lit.value > 0) base |= std::uint64_t{1} << lit.feature;
  }
  const int k = static_cast<int>(free.size());
  std::vector<Sign> labels(std::size_t{1} << k);
  for (std::uint64_t c = 0; c < labels.size(); ++c) {
    std::uint64_t code = base;
    for (int j = 0; j < k; ++j) {
      if ((c >> j) & 1U) code |= std::uint64_t{1} << free[static_cast<std::size_t>(j)];
    }
    labels[c] = labels_[code];
  }
  return TruthTable(k, std::move(labels));
}

}  // namespace implicert
