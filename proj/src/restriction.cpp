#include "implicert/restriction.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace implicert {

Restriction::Restriction(std::vector<Literal> literals) : literals_(std::move(literals)) {
  for (std::size_t a = 0; a < literals_.size(); ++a) {
    if (literals_[a].feature < 0) throw std::invalid_argument("negative feature index in restriction");
    if (!is_sign(literals_[a].value)) throw std::invalid_argument("restriction values must be -1 or +1");
    for (std::size_t b = 0; b < a; ++b) {
      if (literals_[a].feature == literals_[b].feature) {
        throw std::invalid_argument("duplicate feature x" + std::to_string(literals_[a].feature) +
                                    " in restriction");
      }
    }
  }
}

Restriction Restriction::from_instance(const Instance& x, std::span<const int> features) {
  std::vector<Literal> lits;
  lits.reserve(features.size());
  for (int i : features) {
    if (i < 0 || i >= x.dimension()) throw std::out_of_range("feature index out of range");
    lits.push_back({i, x[i]});
  }
  return Restriction(std::move(lits));
}

Restriction Restriction::parse(std::string_view text) {
  std::vector<Literal> lits;
  std::string cleaned;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '{' && c != '}') cleaned.push_back(c);
  }
  std::size_t pos = 0;
  while (pos < cleaned.size()) {
    std::size_t end = cleaned.find(',', pos);
    if (end == std::string::npos) end = cleaned.size();
    std::string_view item(cleaned.data() + pos, end - pos);
    auto eq = item.find('=');
    if (item.empty() || item[0] != 'x' || eq == std::string_view::npos) {
      throw std::invalid_argument("malformed restriction literal '" + std::string(item) + "'");
    }
    int feature = -1;
    auto idx = item.substr(1, eq - 1);
    auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), feature);
    if (ec != std::errc() || p != idx.data() + idx.size()) {
      throw std::invalid_argument("malformed feature index in '" + std::string(item) + "'");
    }
    auto val = item.substr(eq + 1);
    Sign value;
    if (val == "+1" || val == "1" || val == "+") {
      value = kPos;
    } else if (val == "-1" || val == "0" || val == "-") {
      value = kNeg;
    } else {
      throw std::invalid_argument("malformed value in '" + std::string(item) + "'");
    }
    lits.push_back({feature, value});
    pos = end + 1;
  }
  return Restriction(std::move(lits));
}

bool Restriction::contains(int feature) const { return value_of(feature).has_value(); }

std::optional<Sign> Restriction::value_of(int feature) const {
  for (const auto& l : literals_) {
    if (l.feature == feature) return l.value;
  }
  return std::nullopt;
}

Restriction Restriction::extended(int feature, Sign value) const {
  if (contains(feature)) {
    throw std::invalid_argument("feature x" + std::to_string(feature) + " already restricted");
  }
  if (feature < 0) throw std::invalid_argument("negative feature index in restriction");
  if (!is_sign(value)) throw std::invalid_argument("restriction values must be -1 or +1");
  Restriction out = *this;
  out.literals_.push_back({feature, value});
  return out;
}

std::vector<int> Restriction::features() const {
  std::vector<int> out;
  out.reserve(literals_.size());
  for (const auto& l : literals_) out.push_back(l.feature);
  return out;
}

bool Restriction::agrees_with(const Instance& x) const {
  return std::all_of(literals_.begin(), literals_.end(), [&](const Literal& l) {
    return l.feature < x.dimension() && x[l.feature] == l.value;
  });
}

bool Restriction::fits(int d) const {
  return std::all_of(literals_.begin(), literals_.end(),
                     [d](const Literal& l) { return l.feature >= 0 && l.feature < d; });
}

void Restriction::apply(std::span<Sign> x) const {
  for (const auto& l : literals_) x[static_cast<std::size_t>(l.feature)] = l.value;
}

std::string Restriction::canonical_key() const {
  std::vector<Literal> sorted = literals_;
  std::sort(sorted.begin(), sorted.end(),
            [](const Literal& a, const Literal& b) { return a.feature < b.feature; });
  std::string key;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) key.push_back(',');
    key += std::to_string(sorted[i].feature);
    key.push_back(sorted[i].value > 0 ? '+' : '-');
  }
  return key;
}

std::string Restriction::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < literals_.size(); ++i) {
    if (i) out += ", ";
    out += "x" + std::to_string(literals_[i].feature) + (literals_[i].value > 0 ? "=+1" : "=-1");
  }
  out += "}";
  return out;
}

bool Restriction::same_assignment(const Restriction& other) const {
  return canonical_key() == other.canonical_key();
}

}  // namespace implicert
