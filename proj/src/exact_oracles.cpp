#include "implicert/exact_oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace implicert {

namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in [0, 1)");
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise rate must lie in [0, 1]");
}

std::uint64_t pow3(int d) {
  std::uint64_t v = 1;
  for (int i = 0; i < d; ++i) v *= 3;
  return v;
}

}  // namespace

bool within_error_budget(std::uint64_t count, double eps, double total) {
  return static_cast<double>(count) <= eps * total * (1.0 + 1e-12);
}

double Spectrum::squared_norm() const {
  double s = 0.0;
  for (double c : coefficients) s += c * c;
  return s;
}

std::vector<std::int64_t> walsh_hadamard_integer(const TruthTable& t) {
  std::vector<std::int64_t> a(t.labels().begin(), t.labels().end());
  const std::size_t n = a.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int64_t u = a[j], v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
    }
  }
  // With code bit i set for x_i = +1, chi_S(x) = prod_{i in S} x_i gives
  // sum_x f(x) chi_S(x) = (-1)^{|S|} times the butterfly's entry S.
  for (std::size_t s = 0; s < n; ++s) {
    if (std::popcount(s) & 1) a[s] = -a[s];
  }
  return a;
}

Spectrum walsh_hadamard(const TruthTable& t) {
  const auto raw = walsh_hadamard_integer(t);
  const double scale = std::ldexp(1.0, -t.dimension());
  Spectrum s{t.dimension(), std::vector<double>(raw.size())};
  for (std::size_t i = 0; i < raw.size(); ++i) s.coefficients[i] = static_cast<double>(raw[i]) * scale;
  return s;
}

std::vector<double> spectral_level_weights(const TruthTable& t) {
  const auto raw = walsh_hadamard_integer(t);
  const int d = t.dimension();
  std::vector<std::int64_t> level(static_cast<std::size_t>(d) + 1, 0);
  for (std::size_t s = 0; s < raw.size(); ++s) {
    level[static_cast<std::size_t>(std::popcount(s))] += raw[s] * raw[s];
  }
  const double scale = std::ldexp(1.0, -2 * d);
  std::vector<double> w(level.size());
  for (std::size_t j = 0; j < level.size(); ++j) w[j] = static_cast<double>(level[j]) * scale;
  return w;
}

double exact_noise_sensitivity(const TruthTable& t, double p) {
  check_p(p);
  const auto w = spectral_level_weights(t);
  double stable = 0.0;
  double rho = 1.0;
  for (double wj : w) {
    stable += rho * wj;
    rho *= (1.0 - p);
  }
  return 0.5 - 0.5 * stable;
}

double exact_score(const TruthTable& t, int feature, double p) {
  if (feature < 0 || feature >= t.dimension()) throw std::out_of_range("feature index out of range");
  const double parent = exact_noise_sensitivity(t, p);
  const double neg = exact_noise_sensitivity(t.restrict(Restriction({{feature, kNeg}})), p);
  const double pos = exact_noise_sensitivity(t.restrict(Restriction({{feature, kPos}})), p);
  return parent - 0.5 * (neg + pos);
}

double exact_precision_error(const TruthTable& t, const Instance& x, const Restriction& certificate) {
  if (x.dimension() != t.dimension()) throw std::invalid_argument("instance dimension does not match table");
  if (!certificate.agrees_with(x)) throw std::invalid_argument("certificate disagrees with the instance");
  const Sign label = t.at(x);
  const TruthTable sub = t.restrict(certificate);
  std::uint64_t disagree = 0;
  for (Sign s : sub.labels()) disagree += s != label ? 1 : 0;
  return static_cast<double>(disagree) / static_cast<double>(sub.size());
}

namespace {

// Smallest |S| with #{y : y_S = x_S, f(y) != f(x)} <= eps 2^{d-|S|}.
// Writing y = x xor z, the count for S is the sum of g(z) = [f(x xor z) != f(x)]
// over z inside the complement of S: a subset-sum (zeta) transform.
int certificate_complexity_at(const TruthTable& t, std::uint64_t x_code, double eps,
                              std::vector<std::uint32_t>& h) {
  const int d = t.dimension();
  const std::uint64_t n = t.size();
  const Sign label = t[x_code];
  h.resize(n);
  for (std::uint64_t z = 0; z < n; ++z) h[z] = t[x_code ^ z] != label ? 1U : 0U;
  for (int i = 0; i < d; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t m = 0; m < n; ++m) {
      if (m & bit) h[m] += h[m ^ bit];
    }
  }
  const std::uint64_t full = n - 1;
  int best = d;
  for (std::uint64_t s = 0; s < n; ++s) {
    const int size = std::popcount(s);
    if (size >= best) continue;
    const double completions = std::ldexp(1.0, d - size);
    if (within_error_budget(h[full & ~s], eps, completions)) best = size;
  }
  return best;
}

}  // namespace

int exact_certificate_complexity(const TruthTable& t, const Instance& x, double eps) {
  check_eps(eps);
  if (t.dimension() > kMaxCertificateDimension) throw std::invalid_argument("dimension over cap for certificate search (d <= 16)");
  if (x.dimension() != t.dimension()) throw std::invalid_argument("instance dimension does not match table");
  std::vector<std::uint32_t> scratch;
  return certificate_complexity_at(t, x.code(), eps, scratch);
}

double exact_avg_certificate_complexity(const TruthTable& t, double eps) {
  check_eps(eps);
  if (t.dimension() > kMaxAverageCertificateDimension) {
    throw std::invalid_argument("dimension over cap for average certificate complexity (d <= 12)");
  }
  std::vector<std::uint32_t> scratch;
  std::uint64_t total = 0;
  for (std::uint64_t code = 0; code < t.size(); ++code) {
    total += static_cast<std::uint64_t>(certificate_complexity_at(t, code, eps, scratch));
  }
  return static_cast<double>(total) / static_cast<double>(t.size());
}

int exact_dt_complexity(const TruthTable& t, double eps) {
  check_eps(eps);
  const int d = t.dimension();
  if (d > kMaxDtDimension) throw std::invalid_argument("dimension over cap for decision-tree search (d <= 14)");

  // Restrictions are indexed in base 3: digit i is 0 (free), 1 (x_i = -1) or 2 (x_i = +1).
  const std::uint64_t n = pow3(d);
  std::vector<std::uint64_t> p3(static_cast<std::size_t>(d) + 1, 1);
  for (int i = 1; i <= d; ++i) p3[static_cast<std::size_t>(i)] = p3[static_cast<std::size_t>(i) - 1] * 3;

  std::vector<std::uint32_t> positives(n);
  std::vector<std::uint8_t> free_count(n);
  for (std::uint64_t a = n; a-- > 0;) {
    std::uint64_t rest = a;
    int first_free = -1;
    int nfree = 0;
    std::uint64_t code = 0;
    for (int i = 0; i < d; ++i) {
      const std::uint64_t digit = rest % 3;
      rest /= 3;
      if (digit == 0) {
        if (first_free < 0) first_free = i;
        ++nfree;
      } else if (digit == 2) {
        code |= std::uint64_t{1} << i;
      }
    }
    free_count[a] = static_cast<std::uint8_t>(nfree);
    if (first_free < 0) {
      positives[a] = t[code] > 0 ? 1U : 0U;
    } else {
      const auto step = p3[static_cast<std::size_t>(first_free)];
      positives[a] = positives[a + step] + positives[a + 2 * step];
    }
  }

  // errors_k[a]: fewest misclassified points on subcube a by a tree of depth <= k.
  std::vector<std::uint32_t> leaf_errors(n);
  for (std::uint64_t a = 0; a < n; ++a) {
    const std::uint32_t size = std::uint32_t{1} << free_count[a];
    leaf_errors[a] = std::min(positives[a], size - positives[a]);
  }
  const double total = std::ldexp(1.0, d);
  if (within_error_budget(leaf_errors[0], eps, total)) return 0;

  std::vector<std::uint32_t> prev = leaf_errors;
  std::vector<std::uint32_t> next(n);
  for (int k = 1; k <= d; ++k) {
    for (std::uint64_t a = 0; a < n; ++a) {
      std::uint32_t best = leaf_errors[a];
      if (best != 0 && free_count[a] > 0) {
        std::uint64_t rest = a;
        for (int i = 0; i < d && best != 0; ++i) {
          const std::uint64_t digit = rest % 3;
          rest /= 3;
          if (digit != 0) continue;
          const auto step = p3[static_cast<std::size_t>(i)];
          best = std::min(best, prev[a + step] + prev[a + 2 * step]);
        }
      }
      next[a] = best;
    }
    if (within_error_budget(next[0], eps, total)) return k;
    std::swap(prev, next);
  }
  return d;
}

int exact_greedy_tree_query(const TruthTable& t, const Restriction& alpha, double p) {
  check_p(p);
  if (!alpha.fits(t.dimension())) throw std::out_of_range("restriction index out of range");
  const std::vector<int> free = t.free_features(alpha);
  if (free.empty()) throw std::invalid_argument("every feature is already restricted");
  const TruthTable sub = t.restrict(alpha);
  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < free.size(); ++j) {
    const double s = exact_score(sub, static_cast<int>(j), p);
    if (s > best_score) {
      best_score = s;
      best = free[j];
    }
  }
  return best;
}

Sign exact_leaf_value(const TruthTable& t, const Restriction& alpha) {
  const TruthTable sub = t.restrict(alpha);
  return 2 * sub.count_positive() >= sub.size() ? kPos : kNeg;
}

Sign GreedyTree::evaluate(const Instance& x) const {
  int at = 0;
  while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
    const auto& node = nodes[static_cast<std::size_t>(at)];
    at = node.child[x[node.feature] > 0 ? 1 : 0];
  }
  return nodes[static_cast<std::size_t>(at)].label;
}

int GreedyTree::depth() const {
  std::function<int(int)> rec = [&](int at) -> int {
    const auto& node = nodes[static_cast<std::size_t>(at)];
    if (node.feature < 0) return 0;
    return 1 + std::max(rec(node.child[0]), rec(node.child[1]));
  };
  return nodes.empty() ? 0 : rec(0);
}

GreedyTree materialize_greedy_tree(const TruthTable& t, double p, int depth) {
  if (depth < 0 || depth > t.dimension()) throw std::invalid_argument("depth must lie in [0, d]");
  GreedyTree tree;
  std::function<int(const Restriction&)> build = [&](const Restriction& alpha) -> int {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (static_cast<int>(alpha.size()) == depth) {
      tree.nodes[static_cast<std::size_t>(id)].label = exact_leaf_value(t, alpha);
      return id;
    }
    const int feature = exact_greedy_tree_query(t, alpha, p);
    tree.nodes[static_cast<std::size_t>(id)].feature = feature;
    const int neg = build(alpha.extended(feature, kNeg));
    const int pos = build(alpha.extended(feature, kPos));
    tree.nodes[static_cast<std::size_t>(id)].child[0] = neg;
    tree.nodes[static_cast<std::size_t>(id)].child[1] = pos;
    return id;
  };
  build(Restriction{});
  return tree;
}

}  // namespace implicert
