#pragma once

#include <cstdint>
#include <vector>

#include "implicert/instance.hpp"
#include "implicert/restriction.hpp"
#include "implicert/truth_table.hpp"

namespace implicert {

// Dimension caps for the brute-force oracles.
inline constexpr int kMaxCertificateDimension = 16;
inline constexpr int kMaxAverageCertificateDimension = 12;
inline constexpr int kMaxDtDimension = 14;

/// Fourier coefficients f^(S) = E[f(x) prod_{i in S} x_i], indexed by subset mask.
struct Spectrum {
  int dimension = 0;
  std::vector<double> coefficients;

  double coefficient(std::uint64_t subset) const { return coefficients[subset]; }
  /// Sum of squared coefficients; 1 for a +-1 valued f.
  double squared_norm() const;
};

/// Unnormalized transform: entry S is sum_x f(x) chi_S(x) = 2^d f^(S). Exact.
std::vector<std::int64_t> walsh_hadamard_integer(const TruthTable& t);

Spectrum walsh_hadamard(const TruthTable& t);

/// W[j] = sum over |S| = j of f^(S)^2, computed from integer coefficients so
/// equal functions over different ambient dimensions give identical doubles.
std::vector<double> spectral_level_weights(const TruthTable& t);

/// NS_p(f) = 1/2 - 1/2 sum_S (1-p)^|S| f^(S)^2. p in [0, 1].
double exact_noise_sensitivity(const TruthTable& t, double p);

/// NS_p(f) - E_b[NS_p(f_{i=b})]. Exactly 0.0 when f does not depend on x_i.
double exact_score(const TruthTable& t, int feature, double p);

/// Pr[f(y) != f(x) | y_C = x_C], exactly. Throws when C disagrees with x.
double exact_precision_error(const TruthTable& t, const Instance& x, const Restriction& certificate);

/// Size of the smallest eps-error certificate for x. d <= 16.
int exact_certificate_complexity(const TruthTable& t, const Instance& x, double eps);

/// E_x[C(f, x, eps)] over all 2^d instances. d <= 12.
double exact_avg_certificate_complexity(const TruthTable& t, double eps);

/// Least depth of a tree T with Pr[T(x) != f(x)] <= eps. d <= 14.
int exact_dt_complexity(const TruthTable& t, double eps);

/// Feature of highest exact score for f_alpha; lowest index on ties.
/// Throws std::invalid_argument when every feature is restricted.
int exact_greedy_tree_query(const TruthTable& t, const Restriction& alpha, double p);

/// sign(E[f_alpha]) with a mean of exactly 0 resolved to +1.
Sign exact_leaf_value(const TruthTable& t, const Restriction& alpha);

/// The greedy noise-stabilizing tree built top-down with exact scores,
/// complete to `depth`, leaves labeled by exact_leaf_value.
struct GreedyTree {
  struct Node {
    int feature = -1;  // -1 for a leaf
    Sign label = kPos;
    int child[2] = {-1, -1};  // [0]: feature = -1, [1]: feature = +1
  };
  std::vector<Node> nodes;  // nodes[0] is the root

  Sign evaluate(const Instance& x) const;
  int depth() const;
};

GreedyTree materialize_greedy_tree(const TruthTable& t, double p, int depth);

/// count <= eps * total, with a relative slack of 1e-12 for rounding in eps * total.
bool within_error_budget(std::uint64_t count, double eps, double total);

}  // namespace implicert
