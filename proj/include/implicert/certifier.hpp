#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "implicert/implicit_tree.hpp"
#include "implicert/instance.hpp"
#include "implicert/model.hpp"
#include "implicert/restriction.hpp"

namespace implicert {

struct CertifierConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  /// Explicit k; overrides the wired depth.
  std::optional<int> depth_budget;
  double c_k = 1.0;
  double c_eta = 1.0;
  double c_p = 1.0;
  /// User bound on the decision-tree complexity D(f, eps delta).
  std::optional<double> d_bound;
  /// Guess of the certificate complexity C(f); converted to a (very loose)
  /// D bound when d_bound is absent.
  std::optional<double> certificate_guess;

  void validate() const;
};

/// c C^2 / (eps delta)^9.
double dt_bound_from_certificate_complexity(double certificate_complexity, double epsilon, double delta,
                                            double c = 1.0);

/// Tree parameters from (eps, delta, D):
///   k   = min(d, ceil(c_k (D / eps)^3))   unless depth_budget is set
///   eta = min(1, c_eta / k)
///   p   = min(1, c_p eps / D), with D replaced by k when no bound is known.
/// Throws std::invalid_argument when neither a D bound nor a depth is given.
TreeParams wire_parameters(const CertifierConfig& cfg, int dimension);

struct Certificate {
  Restriction features;  // walk order
  Instance instance;
  double error_estimate = 0.0;
  std::uint64_t verification_samples = 0;
  std::uint64_t queries = 0;
  TreeParams params;
};

/// No certificate: verification rejected the walked restriction.
struct Bottom {
  std::string reason;
  Restriction rejected;
  Instance instance;
  double error_estimate = 0.0;
  std::uint64_t verification_samples = 0;
  std::uint64_t queries = 0;
};

using CertifyOutcome = std::variant<Certificate, Bottom>;

struct Verification {
  bool accepted = false;
  double empirical_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t queries = 0;
};

/// ceil(2 ln(2/delta) / eps^2): Hoeffding count for deviation eps/2.
std::uint64_t verification_samples(double epsilon, double delta);

/// Accepts iff the empirical error over verification_samples(eps, delta)
/// conditional samples is at most eps. True error <= eps/2 is accepted and
/// true error >= 3eps/2 rejected, each with probability >= 1 - delta.
Verification verify_certificate(const BlackboxModel& f, const Instance& x, const Restriction& certificate,
                                double epsilon, double delta, std::uint64_t seed);

/// Seed of the verification stream for x under a tree's global seed.
std::uint64_t verification_seed(std::uint64_t global_seed, const Instance& x);

/// Walks the tree from the root along x, then verifies the path.
CertifyOutcome find_certificate(ImplicitTree& tree, const Instance& x, const CertifierConfig& cfg);

struct BatchSummary {
  std::uint64_t instances = 0;
  std::uint64_t bottoms = 0;
  double bottom_rate = 0.0;
  std::map<int, std::uint64_t> size_histogram;  // accepted certificates only
  double mean_queries = 0.0;
  /// Queries actually issued: every distinct tree node once, plus verification.
  std::uint64_t total_queries = 0;
};

struct BatchResult {
  std::vector<CertifyOutcome> outcomes;
  BatchSummary summary;
};

/// Certifies every instance against one tree (shared node cache).
/// Results do not depend on `threads`.
BatchResult certify_batch(ImplicitTree& tree, std::span<const Instance> instances, const CertifierConfig& cfg,
                          int threads = 1);

BatchSummary summarize(std::span<const CertifyOutcome> outcomes, std::uint64_t tree_queries);

/// Helpers over the variant.
bool is_bottom(const CertifyOutcome& outcome);
const Restriction& outcome_features(const CertifyOutcome& outcome);
std::uint64_t outcome_queries(const CertifyOutcome& outcome);

}  // namespace implicert
