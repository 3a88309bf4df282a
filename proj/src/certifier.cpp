#include "implicert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "implicert/estimators.hpp"
#include "implicert/rng.hpp"

namespace implicert {

void CertifierConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(c_k > 0.0 && c_eta > 0.0 && c_p > 0.0)) throw std::invalid_argument("wiring constants must be positive");
  if (depth_budget && *depth_budget < 0) throw std::invalid_argument("depth budget must be non-negative");
  if (d_bound && !(*d_bound > 0.0)) throw std::invalid_argument("D bound must be positive");
  if (certificate_guess && !(*certificate_guess > 0.0)) {
    throw std::invalid_argument("certificate complexity guess must be positive");
  }
}

double dt_bound_from_certificate_complexity(double certificate_complexity, double epsilon, double delta, double c) {
  return c * certificate_complexity * certificate_complexity / std::pow(epsilon * delta, 9);
}

TreeParams wire_parameters(const CertifierConfig& cfg, int dimension) {
  cfg.validate();
  std::optional<double> bound = cfg.d_bound;
  if (!bound && cfg.certificate_guess) {
    bound = dt_bound_from_certificate_complexity(*cfg.certificate_guess, cfg.epsilon, cfg.delta);
  }
  if (!bound && !cfg.depth_budget) {
    throw std::invalid_argument("need either a decision-tree complexity bound or an explicit depth");
  }

  TreeParams params;
  if (cfg.depth_budget) {
    params.depth_budget = *cfg.depth_budget;
  } else {
    const double k = std::ceil(cfg.c_k * std::pow(*bound / cfg.epsilon, 3));
    params.depth_budget = k >= dimension ? dimension : static_cast<int>(k);
  }
  if (params.depth_budget > dimension) throw std::invalid_argument("depth budget exceeds the dimension");
  const int k = std::max(params.depth_budget, 1);
  params.score_tolerance = std::min(1.0, cfg.c_eta / k);
  const double reference = bound ? *bound : static_cast<double>(k);
  params.noise_rate = std::min(1.0, cfg.c_p * cfg.epsilon / reference);
  return params;
}

std::uint64_t verification_samples(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  return static_cast<std::uint64_t>(std::ceil(2.0 * std::log(2.0 / delta) / (epsilon * epsilon)));
}

Verification verify_certificate(const BlackboxModel& f, const Instance& x, const Restriction& certificate,
                                double epsilon, double delta, std::uint64_t seed) {
  const std::uint64_t m = verification_samples(epsilon, delta);
  const auto r = estimate_precision_error(f, x, certificate, EstimatorConfig{m, seed, 1.0});
  const auto disagreements = static_cast<std::uint64_t>(std::llround(r.estimate * static_cast<double>(m)));
  return {static_cast<double>(disagreements) <= epsilon * static_cast<double>(m), r.estimate, m, r.queries};
}

std::uint64_t verification_seed(std::uint64_t global_seed, const Instance& x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Sign s : x.bits()) {
    h ^= s > 0 ? 0x31U : 0x30U;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(global_seed ^ 0x7665726966790000ULL, h);
}

CertifyOutcome find_certificate(ImplicitTree& tree, const Instance& x, const CertifierConfig& cfg) {
  cfg.validate();
  const WalkResult walk = tree.walk(x);
  const auto& f = *tree.model();
  const Verification v = verify_certificate(f, x, walk.path, cfg.epsilon, cfg.delta,
                                            verification_seed(tree.params().global_seed, x));
  const std::uint64_t queries = walk.queries + v.queries;
  if (v.accepted) {
    return Certificate{walk.path, x, v.empirical_error, v.samples, queries, tree.params()};
  }
  return Bottom{"verification rejected the certificate", walk.path, x, v.empirical_error, v.samples, queries};
}

bool is_bottom(const CertifyOutcome& outcome) { return std::holds_alternative<Bottom>(outcome); }

const Restriction& outcome_features(const CertifyOutcome& outcome) {
  return std::visit(
      [](const auto& o) -> const Restriction& {
        if constexpr (std::is_same_v<std::decay_t<decltype(o)>, Certificate>) {
          return o.features;
        } else {
          return o.rejected;
        }
      },
      outcome);
}

std::uint64_t outcome_queries(const CertifyOutcome& outcome) {
  return std::visit([](const auto& o) { return o.queries; }, outcome);
}

BatchSummary summarize(std::span<const CertifyOutcome> outcomes, std::uint64_t tree_queries) {
  BatchSummary s;
  s.instances = outcomes.size();
  std::uint64_t query_sum = 0;
  s.total_queries = tree_queries;
  for (const auto& o : outcomes) {
    query_sum += outcome_queries(o);
    if (const auto* b = std::get_if<Bottom>(&o)) {
      ++s.bottoms;
      s.total_queries += b->verification_samples + 1;
    } else {
      const auto& c = std::get<Certificate>(o);
      ++s.size_histogram[static_cast<int>(c.features.size())];
      s.total_queries += c.verification_samples + 1;
    }
  }
  if (s.instances > 0) {
    s.bottom_rate = static_cast<double>(s.bottoms) / static_cast<double>(s.instances);
    s.mean_queries = static_cast<double>(query_sum) / static_cast<double>(s.instances);
  }
  return s;
}

BatchResult certify_batch(ImplicitTree& tree, std::span<const Instance> instances, const CertifierConfig& cfg,
                          int threads) {
  cfg.validate();
  BatchResult out;
  out.outcomes.resize(instances.size(), CertifyOutcome{Bottom{}});
  const std::size_t n = instances.size();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out.outcomes[i] = find_certificate(tree, instances[i], cfg);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < n; i += workers) out.outcomes[i] = find_certificate(tree, instances[i], cfg);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  out.summary = summarize(out.outcomes, tree.cache().total_queries());
  return out;
}

}  // namespace implicert
