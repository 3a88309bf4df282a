#include "implicert/bench.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "implicert/baseline.hpp"
#include "implicert/certifier.hpp"
#include "implicert/exact_oracles.hpp"
#include "implicert/rng.hpp"

namespace implicert {

ModelExpr two_parity_model(int d) {
  if (d < 2) throw std::invalid_argument("two-parity needs d >= 2");
  return ModelExpr(expr::parity({expr::var(d - 2), expr::var(d - 1)}), d);
}

void ParityBenchConfig::validate() const {
  if (dims.empty()) throw std::invalid_argument("dimension grid is empty");
  for (int d : dims) {
    if (d < 2 || d > 16) throw std::invalid_argument("parity bench dimensions must lie in [2, 16]");
    if (depth > d) throw std::invalid_argument("depth exceeds a grid dimension");
  }
  if (seeds < 1) throw std::invalid_argument("need at least one seed");
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
}

namespace {

std::vector<Instance> bench_instances(int d, std::uint64_t seed) {
  std::vector<Instance> out;
  if (d <= 12) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << d); ++code) out.push_back(Instance::from_code(d, code));
    return out;
  }
  CounterRng rng(seed, 0x696e7374ULL);
  for (int i = 0; i < 1024; ++i) out.push_back(Instance::from_code(d, rng.below(std::uint64_t{1} << d)));
  return out;
}

}  // namespace

std::vector<ParityBenchRow> run_parity_bench(const ParityBenchConfig& cfg) {
  cfg.validate();
  std::vector<ParityBenchRow> rows;
  for (int d : cfg.dims) {
    const ModelExpr expr = two_parity_model(d);
    const auto table = std::make_shared<const TruthTable>(TruthTable::from_expr(expr));
    const auto instances = bench_instances(d, cfg.base_seed);

    CertifierConfig ccfg;
    ccfg.epsilon = cfg.epsilon;
    ccfg.delta = cfg.delta;
    ccfg.depth_budget = cfg.depth;
    TreeParams params = wire_parameters(ccfg, d);
    if (cfg.noise_rate) params.noise_rate = *cfg.noise_rate;
    if (cfg.score_tolerance) params.score_tolerance = *cfg.score_tolerance;
    params.score_mode = cfg.mode;

    ParityBenchRow row;
    row.dimension = d;
    row.seeds = cfg.seeds;
    row.instances = instances.size();

    double cc_sum = 0.0;
    for (const auto& x : instances) cc_sum += exact_certificate_complexity(*table, x, 0.0);
    row.exact_certificate_complexity = cc_sum / static_cast<double>(instances.size());

    std::uint64_t runs = 0, bottoms = 0, matches = 0, size_sum = 0, query_sum = 0;
    int successful_seeds = 0;
    for (int s = 0; s < cfg.seeds; ++s) {
      auto f = make_model(expr);
      params.global_seed = derive_seed(cfg.base_seed, static_cast<std::uint64_t>(s));
      ImplicitTree tree(f, params, table, cfg.threads);
      const auto batch = certify_batch(tree, instances, ccfg, cfg.threads);
      bool all_match = true;
      for (const auto& outcome : batch.outcomes) {
        ++runs;
        query_sum += outcome_queries(outcome);
        const auto& feats = outcome_features(outcome);
        const auto* cert = std::get_if<Certificate>(&outcome);
        const bool match = cert && feats.size() == 2 && feats.contains(d - 2) && feats.contains(d - 1);
        if (cert) {
          size_sum += feats.size();
          row.implicit_max_exact_error =
              std::max(row.implicit_max_exact_error, exact_precision_error(*table, cert->instance, feats));
        } else {
          ++bottoms;
        }
        matches += match ? 1 : 0;
        all_match = all_match && match;
      }
      successful_seeds += all_match ? 1 : 0;
    }
    const std::uint64_t accepted = runs - bottoms;
    row.implicit_mean_size = accepted ? static_cast<double>(size_sum) / static_cast<double>(accepted) : 0.0;
    row.implicit_bottom_rate = static_cast<double>(bottoms) / static_cast<double>(runs);
    row.implicit_match_rate = static_cast<double>(matches) / static_cast<double>(runs);
    row.implicit_seed_success_rate = static_cast<double>(successful_seeds) / static_cast<double>(cfg.seeds);
    row.implicit_mean_queries = static_cast<double>(query_sum) / static_cast<double>(runs);

    BaselineConfig bcfg;
    bcfg.epsilon = cfg.epsilon;
    bcfg.precision_mode = cfg.mode;
    bcfg.samples = cfg.baseline_samples ? cfg.baseline_samples : verification_samples(cfg.epsilon, cfg.delta);
    bcfg.seed = cfg.base_seed;
    auto f = make_model(expr);
    std::uint64_t bsize = 0, bqueries = 0;
    row.baseline_min_size = d;
    row.baseline_max_size = 0;
    for (const auto& x : instances) {
      const auto r = greedy_precision_certificate(f, x, bcfg, table.get());
      const int size = static_cast<int>(r.features.size());
      bsize += static_cast<std::uint64_t>(size);
      bqueries += r.queries;
      row.baseline_min_size = std::min(row.baseline_min_size, size);
      row.baseline_max_size = std::max(row.baseline_max_size, size);
      row.baseline_max_exact_error = std::max(row.baseline_max_exact_error, exact_precision_error(*table, x, r.features));
    }
    row.baseline_mean_size = static_cast<double>(bsize) / static_cast<double>(instances.size());
    row.baseline_mean_queries = static_cast<double>(bqueries) / static_cast<double>(instances.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace implicert
