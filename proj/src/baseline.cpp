#include "implicert/baseline.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "implicert/estimators.hpp"
#include "implicert/exact_oracles.hpp"
#include "implicert/rng.hpp"

namespace implicert {

void BaselineConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1)");
  if (precision_mode == ScoreMode::MonteCarlo && samples < 1) {
    throw std::invalid_argument("Monte-Carlo precision needs at least one sample");
  }
}

namespace {

// Disagreements with `label` among completions of C; exact, as a count out of 2^{d-|C|}.
std::uint64_t exact_disagreements(const TruthTable& t, const Restriction& c, Sign label) {
  const TruthTable sub = t.restrict(c);
  std::uint64_t n = 0;
  for (Sign s : sub.labels()) n += s != label ? 1 : 0;
  return n;
}

}  // namespace

BaselineResult greedy_precision_certificate(const ModelPtr& f, const Instance& x, const BaselineConfig& cfg,
                                            const TruthTable* table) {
  cfg.validate();
  if (!f) throw std::invalid_argument("null model");
  const int d = f->dimension();
  if (x.dimension() != d) throw std::invalid_argument("instance dimension does not match model");
  const bool exact = cfg.precision_mode == ScoreMode::ExactOracle;
  if (exact && (!table || table->dimension() != d)) {
    throw std::invalid_argument("exact precision mode needs the model's truth table");
  }

  BaselineResult out;
  const Sign label = exact ? table->at(x) : f->query(x);
  if (!exact) out.queries += 1;

  // Error of C as a (numerator, denominator) pair so exact-mode ties compare exactly.
  auto evaluate = [&](const Restriction& c, std::uint64_t stream) -> std::pair<std::uint64_t, double> {
    if (exact) {
      const double total = static_cast<double>(std::uint64_t{1} << (d - static_cast<int>(c.size())));
      return {exact_disagreements(*table, c, label), total};
    }
    const auto r = estimate_precision_error(*f, x, c, EstimatorConfig{cfg.samples, derive_seed(cfg.seed, stream), 1.0});
    out.queries += r.queries;
    const double m = static_cast<double>(cfg.samples);
    return {static_cast<std::uint64_t>(std::llround(r.estimate * m)), m};
  };

  std::uint64_t stream = 0;
  auto [num, den] = evaluate(out.features, stream++);
  CounterRng tie_rng(cfg.seed, 0x7469650000000000ULL);
  while (!within_error_budget(num, cfg.epsilon, den) &&
         static_cast<int>(out.features.size()) < d) {
    std::vector<int> best;
    std::uint64_t best_num = 0;
    double best_den = 1.0;
    for (int i = 0; i < d; ++i) {
      if (out.features.contains(i)) continue;
      auto [n, m] = evaluate(out.features.extended(i, x[i]), stream++);
      // compare n/m against best_num/best_den without rounding
      const double lhs = static_cast<double>(n) * best_den;
      const double rhs = static_cast<double>(best_num) * m;
      if (best.empty() || lhs < rhs) {
        best.assign(1, i);
        best_num = n;
        best_den = m;
      } else if (lhs == rhs) {
        best.push_back(i);
      }
    }
    const int pick = cfg.randomized_ties ? best[tie_rng.below(best.size())] : best.front();
    out.features = out.features.extended(pick, x[pick]);
    num = best_num;
    den = best_den;
  }
  out.error = static_cast<double>(num) / den;
  return out;
}

}  // namespace implicert
