// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "implicert/baseline.hpp"
#include "implicert/bench.hpp"
#include "implicert/certifier.hpp"
#include "implicert/cli.hpp"
#include "implicert/estimators.hpp"
#include "implicert/exact_oracles.hpp"
#include "implicert/implicit_tree.hpp"
#include "implicert/model.hpp"
#include "support/brute_force.hpp"
#include "support/random_models.hpp"

using namespace implicert;
using namespace implicert::ref;

namespace {

// Pinned tolerances and limits.
constexpr double kOracleTolerance = 1e-9;
constexpr double kAc1RuntimeSeconds = 10.0;
constexpr double kAc2Eta = 0.05;
constexpr double kAc2Delta = 0.1;
constexpr int kAc2Seeds = 1000;
constexpr int kAc2MaxFailures = 200;  // 2 x delta x seeds
constexpr double kAc2RuntimeSeconds = 120.0;
constexpr double kExactTolerance = 1e-12;
constexpr double kAc4BenchSeconds = 60.0;
constexpr double kAc5Epsilon = 0.2;
constexpr double kAc5Delta = 0.2;
constexpr int kAc5Depth = 3;
constexpr double kAc5PrecisionLimit = 0.3;
constexpr double kAc5PrecisionFraction = 0.95;
constexpr int kAc5Models = 100;
constexpr int kAc5MinGoodModels = 95;
constexpr double kAc5RuntimeSeconds = 300.0;
constexpr int kAc6Models = 5;
constexpr int kAc7Trials = 1000;
constexpr double kAc7MinRejectRate = 0.9;
constexpr double kAc7Sigmas = 3.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(const char* id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s (%s)\n", id, pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

TruthTable table_of(const char* dsl) { return TruthTable::from_expr(parse_model(dsl)); }

ModelExpr parity_of(std::vector<int> vars, int d) {
  std::vector<ExprNode> xs;
  for (int v : vars) xs.push_back(expr::var(v));
  return ModelExpr(expr::parity(xs), d);
}

std::vector<Instance> all_instances(int d) {
  std::vector<Instance> out;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << d); ++c) out.push_back(Instance::from_code(d, c));
  return out;
}

// ---------------------------------------------------------------------------

void ac1() {
  const auto start = Clock::now();
  std::vector<TruthTable> family;
  family.push_back(table_of("(const +1) d=6"));
  family.push_back(table_of("(const -1) d=8"));
  for (int i : {0, 3, 7}) family.push_back(TruthTable::from_expr(ModelExpr(expr::var(i), 8)));
  for (int j = 1; j <= 4; ++j) {
    std::vector<int> vars;
    for (int v = 0; v < j; ++v) vars.push_back(2 * v);
    family.push_back(TruthTable::from_expr(parity_of(vars, 8)));
  }
  family.push_back(table_of("(or x0 x1 x2) d=3"));
  family.push_back(table_of("(or x1 x4 x6 x7) d=8"));
  family.push_back(table_of("(and x0 x1 x2) d=5"));
  family.push_back(table_of("(and x2 x5) d=8"));
  family.push_back(table_of("(maj x0 x1 x2) d=3"));
  family.push_back(table_of("(maj x1 x3 x6) d=8"));
  for (std::uint64_t s = 0; s < 10; ++s) family.push_back(random_table(8, 31337 + s));

  double worst = 0.0;
  for (const auto& t : family) {
    for (double p : {0.1, 0.5}) {
      worst = std::max(worst, std::abs(exact_noise_sensitivity(t, p) - pair_enumeration_ns(t, p)));
    }
  }
  const double secs = seconds_since(start);
  report("AC1", "spectral NS matches pair enumeration", worst <= kOracleTolerance && secs < kAc1RuntimeSeconds,
         fmt("%zu models, max |diff| = %.3g, %.2f s", family.size(), worst, secs));
}

// ---------------------------------------------------------------------------

void ac2() {
  const auto start = Clock::now();
  const std::uint64_t m = hoeffding_samples(kAc2Eta, kAc2Delta);
  struct Case {
    const char* dsl;
    int feature;
    double p;
  };
  const Case cases[] = {
      {"(xor x2 x5) d=6", 2, 0.1},
      {"(xor x2 x5) d=6", 0, 0.1},
      {"(maj x0 x1 x2) d=5", 1, 0.5},
      {"(or (and x0 x1) (xor x2 x3 x4)) d=8", 2, 0.1},
      {"(tree 3 (or x0 x5) (and x1 (not x6))) d=8", 3, 0.5},
  };
  int worst_ns = 0, worst_score = 0;
  bool ok = true;
  for (const auto& c : cases) {
    const ModelExpr e = parse_model(c.dsl);
    auto f = make_model(e);
    const TruthTable t = TruthTable::from_expr(e);
    const double ns = exact_noise_sensitivity(t, c.p);
    const double score = exact_score(t, c.feature, c.p);
    int ns_fail = 0, score_fail = 0;
    for (int s = 0; s < kAc2Seeds; ++s) {
      EstimatorConfig cfg;
      cfg.samples = m;
      cfg.seed = static_cast<std::uint64_t>(s);
      cfg.noise_rate = c.p;
      if (std::abs(estimate_noise_sensitivity(*f, cfg).estimate - ns) > kAc2Eta) ++ns_fail;
      if (std::abs(estimate_score(f, c.feature, cfg).estimate - score) > kAc2Eta) ++score_fail;
    }
    worst_ns = std::max(worst_ns, ns_fail);
    worst_score = std::max(worst_score, score_fail);
    ok = ok && ns_fail <= kAc2MaxFailures && score_fail <= kAc2MaxFailures;
  }
  const double secs = seconds_since(start);
  report("AC2", "estimator calibration", ok && secs < kAc2RuntimeSeconds,
         fmt("m = %llu, worst failures NS %d / score %d of %d seeds (limit %d), %.2f s",
             static_cast<unsigned long long>(m), worst_ns, worst_score, kAc2Seeds, kAc2MaxFailures, secs));
}

// ---------------------------------------------------------------------------

void ac3() {
  std::vector<std::string> bad;
  auto check = [&](const char* what, double got, double want) {
    if (std::abs(got - want) > kExactTolerance) bad.push_back(fmt("%s = %.15g (want %.15g)", what, got, want));
  };
  // Hand formulas against the enumeration oracles.
  const TruthTable two = table_of("(xor x0 x1) d=2");
  check("formula NS", parity_ns_formula(2, 0.1), 0.5 - 0.5 * 0.9 * 0.9);
  check("formula score", parity_score_formula(2, 0.1), 0.5 * 0.1 * 0.9);
  check("pair-enum NS", pair_enumeration_ns(two, 0.1), parity_ns_formula(2, 0.1));
  const TruthTable embedded = table_of("(xor x1 x3) d=5");
  check("brute score relevant", brute_score(embedded, Restriction{}, 1, 0.1), parity_score_formula(2, 0.1));
  check("brute score irrelevant", brute_score(embedded, Restriction{}, 0, 0.1), 0.0);

  // Library oracles reproduce the values.
  check("NS_0.1(2-parity)", exact_noise_sensitivity(two, 0.1), 0.095);
  check("Score relevant", exact_score(embedded, 1, 0.1), 0.045);
  check("Score relevant (other)", exact_score(embedded, 3, 0.1), 0.045);
  if (exact_score(embedded, 0, 0.1) != 0.0) bad.push_back("Score irrelevant is not exactly 0");
  if (exact_score(embedded, 4, 0.1) != 0.0) bad.push_back("Score irrelevant is not exactly 0");
  const TruthTable or3 = table_of("(or x0 x1 x2) d=3");
  check("avg C(OR3, 0)", exact_avg_certificate_complexity(or3, 0.0), 1.25);
  double enum_avg = 0.0;
  for (std::uint64_t c = 0; c < 8; ++c) enum_avg += subset_certificate_complexity(or3, Instance::from_code(3, c), 0.0);
  check("avg C(OR3, 0) enumerated", enum_avg / 8.0, 1.25);
  check("D(2-parity, 0)", exact_dt_complexity(two, 0.0), 2);
  check("D(2-parity, 0) brute", brute_dt_complexity(two, 0.0), 2);
  check("D(OR3, 0)", exact_dt_complexity(or3, 0.0), 3);
  check("D(OR3, 0) brute", brute_dt_complexity(or3, 0.0), 3);

  std::string detail = "NS 0.095, score 0.045 / 0, avg C 1.25, D 2 and 3";
  for (const auto& b : bad) detail += "; " + b;
  report("AC3", "known values reproduced by oracles", bad.empty(), detail);
}

// ---------------------------------------------------------------------------

void ac4() {
  bool ok = true;
  std::string detail;
  for (int d : {6, 8, 10}) {
    const ModelExpr e = two_parity_model(d);
    auto f = make_model(e);
    auto t = std::make_shared<const TruthTable>(TruthTable::from_expr(e));
    CertifierConfig cfg;
    cfg.depth_budget = 2;
    TreeParams params = wire_parameters(cfg, d);
    params.score_mode = ScoreMode::ExactOracle;
    ImplicitTree tree(f, params, t);
    const auto xs = all_instances(d);
    const BatchResult batch = certify_batch(tree, xs, cfg, 4);
    int implicit_ok = 0, baseline_d = 0;
    BaselineConfig bcfg;
    bcfg.epsilon = cfg.epsilon;
    bcfg.precision_mode = ScoreMode::ExactOracle;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto& o = batch.outcomes[i];
      if (!is_bottom(o) && outcome_features(o).size() == 2 && exact_precision_error(*t, xs[i], outcome_features(o)) == 0.0) {
        ++implicit_ok;
      }
      if (static_cast<int>(greedy_precision_certificate(f, xs[i], bcfg, t.get()).features.size()) == d) ++baseline_d;
    }
    const bool row_ok = implicit_ok == static_cast<int>(xs.size()) && baseline_d == static_cast<int>(xs.size()) &&
                        batch.summary.bottoms == 0;
    ok = ok && row_ok;
    detail += fmt("d=%d: implicit size 2 err 0 on %d/%zu, baseline size d on %d/%zu; ", d, implicit_ok, xs.size(),
                  baseline_d, xs.size());
  }
  const auto start = Clock::now();
  const char* argv[] = {"implicert", "bench", "parity", "--dims", "6,8,10", "--mode", "exact", "--format", "csv"};
  std::ostringstream out, err;
  const int code = run_cli(9, argv, out, err);
  const double secs = seconds_since(start);
  const std::string csv = out.str();
  const bool bench_ok = code == 0 && csv.find("\n6,1,64,2,2,0,1,1,0,") != std::string::npos &&
                        csv.find("\n8,1,256,2,2,0,1,1,0,") != std::string::npos &&
                        csv.find("\n10,1,1024,2,2,0,1,1,0,") != std::string::npos && secs < kAc4BenchSeconds;
  ok = ok && bench_ok;
  detail += fmt("bench parity %s in %.2f s", bench_ok ? "reproduces the table" : "MISMATCH", secs);
  report("AC4", "parity contrast (implicit 2 vs baseline d)", ok, detail);
}

// ---------------------------------------------------------------------------

void ac5() {
  const auto start = Clock::now();
  const auto xs = all_instances(8);
  int good_models = 0;
  std::uint64_t accepted = 0, precise = 0;
  bool size_ok = true;
  double worst_bottom = 0.0;
  int exact_greedy = 0;  // context only: models whose depth-k greedy tree reproduces f
  for (int s = 0; s < kAc5Models; ++s) {
    const ModelExpr e = random_depth_tree(8, 3, 5000 + static_cast<std::uint64_t>(s));
    auto f = make_model(e);
    auto t = std::make_shared<const TruthTable>(TruthTable::from_expr(e));
    CertifierConfig cfg;
    cfg.epsilon = kAc5Epsilon;
    cfg.delta = kAc5Delta;
    cfg.depth_budget = kAc5Depth;
    TreeParams params = wire_parameters(cfg, 8);
    params.score_mode = ScoreMode::ExactOracle;
    params.global_seed = static_cast<std::uint64_t>(s);
    ImplicitTree tree(f, params, t);
    const BatchResult batch = certify_batch(tree, xs, cfg, 4);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto& o = batch.outcomes[i];
      if (is_bottom(o)) continue;
      ++accepted;
      if (outcome_features(o).size() > static_cast<std::size_t>(kAc5Depth)) size_ok = false;
      if (exact_precision_error(*t, xs[i], outcome_features(o)) <= kAc5PrecisionLimit) ++precise;
    }
    worst_bottom = std::max(worst_bottom, batch.summary.bottom_rate);
    const GreedyTree greedy = materialize_greedy_tree(*t, params.noise_rate, kAc5Depth);
    bool exact = true;
    for (const auto& x : xs) exact = exact && greedy.evaluate(x) == t->at(x);
    exact_greedy += exact;
    if (batch.summary.bottom_rate <= kAc5Delta) ++good_models;
  }
  const double frac = accepted ? static_cast<double>(precise) / static_cast<double>(accepted) : 0.0;
  const double secs = seconds_since(start);
  const bool ok = size_ok && accepted > 0 && frac >= kAc5PrecisionFraction && good_models >= kAc5MinGoodModels &&
                  secs < kAc5RuntimeSeconds;
  report("AC5", "certificate-finding proxy on random depth-3 trees", ok,
         fmt("sizes <= 3: %s, precise %.4f of %llu accepted, bottom rate <= 0.2 on %d/%d models (worst %.3f), "
             "greedy depth-3 tree exact on %d/%d models, %.1f s",
             size_ok ? "yes" : "NO", frac, static_cast<unsigned long long>(accepted), good_models, kAc5Models,
             worst_bottom, exact_greedy, kAc5Models, secs));
}

// ---------------------------------------------------------------------------

// node key -> feature over all 2^d walks; false if some node was queried with two features.
bool induced_tree(ImplicitTree& tree, int d, std::map<std::string, int>& nodes) {
  bool consistent = true;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << d); ++c) {
    const WalkResult w = tree.walk(Instance::from_code(d, c));
    Restriction prefix;
    for (const auto& lit : w.path.literals()) {
      auto [it, inserted] = nodes.emplace(prefix.canonical_key(), lit.feature);
      if (it->second != lit.feature) consistent = false;
      prefix = prefix.extended(lit.feature, lit.value);
    }
  }
  return consistent;
}

void ac6() {
  bool ok = true;
  std::size_t total_nodes = 0;
  for (int s = 0; s < kAc6Models; ++s) {
    const std::uint64_t seed = 900 + static_cast<std::uint64_t>(s);
    const ModelExpr e = s % 2 ? random_expression(8, 4, seed) : random_depth_tree(8, 4, seed);
    auto f = make_model(e);
    TreeParams params;
    params.depth_budget = 3;
    params.noise_rate = 0.2;
    params.score_tolerance = 0.2;
    params.global_seed = seed;
    params.score_mode = ScoreMode::MonteCarlo;
    std::map<std::string, int> first, second;
    ImplicitTree run1(f, params, 1);
    ImplicitTree run2(f, params, 4);
    const bool c1 = induced_tree(run1, 8, first);
    const bool c2 = induced_tree(run2, 8, second);
    ok = ok && c1 && c2 && first == second && first.size() <= 7;
    total_nodes += first.size();
  }
  report("AC6", "walks form one consistent tree, repeat runs identical", ok,
         fmt("%d models x 256 walks, %zu internal nodes in total", kAc6Models, total_nodes));
}

// ---------------------------------------------------------------------------

// Pr[Binomial(n, q) <= k], summed in log space.
double binomial_cdf(std::uint64_t n, double q, std::uint64_t k) {
  if (q <= 0.0) return 1.0;
  if (q >= 1.0) return k >= n ? 1.0 : 0.0;
  double total = 0.0;
  for (std::uint64_t i = 0; i <= k && i <= n; ++i) {
    const double log_term = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(i) + 1) -
                            std::lgamma(static_cast<double>(n - i) + 1) + static_cast<double>(i) * std::log(q) +
                            static_cast<double>(n - i) * std::log1p(-q);
    total += std::exp(log_term);
  }
  return std::min(total, 1.0);
}

void ac7() {
  const double eps = 0.1, delta = 0.1;
  const std::uint64_t m = verification_samples(eps, delta);
  const auto max_accept_count = static_cast<std::uint64_t>(std::floor(eps * static_cast<double>(m) * (1 + 1e-12)));
  struct Planted {
    const char* name;
    const char* dsl;
    const char* x;
    std::vector<int> features;
  };
  const Planted cases[] = {
      {"error 0.5", "(xor x1 x2) d=8", "01100110", {1}},
      {"error 0", "(xor x1 x2) d=8", "01100110", {1, 2}},
      {"error 0.125", "(or x0 x1 x2) d=6", "100000", {}},
  };
  bool ok = true;
  std::string detail = fmt("m = %llu; ", static_cast<unsigned long long>(m));
  for (const auto& c : cases) {
    const ModelExpr e = parse_model(c.dsl);
    auto f = make_model(e);
    const TruthTable t = TruthTable::from_expr(e);
    const Instance x = Instance::from_bitstring(c.x);
    const Restriction cert = Restriction::from_instance(x, c.features);
    const double err = exact_precision_error(t, x, cert);
    const double p_accept = binomial_cdf(m, err, max_accept_count);
    int accepted = 0;
    for (int s = 0; s < kAc7Trials; ++s) {
      accepted += verify_certificate(*f, x, cert, eps, delta, 0xace0000 + static_cast<std::uint64_t>(s)).accepted;
    }
    const double n = kAc7Trials;
    const double sigma = std::sqrt(n * p_accept * (1 - p_accept));
    const bool in_band = std::abs(accepted - n * p_accept) <= kAc7Sigmas * sigma + 0.5;
    bool case_ok = in_band;
    if (err == 0.0) case_ok = case_ok && accepted == kAc7Trials;
    if (err >= 1.5 * eps) case_ok = case_ok && (n - accepted) / n >= kAc7MinRejectRate;
    ok = ok && case_ok;
    detail += fmt("%s: accepted %d/%d (expected %.1f +- %.1f); ", c.name, accepted, kAc7Trials, n * p_accept,
                  kAc7Sigmas * sigma);
  }
  report("AC7", "verification statistics", ok, detail);
}

// ---------------------------------------------------------------------------

void ac8() {
  const double grid[] = {0.0, 0.05, 0.1, 0.25};
  int violations = 0;
  std::uint64_t checked_certs = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int d = 2 + static_cast<int>(s % 7);
    const TruthTable t = random_table(d, 8000 + s);
    int prev_dt = d + 1;
    for (double eps : grid) {
      const int dt = exact_dt_complexity(t, eps);
      if (dt > prev_dt) ++violations;
      prev_dt = dt;
    }
    const int d0 = exact_dt_complexity(t, 0.0);
    for (std::uint64_t c = 0; c < t.size(); ++c) {
      const Instance x = Instance::from_code(d, c);
      int prev = d + 1;
      for (double eps : grid) {
        const int cc = exact_certificate_complexity(t, x, eps);
        if (cc > prev) ++violations;
        prev = cc;
      }
      if (exact_certificate_complexity(t, x, 0.0) > d0) ++violations;
    }
    if (s % 10 == 0) {
      std::vector<Sign> labels(t.labels().begin(), t.labels().end());
      auto f = make_model(ModelExpr(expr::table(labels), d));
      CertifierConfig cfg;
      cfg.epsilon = 0.2;
      cfg.delta = 0.2;
      cfg.depth_budget = std::min(d, 2);
      ImplicitTree tree(f, wire_parameters(cfg, d));
      const auto xs = all_instances(d);
      const BatchResult batch = certify_batch(tree, xs, cfg, 2);
      for (const auto& o : batch.outcomes) {
        ++checked_certs;
        if (!is_bottom(o) && outcome_features(o).size() > static_cast<std::size_t>(*cfg.depth_budget)) ++violations;
      }
    }
  }
  report("AC8", "monotonicity and size bounds", violations == 0,
         fmt("100 tables, %d violations, %llu certificate sizes checked", violations,
             static_cast<unsigned long long>(checked_certs)));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8};
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      std::printf("FAIL: exception: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
