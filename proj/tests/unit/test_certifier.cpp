#include <gtest/gtest.h>

#include <cmath>

#include "implicert/certifier.hpp"
#include "implicert/exact_oracles.hpp"
#include "implicert/model.hpp"
#include "implicert/rng.hpp"
#include "support/random_models.hpp"

using namespace implicert;
using namespace implicert::ref;

namespace {

CertifierConfig cfg_with_depth(int k, double eps = 0.1, double delta = 0.1) {
  CertifierConfig cfg;
  cfg.epsilon = eps;
  cfg.delta = delta;
  cfg.depth_budget = k;
  return cfg;
}

TreeParams exact_mode(TreeParams p) {
  p.score_mode = ScoreMode::ExactOracle;
  return p;
}

std::vector<Instance> all_instances(int d) {
  std::vector<Instance> out;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << d); ++c) out.push_back(Instance::from_code(d, c));
  return out;
}

}  // namespace

TEST(WireParameters, AutoFromDtBound) {
  CertifierConfig cfg;
  cfg.epsilon = 0.1;
  cfg.delta = 0.1;
  cfg.d_bound = 2.0;
  const TreeParams p = wire_parameters(cfg, 10);
  EXPECT_EQ(p.depth_budget, 10);
  EXPECT_DOUBLE_EQ(p.score_tolerance, 0.1);
  EXPECT_DOUBLE_EQ(p.noise_rate, 0.05);
}

TEST(WireParameters, UncappedDepth) {
  CertifierConfig cfg;
  cfg.epsilon = 0.5;
  cfg.delta = 0.1;
  cfg.d_bound = 1.0;
  const TreeParams p = wire_parameters(cfg, 20);
  EXPECT_EQ(p.depth_budget, 8);
  EXPECT_DOUBLE_EQ(p.score_tolerance, 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(p.noise_rate, 0.5);
}

TEST(WireParameters, ExplicitDepthOverrides) {
  CertifierConfig cfg = cfg_with_depth(2);
  cfg.c_eta = 0.4;
  const TreeParams p = wire_parameters(cfg, 10);
  EXPECT_EQ(p.depth_budget, 2);
  EXPECT_DOUBLE_EQ(p.score_tolerance, 0.2);
  EXPECT_DOUBLE_EQ(p.noise_rate, 0.05);
  cfg.d_bound = 4.0;
  EXPECT_DOUBLE_EQ(wire_parameters(cfg, 10).noise_rate, 0.025);
}

TEST(WireParameters, Errors) {
  CertifierConfig cfg;
  cfg.d_bound = 0.0;
  EXPECT_THROW(wire_parameters(cfg, 10), std::invalid_argument);
  EXPECT_THROW(wire_parameters(CertifierConfig{}, 10), std::invalid_argument);
  CertifierConfig bad = cfg_with_depth(2, 1.0);
  EXPECT_THROW(wire_parameters(bad, 10), std::invalid_argument);
  CertifierConfig deep = cfg_with_depth(11);
  EXPECT_THROW(wire_parameters(deep, 10), std::invalid_argument);
}

TEST(WireParameters, CertificateGuessUsesSmythBound) {
  EXPECT_DOUBLE_EQ(dt_bound_from_certificate_complexity(2.0, 0.5, 0.5), 4.0 * 262144.0);
  CertifierConfig cfg;
  cfg.epsilon = 0.5;
  cfg.delta = 0.5;
  cfg.certificate_guess = 2.0;
  const TreeParams p = wire_parameters(cfg, 12);
  EXPECT_EQ(p.depth_budget, 12);
  EXPECT_DOUBLE_EQ(p.noise_rate, 0.5 / (4.0 * 262144.0));
}

TEST(VerificationSamples, Formula) {
  EXPECT_EQ(verification_samples(0.1, 0.1), 600U);
  EXPECT_EQ(verification_samples(0.2, 0.2), static_cast<std::uint64_t>(std::ceil(2 * std::log(10.0) / 0.04)));
}

TEST(FindCertificate, ConstantWithZeroDepth) {
  auto f = make_model("(const +1) d=6");
  const CertifierConfig cfg = cfg_with_depth(0);
  ImplicitTree tree(f, wire_parameters(cfg, 6));
  const CertifyOutcome out = find_certificate(tree, Instance::from_bitstring("010101"), cfg);
  ASSERT_FALSE(is_bottom(out));
  const auto& c = std::get<Certificate>(out);
  EXPECT_TRUE(c.features.empty());
  EXPECT_EQ(c.error_estimate, 0.0);
  EXPECT_EQ(c.verification_samples, 600U);
}

TEST(FindCertificate, TwoParityExactMode) {
  const ModelExpr e = parse_model("(xor x3 x7) d=10");
  auto f = make_model(e);
  auto t = std::make_shared<const TruthTable>(TruthTable::from_expr(e));
  const CertifierConfig cfg = cfg_with_depth(2);
  ImplicitTree tree(f, exact_mode(wire_parameters(cfg, 10)), t);
  const Instance x = Instance::from_bitstring("1010110010");
  const CertifyOutcome out = find_certificate(tree, x, cfg);
  ASSERT_FALSE(is_bottom(out));
  const auto& c = std::get<Certificate>(out);
  EXPECT_EQ(c.features, Restriction({{3, x[3]}, {7, x[7]}}));
  EXPECT_EQ(exact_precision_error(*t, x, c.features), 0.0);
  EXPECT_EQ(c.error_estimate, 0.0);
}

TEST(FindCertificate, TwoParityDepthOneIsBottom) {
  const ModelExpr e = parse_model("(xor x3 x7) d=10");
  auto f = make_model(e);
  auto t = std::make_shared<const TruthTable>(TruthTable::from_expr(e));
  const CertifierConfig cfg = cfg_with_depth(1);
  ImplicitTree tree(f, exact_mode(wire_parameters(cfg, 10)), t);
  const CertifyOutcome out = find_certificate(tree, Instance::from_bitstring("1010110010"), cfg);
  ASSERT_TRUE(is_bottom(out));
  const auto& b = std::get<Bottom>(out);
  EXPECT_EQ(b.rejected, Restriction({{3, kNeg}}));
  EXPECT_GT(b.error_estimate, 0.1);
}

TEST(VerifyCertificate, ZeroErrorAlwaysAccepted) {
  auto f = make_model("(xor x1 x2) d=8");
  const Instance x = Instance::from_bitstring("01100110");
  const Restriction c = Restriction::from_instance(x, std::vector<int>{1, 2});
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Verification v = verify_certificate(*f, x, c, 0.1, 0.1, s);
    EXPECT_TRUE(v.accepted);
    EXPECT_EQ(v.empirical_error, 0.0);
    EXPECT_EQ(v.samples, 600U);
  }
}

TEST(VerifyCertificate, HalfErrorRejected) {
  auto f = make_model("(xor x1 x2) d=8");
  const Instance x = Instance::from_bitstring("01100110");
  const Restriction c = Restriction::from_instance(x, std::vector<int>{1});
  int rejected = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) rejected += !verify_certificate(*f, x, c, 0.1, 0.1, s).accepted;
  EXPECT_GE(rejected, 900);
}

TEST(VerifyCertificate, EmptyCertificateOnBalancedFunction) {
  auto f = make_model("(maj x0 x1 x2) d=5");
  int rejected = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    rejected += !verify_certificate(*f, Instance::filled(5, kPos), Restriction{}, 0.1, 0.1, s).accepted;
  }
  EXPECT_GE(rejected, 95);
}

TEST(VerifyCertificate, MismatchIsAnError) {
  auto f = make_model("x0 d=2");
  EXPECT_THROW(verify_certificate(*f, Instance::filled(2, kPos), Restriction({{0, kNeg}}), 0.1, 0.1, 0),
               std::invalid_argument);
}

TEST(CertifyBatch, ConstantDepthZero) {
  auto f = make_model("(const -1) d=6");
  const CertifierConfig cfg = cfg_with_depth(0);
  ImplicitTree tree(f, wire_parameters(cfg, 6));
  const auto xs = all_instances(6);
  const BatchResult r = certify_batch(tree, xs, cfg);
  EXPECT_EQ(r.summary.instances, 64U);
  EXPECT_EQ(r.summary.bottom_rate, 0.0);
  ASSERT_EQ(r.summary.size_histogram.size(), 1U);
  EXPECT_EQ(r.summary.size_histogram.at(0), 64U);
}

TEST(CertifyBatch, TwoParityExactMode) {
  const ModelExpr e = parse_model("(xor x3 x7) d=10");
  auto f = make_model(e);
  auto t = std::make_shared<const TruthTable>(TruthTable::from_expr(e));
  const CertifierConfig cfg = cfg_with_depth(2);
  ImplicitTree tree(f, exact_mode(wire_parameters(cfg, 10)), t);
  const auto xs = all_instances(10);
  const BatchResult r = certify_batch(tree, xs, cfg, 4);
  EXPECT_EQ(r.summary.bottoms, 0U);
  EXPECT_EQ(r.summary.size_histogram.at(2), 1024U);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Restriction& c = outcome_features(r.outcomes[i]);
    EXPECT_TRUE(c.contains(3) && c.contains(7));
    EXPECT_EQ(exact_precision_error(*t, xs[i], c), 0.0);
  }
}

TEST(CertifyBatch, ThreadCountDoesNotChangeResults) {
  auto f = make_model(random_depth_tree(6, 3, 3));
  CertifierConfig cfg = cfg_with_depth(3, 0.2, 0.2);
  const auto xs = all_instances(6);
  ImplicitTree a(f, wire_parameters(cfg, 6), 1);
  ImplicitTree b(f, wire_parameters(cfg, 6), 1);
  const BatchResult serial = certify_batch(a, xs, cfg, 1);
  const BatchResult parallel = certify_batch(b, xs, cfg, 4);
  ASSERT_EQ(serial.outcomes.size(), parallel.outcomes.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_EQ(is_bottom(serial.outcomes[i]), is_bottom(parallel.outcomes[i]));
    EXPECT_EQ(outcome_features(serial.outcomes[i]), outcome_features(parallel.outcomes[i]));
    EXPECT_EQ(outcome_queries(serial.outcomes[i]), outcome_queries(parallel.outcomes[i]));
  }
  EXPECT_EQ(serial.summary.total_queries, parallel.summary.total_queries);
}

// Shared walk prefixes give certificates that agree on that prefix.
TEST(CertifyBatch, CertificatesShareWalkPrefixes) {
  auto f = make_model(random_depth_tree(6, 3, 8));
  CertifierConfig cfg = cfg_with_depth(3, 0.2, 0.2);
  ImplicitTree tree(f, wire_parameters(cfg, 6));
  const auto xs = all_instances(6);
  const BatchResult r = certify_batch(tree, xs, cfg);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const auto a = outcome_features(r.outcomes[i]).literals();
      const auto b = outcome_features(r.outcomes[j]).literals();
      // Both walks query the same root feature; they agree until the first differing value.
      ASSERT_FALSE(a.empty());
      ASSERT_EQ(a[0].feature, b[0].feature);
      for (std::size_t l = 0; l < a.size() && a[l].value == b[l].value; ++l) {
        if (l + 1 < a.size()) ASSERT_EQ(a[l + 1].feature, b[l + 1].feature);
      }
    }
  }
}

// Random depth-3 trees over d = 8, auto-wired with D_bound = 3, eps = delta = 0.2.
// The wired depth is k = min(8, 3375) = 8, so eta = 1/8 and p = 0.2 / 3.
TEST(CertifyBatch, RandomDepthThreeTreesAutoWired) {
  CertifierConfig cfg;
  cfg.epsilon = 0.2;
  cfg.delta = 0.2;
  cfg.d_bound = 3.0;
  const auto xs = all_instances(8);
  int over = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const ModelExpr e = random_depth_tree(8, 3, 7000 + s);
    auto f = make_model(e);
    auto t = std::make_shared<const TruthTable>(TruthTable::from_expr(e));
    TreeParams params = wire_parameters(cfg, 8);
    ASSERT_EQ(params.depth_budget, 8);
    params.global_seed = s;
    ImplicitTree tree(f, exact_mode(params), t);
    const BatchResult r = certify_batch(tree, xs, cfg, 4);
    if (r.summary.bottom_rate > 0.2) ++over;
    for (std::size_t i = 0; i < xs.size(); i += 17) {
      if (!is_bottom(r.outcomes[i])) {
        EXPECT_LE(exact_precision_error(*t, xs[i], outcome_features(r.outcomes[i])), 0.3);
      }
    }
  }
  EXPECT_LE(over, 5);
}

// Precision bound: accepted certificates have exact error <= 3 eps / 2 in >= 1 - 2 delta of runs.
TEST(CertifyBatch, AcceptedCertificatesMeetPrecisionBound) {
  const double eps = 0.1, delta = 0.1;
  // Depth-2 paths here have true errors 0, 1/8, 1/4, ..., so some land near the eps boundary.
  const ModelExpr e = parse_model("(or (and x0 x1) (and x2 x3 x4)) d=8");
  auto f = make_model(e);
  const TruthTable t = TruthTable::from_expr(e);
  int accepted = 0, good = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Instance x = Instance::from_code(8, CounterRng(s, 77).below(256));
    CertifierConfig cfg = cfg_with_depth(2, eps, delta);
    TreeParams params = wire_parameters(cfg, 10);
    params.global_seed = s;
    ImplicitTree tree(f, params);
    const CertifyOutcome out = find_certificate(tree, x, cfg);
    if (is_bottom(out)) continue;
    ++accepted;
    const auto& c = std::get<Certificate>(out);
    EXPECT_LE(c.features.size(), 2U);
    if (exact_precision_error(t, x, c.features) <= 1.5 * eps) ++good;
  }
  ASSERT_GT(accepted, 0);
  EXPECT_GE(good, static_cast<int>(std::ceil((1 - 2 * delta) * accepted)));
}

TEST(Summarize, Histogram) {
  std::vector<CertifyOutcome> outs;
  Certificate a;
  a.features = Restriction({{0, kPos}});
  a.queries = 10;
  Certificate b;
  b.queries = 20;
  Bottom c;
  c.queries = 30;
  outs.emplace_back(a);
  outs.emplace_back(a);
  outs.emplace_back(b);
  outs.emplace_back(c);
  const BatchSummary s = summarize(outs, 100);
  EXPECT_EQ(s.instances, 4U);
  EXPECT_EQ(s.bottoms, 1U);
  EXPECT_DOUBLE_EQ(s.bottom_rate, 0.25);
  EXPECT_EQ(s.size_histogram.at(1), 2U);
  EXPECT_EQ(s.size_histogram.at(0), 1U);
  EXPECT_DOUBLE_EQ(s.mean_queries, 17.5);
}
