#include "implicert/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace implicert {

void EstimatorConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("estimator needs at least one sample");
  if (!(noise_rate > 0.0 && noise_rate <= 1.0)) throw std::invalid_argument("noise rate must lie in (0, 1]");
}

void perturb(std::span<const Sign> x, double p, CounterRng& rng, std::span<Sign> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    Sign v = x[i];
    if (p > 0.0 && rng.bernoulli(p)) v = rng.sign();
    out[i] = v;
  }
}

Instance perturb(const Instance& x, double p, CounterRng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise rate must lie in [0, 1]");
  std::vector<Sign> out(x.bits().size());
  perturb(x.bits(), p, rng, out);
  return Instance(std::move(out));
}

namespace {

void uniform_fill(std::span<Sign> out, CounterRng& rng) {
  for (auto& v : out) v = rng.sign();
}

}  // namespace

EstimateReport estimate_noise_sensitivity(const BlackboxModel& f, const EstimatorConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  CounterRng rng(cfg.seed, stream);
  const auto d = static_cast<std::size_t>(f.dimension());
  std::vector<Sign> x(d), y(d);
  std::uint64_t disagree = 0;
  for (std::uint64_t s = 0; s < cfg.samples; ++s) {
    uniform_fill(x, rng);
    perturb(x, cfg.noise_rate, rng, y);
    if (f.query(x) != f.query(y)) ++disagree;
  }
  return {static_cast<double>(disagree) / static_cast<double>(cfg.samples), cfg.samples, 2 * cfg.samples};
}

EstimateReport estimate_score(const ModelPtr& f, int feature, const EstimatorConfig& cfg) {
  const int features[] = {feature};
  return estimate_scores(f, features, cfg, 1).front();
}

std::vector<EstimateReport> estimate_scores(const ModelPtr& f, std::span<const int> features,
                                            const EstimatorConfig& cfg, int threads) {
  cfg.validate();
  for (int i : features) {
    if (i < 0 || i >= f->dimension()) throw std::out_of_range("feature index out of range");
  }
  const EstimateReport parent = estimate_noise_sensitivity(*f, cfg, kNoiseStream);

  std::vector<EstimateReport> out(features.size());
  auto work = [&](std::size_t k) {
    const int i = features[k];
    double child_sum = 0.0;
    std::uint64_t queries = parent.queries;
    for (Sign b : {kNeg, kPos}) {
      auto child = restrict(f, Restriction({{i, b}}));
      auto r = estimate_noise_sensitivity(*child, cfg, child_stream(i, b));
      child_sum += r.estimate;
      queries += r.queries;
    }
    out[k] = {parent.estimate - 0.5 * child_sum, cfg.samples, queries};
  };

  const std::size_t n = features.size();
  const std::size_t workers = std::min<std::size_t>(threads > 1 ? static_cast<std::size_t>(threads) : 1, n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) work(k);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < n; k += workers) work(k);
    });
  }
  pool.clear();
  return out;
}

EstimateReport estimate_precision_error(const BlackboxModel& f, const Instance& x, const Restriction& certificate,
                                        const EstimatorConfig& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("estimator needs at least one sample");
  if (x.dimension() != f.dimension()) throw std::invalid_argument("instance dimension does not match model");
  if (!certificate.agrees_with(x)) throw std::invalid_argument("certificate disagrees with the instance");
  CounterRng rng(cfg.seed, kPrecisionStream);
  const Sign label = f.query(x);
  std::vector<Sign> y(static_cast<std::size_t>(f.dimension()));
  std::uint64_t disagree = 0;
  for (std::uint64_t s = 0; s < cfg.samples; ++s) {
    uniform_fill(y, rng);
    certificate.apply(y);
    if (f.query(y) != label) ++disagree;
  }
  return {static_cast<double>(disagree) / static_cast<double>(cfg.samples), cfg.samples, cfg.samples + 1};
}

EstimateReport estimate_mean(const BlackboxModel& f, const EstimatorConfig& cfg, std::uint64_t stream) {
  if (cfg.samples < 1) throw std::invalid_argument("estimator needs at least one sample");
  CounterRng rng(cfg.seed, stream);
  std::vector<Sign> x(static_cast<std::size_t>(f.dimension()));
  std::int64_t sum = 0;
  for (std::uint64_t s = 0; s < cfg.samples; ++s) {
    uniform_fill(x, rng);
    sum += f.query(x);
  }
  return {static_cast<double>(sum) / static_cast<double>(cfg.samples), cfg.samples, cfg.samples};
}

std::uint64_t hoeffding_samples(double eta, double delta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("accuracy must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
  return static_cast<std::uint64_t>(std::ceil(std::log(2.0 / delta) / (2.0 * eta * eta)));
}

}  // namespace implicert
