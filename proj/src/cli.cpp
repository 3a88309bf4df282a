#include "implicert/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "implicert/baseline.hpp"
#include "implicert/bench.hpp"
#include "implicert/certifier.hpp"
#include "implicert/estimators.hpp"
#include "implicert/exact_oracles.hpp"
#include "implicert/report.hpp"
#include "implicert/rng.hpp"

namespace implicert {

namespace {

struct Options {
  std::string model;
  std::string instance;
  std::string instances_file;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<int> depth;
  std::optional<double> p;
  std::optional<double> eta;
  std::optional<std::uint64_t> seed;
  std::string mode = "mc";
  std::optional<double> d_bound;
  bool baseline = false;
  bool prune = false;
  int threads = 1;
  std::string out;
  std::string format = "json";

  std::string quantity;
  std::optional<int> feature;
  std::string features;
  std::string alpha;

  std::string bench_name;
  std::string dims = "6,8,10";
  int seeds = 1;
  std::uint64_t baseline_samples = 0;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ScoreMode parse_mode(const std::string& m) { return m == "exact" ? ScoreMode::ExactOracle : ScoreMode::MonteCarlo; }

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("IMPLICERT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("IMPLICERT_SEED is not an unsigned integer");
    }
  }
  return 0;
}

ModelExpr load_model(const std::string& source) {
  if (source.empty()) throw UsageError("--model is required");
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    std::ifstream in(source);
    if (!in) throw UsageError("cannot read model file '" + source + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
  }
  if (source.find('(') != std::string::npos || source.rfind('x', 0) == 0) return parse_model(source);
  throw UsageError("model file '" + source + "' not found");
}

Instance load_instance(const std::string& text, int d) {
  if (text.empty()) throw UsageError("--instance is required");
  Instance x = Instance::from_bitstring(text);
  if (x.dimension() != d) {
    throw UsageError("instance has " + std::to_string(x.dimension()) + " bits, model dimension is " +
                     std::to_string(d));
  }
  return x;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item[0] == 'x') item.erase(0, 1);
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("malformed ") + what + " '" + item + "'");
    }
  }
  return out;
}

std::shared_ptr<const TruthTable> table_for(const ModelExpr& expr) {
  if (expr.dimension() > kMaxTableDimension) {
    throw UsageError("exact mode needs a truth table; dimension " + std::to_string(expr.dimension()) +
                     " exceeds the cap of 20");
  }
  return std::make_shared<const TruthTable>(TruthTable::from_expr(expr));
}

Json job_echo(const std::string& command, const Options& o, const std::optional<ModelExpr>& expr, std::uint64_t seed) {
  Json job{{"command", command}};
  if (expr) job["model"] = print_model(*expr);
  if (!o.instance.empty()) job["instance"] = o.instance;
  if (!o.instances_file.empty()) job["instances_file"] = o.instances_file;
  if (o.epsilon) job["epsilon"] = *o.epsilon;
  if (o.delta) job["delta"] = *o.delta;
  if (o.depth) job["depth"] = *o.depth;
  if (o.p) job["p"] = *o.p;
  if (o.eta) job["eta"] = *o.eta;
  if (o.d_bound) job["d_bound"] = *o.d_bound;
  job["mode"] = o.mode;
  job["seed"] = seed;
  job["baseline"] = o.baseline;
  job["prune"] = o.prune;
  job["threads"] = o.threads;
  if (!o.quantity.empty()) job["quantity"] = o.quantity;
  if (o.feature) job["feature"] = *o.feature;
  if (!o.features.empty()) job["features"] = o.features;
  if (!o.alpha.empty()) job["alpha"] = o.alpha;
  if (!o.bench_name.empty()) {
    job["bench"] = o.bench_name;
    job["dims"] = o.dims;
    job["seeds"] = o.seeds;
    job["baseline_samples"] = o.baseline_samples;
  }
  return job;
}

struct Wiring {
  CertifierConfig certifier;
  TreeParams params;
};

Wiring wire(const Options& o, int d, std::uint64_t seed) {
  Wiring w;
  w.certifier.epsilon = o.epsilon.value_or(0.1);
  w.certifier.delta = o.delta.value_or(0.1);
  w.certifier.depth_budget = o.depth;
  w.certifier.d_bound = o.d_bound;
  if (!o.depth && !o.d_bound) throw UsageError("certification needs --depth or --d-bound");
  w.params = wire_parameters(w.certifier, d);
  if (o.p) w.params.noise_rate = *o.p;
  if (o.eta) w.params.score_tolerance = *o.eta;
  w.params.score_mode = parse_mode(o.mode);
  w.params.prune_constant = o.prune;
  w.params.global_seed = seed;
  w.params.validate(d);
  return w;
}

struct Output {
  Json results;
  std::uint64_t queries = 0;
  std::string csv;  // set when the command has a tabular form
};

Output cmd_certify(const Options& o, const ModelExpr& expr, std::uint64_t seed) {
  auto f = make_model(expr);
  const Instance x = load_instance(o.instance, expr.dimension());
  const Wiring w = wire(o, expr.dimension(), seed);
  std::shared_ptr<const TruthTable> table;
  if (w.params.score_mode == ScoreMode::ExactOracle || o.baseline) table = table_for(expr);
  ImplicitTree tree(f, w.params, table, o.threads);
  const CertifyOutcome outcome = find_certificate(tree, x, w.certifier);

  Output out;
  out.results = {{"epsilon", w.certifier.epsilon},
                 {"delta", w.certifier.delta},
                 {"params", to_json(w.params)},
                 {"certificate", to_json(outcome)}};
  if (o.baseline) {
    BaselineConfig b;
    b.epsilon = w.certifier.epsilon;
    b.precision_mode = w.params.score_mode;
    b.samples = verification_samples(w.certifier.epsilon, w.certifier.delta);
    b.seed = seed;
    out.results["baseline"] = to_json(greedy_precision_certificate(f, x, b, table.get()));
  }
  out.queries = f->queries();
  return out;
}

std::vector<Instance> load_instances(const Options& o, int d) {
  std::vector<Instance> xs;
  if (!o.instances_file.empty()) {
    std::ifstream in(o.instances_file);
    if (!in) throw UsageError("cannot read instances file '" + o.instances_file + "'");
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      xs.push_back(load_instance(line, d));
    }
    return xs;
  }
  if (!o.instance.empty()) return {load_instance(o.instance, d)};
  if (d > 16) throw UsageError("enumerating all instances needs d <= 16; pass --instances");
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << d); ++c) xs.push_back(Instance::from_code(d, c));
  return xs;
}

std::string features_cell(const Restriction& r) {
  std::string s;
  for (const auto& lit : r.literals()) {
    if (!s.empty()) s += ';';
    s += 'x' + std::to_string(lit.feature);
  }
  return s;
}

Output cmd_certify_batch(const Options& o, const ModelExpr& expr, std::uint64_t seed) {
  auto f = make_model(expr);
  const auto xs = load_instances(o, expr.dimension());
  const Wiring w = wire(o, expr.dimension(), seed);
  std::shared_ptr<const TruthTable> table;
  if (w.params.score_mode == ScoreMode::ExactOracle) table = table_for(expr);
  ImplicitTree tree(f, w.params, table, 1);
  const BatchResult batch = certify_batch(tree, xs, w.certifier, o.threads);

  Output out;
  Json items = Json::array();
  std::ostringstream csv;
  csv << "instance,verdict,size,features,empirical_error,queries\n";
  for (const auto& outcome : batch.outcomes) {
    items.push_back(to_json(outcome));
    const auto& feats = outcome_features(outcome);
    const double err = std::visit([](const auto& v) { return v.error_estimate; }, outcome);
    const std::string inst = std::visit([](const auto& v) { return v.instance.to_bitstring(); }, outcome);
    csv << inst << ',' << (is_bottom(outcome) ? "bottom" : "accepted") << ',' << feats.size() << ','
        << features_cell(feats) << ',' << err << ',' << outcome_queries(outcome) << '\n';
  }
  out.results = {{"epsilon", w.certifier.epsilon},
                 {"delta", w.certifier.delta},
                 {"params", to_json(w.params)},
                 {"summary", to_json(batch.summary)},
                 {"outcomes", items}};
  out.queries = f->queries();
  out.csv = csv.str();
  return out;
}

Json greedy_tree_json(const GreedyTree& tree, int at) {
  const auto& node = tree.nodes[static_cast<std::size_t>(at)];
  if (node.feature < 0) return {{"leaf", static_cast<int>(node.label)}};
  return {{"feature", node.feature},
          {"neg", greedy_tree_json(tree, node.child[0])},
          {"pos", greedy_tree_json(tree, node.child[1])}};
}

Output cmd_oracle(const Options& o, const ModelExpr& expr) {
  const auto table = table_for(expr);
  const int d = expr.dimension();
  const double eps = o.epsilon.value_or(0.0);
  const double p = o.p.value_or(0.1);
  Json value;
  const std::string& q = o.quantity;
  if (q == "ns") {
    value = exact_noise_sensitivity(*table, p);
  } else if (q == "score") {
    if (!o.feature) throw UsageError("oracle score needs --feature");
    value = exact_score(*table, *o.feature, p);
  } else if (q == "precision") {
    const Instance x = load_instance(o.instance, d);
    const auto feats = parse_int_list(o.features, "feature index");
    value = exact_precision_error(*table, x, Restriction::from_instance(x, feats));
  } else if (q == "cert-complexity") {
    value = exact_certificate_complexity(*table, load_instance(o.instance, d), eps);
  } else if (q == "avg-cert-complexity") {
    value = exact_avg_certificate_complexity(*table, eps);
  } else if (q == "dt-complexity") {
    value = exact_dt_complexity(*table, eps);
  } else if (q == "greedy-tree") {
    if (!o.alpha.empty()) {
      value = exact_greedy_tree_query(*table, Restriction::parse(o.alpha), p);
    } else {
      const GreedyTree tree = materialize_greedy_tree(*table, p, o.depth.value_or(std::min(d, 3)));
      value = greedy_tree_json(tree, 0);
    }
  } else {
    throw UsageError("unknown oracle quantity '" + q + "'");
  }
  Output out;
  out.results = {{"quantity", q}, {"value", value}};
  return out;
}

Output cmd_bench(const Options& o, std::uint64_t seed) {
  if (o.bench_name != "parity") throw UsageError("unknown benchmark '" + o.bench_name + "'");
  ParityBenchConfig cfg;
  cfg.dims = parse_int_list(o.dims, "dimension");
  cfg.mode = parse_mode(o.mode);
  cfg.seeds = o.seeds;
  cfg.base_seed = seed;
  cfg.epsilon = o.epsilon.value_or(0.1);
  cfg.delta = o.delta.value_or(0.1);
  cfg.depth = o.depth.value_or(2);
  if (o.p) cfg.noise_rate = o.p;
  cfg.score_tolerance = o.eta;
  cfg.baseline_samples = o.baseline_samples;
  cfg.threads = o.threads;
  const auto rows = run_parity_bench(cfg);
  Output out;
  Json table = Json::array();
  for (const auto& r : rows) table.push_back(to_json(r));
  out.results = {{"bench", "parity"},
                 {"epsilon", cfg.epsilon},
                 {"delta", cfg.delta},
                 {"depth", cfg.depth},
                 {"noise_rate", *cfg.noise_rate},
                 {"rows", table}};
  out.csv = parity_bench_csv(rows);
  return out;
}

struct CheckModel {
  std::string name;
  ModelExpr expr;
};

Output cmd_selftest(std::uint64_t seed) {
  CounterRng rng(seed, 0x73656c66ULL);
  std::vector<Sign> random_labels(64);
  for (auto& s : random_labels) s = rng.sign();
  std::vector<CheckModel> models = {
      {"const", parse_model("(const +1) d=4")},
      {"dictator", parse_model("x1 d=4")},
      {"parity2", parse_model("(xor x1 x3) d=6")},
      {"or3", parse_model("(or x0 x1 x2) d=3")},
      {"maj3", parse_model("(maj x0 x2 x4) d=5")},
      {"random6", ModelExpr(expr::table(random_labels), 6)},
  };
  const double eta = 0.05;
  const std::uint64_t m = hoeffding_samples(eta, 1e-4);
  Json checks = Json::array();
  bool all_pass = true;
  std::uint64_t queries = 0;
  auto record = [&](const std::string& model, const std::string& what, double estimate, double exact, double tol) {
    const bool pass = std::abs(estimate - exact) <= tol;
    all_pass = all_pass && pass;
    checks.push_back({{"model", model}, {"quantity", what}, {"estimate", estimate}, {"exact", exact},
                      {"tolerance", tol}, {"pass", pass}});
  };
  std::uint64_t stream = 0;
  for (const auto& cm : models) {
    auto f = make_model(cm.expr);
    const TruthTable t = TruthTable::from_expr(cm.expr);
    for (double p : {0.1, 0.5}) {
      const EstimatorConfig cfg{m, derive_seed(seed, stream++), p};
      record(cm.name, "ns@" + std::to_string(p), estimate_noise_sensitivity(*f, cfg).estimate,
             exact_noise_sensitivity(t, p), eta);
      record(cm.name, "score0@" + std::to_string(p), estimate_score(f, 0, cfg).estimate, exact_score(t, 0, p),
             2 * eta);
    }
    const EstimatorConfig cfg{m, derive_seed(seed, stream++), 0.5};
    record(cm.name, "mean", estimate_mean(*f, cfg).estimate, t.mean(), 2 * eta);
    const Instance x = Instance::filled(cm.expr.dimension(), kPos);
    const Restriction c({{0, kPos}});
    record(cm.name, "precision{x0}", estimate_precision_error(*f, x, c, cfg).estimate,
           exact_precision_error(t, x, c), eta);
    queries += f->queries();
  }
  Output out;
  out.results = {{"samples", m}, {"all_pass", all_pass}, {"checks", checks}};
  out.queries = queries;
  if (!all_pass) out.results["failure"] = "estimator outside tolerance";
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Query-access certificates for blackbox Boolean classifiers", "implicert"};
  app.require_subcommand(1);
  Options o;

  auto* certify = app.add_subcommand("certify", "Find a certificate for one instance");
  auto* batch = app.add_subcommand("certify-batch", "Certify many instances against one shared tree");
  auto* oracle = app.add_subcommand("oracle", "Exact brute-force quantities at small dimension");
  auto* bench = app.add_subcommand("bench", "Benchmarks (parity)");
  auto* selftest = app.add_subcommand("selftest", "Cross-check estimators against exact oracles");

  oracle->add_option("quantity", o.quantity,
                     "ns | score | precision | cert-complexity | avg-cert-complexity | dt-complexity | greedy-tree")
      ->required();
  bench->add_option("name", o.bench_name, "benchmark name (parity)")->required();

  for (CLI::App* sub : {certify, batch, oracle, bench, selftest}) {
    sub->add_option("--model", o.model, "model DSL file or inline text");
    sub->add_option("--instance", o.instance, "instance as a 0/1 string, index 0 leftmost");
    sub->add_option("--instances", o.instances_file, "file with one instance per line");
    sub->add_option("--epsilon", o.epsilon, "precision parameter");
    sub->add_option("--delta", o.delta, "confidence parameter");
    sub->add_option("--depth", o.depth, "depth budget k");
    sub->add_option("--p", o.p, "noise rate");
    sub->add_option("--eta", o.eta, "score tolerance");
    sub->add_option("--seed", o.seed, "global seed (falls back to IMPLICERT_SEED)");
    sub->add_option("--mode", o.mode, "score mode")->check(CLI::IsMember({"mc", "exact"}));
    sub->add_option("--d-bound", o.d_bound, "bound on decision-tree complexity");
    sub->add_flag("--baseline", o.baseline, "also run the greedy precision baseline");
    sub->add_flag("--prune", o.prune, "stop early on near-constant subfunctions");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--feature", o.feature, "feature index (oracle score)");
    sub->add_option("--features", o.features, "comma-separated feature list (oracle precision)");
    sub->add_option("--alpha", o.alpha, "restriction such as x3=+1,x7=-1 (oracle greedy-tree)");
    sub->add_option("--dims", o.dims, "comma-separated dimension grid (bench)");
    sub->add_option("--seeds", o.seeds, "number of seeds (bench)");
    sub->add_option("--baseline-samples", o.baseline_samples, "samples per baseline precision estimate");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const std::uint64_t seed = resolve_seed(o);
    std::string command;
    std::optional<ModelExpr> expr;
    Output result;
    if (*selftest) {
      command = "selftest";
    } else if (*bench) {
      command = "bench";
    } else {
      expr = load_model(o.model);
      command = *certify ? "certify" : *batch ? "certify-batch" : "oracle";
    }
    const bool tabular = command == "bench" || command == "certify-batch";
    if (o.format == "csv" && !tabular) throw UsageError("csv output is only available for bench and certify-batch");

    if (command == "certify") {
      result = cmd_certify(o, *expr, seed);
    } else if (command == "certify-batch") {
      result = cmd_certify_batch(o, *expr, seed);
    } else if (command == "oracle") {
      result = cmd_oracle(o, *expr);
    } else if (command == "bench") {
      result = cmd_bench(o, seed);
    } else {
      result = cmd_selftest(seed);
    }

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::string text;
    if (o.format == "csv") {
      text = result.csv;
    } else {
      text = make_report(job_echo(command, o, expr, seed), result.results, seed, result.queries, wall_ms).dump(2) + "\n";
    }
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out);
      if (!file) throw UsageError("cannot write '" + o.out + "'");
      file << text;
    }
    if (command == "selftest" && !result.results.value("all_pass", false)) {
      err << "selftest: estimator outside tolerance\n";
      return kExitInternal;
    }
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: model: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace implicert
