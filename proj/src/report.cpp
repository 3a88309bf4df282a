#include "implicert/report.hpp"

#include <sstream>

namespace implicert {

Json to_json(const Restriction& r) {
  Json arr = Json::array();
  for (const auto& lit : r.literals()) arr.push_back({{"feature", lit.feature}, {"value", static_cast<int>(lit.value)}});
  return arr;
}

Json to_json(const TreeParams& p) {
  return {{"depth_budget", p.depth_budget},
          {"score_tolerance", p.score_tolerance},
          {"noise_rate", p.noise_rate},
          {"global_seed", p.global_seed},
          {"score_mode", to_string(p.score_mode)},
          {"prune_constant", p.prune_constant},
          {"node_confidence", p.node_confidence}};
}

Json to_json(const CertifyOutcome& outcome) {
  if (const auto* c = std::get_if<Certificate>(&outcome)) {
    return {{"instance", c->instance.to_bitstring()},
            {"verdict", "accepted"},
            {"size", c->features.size()},
            {"features", to_json(c->features)},
            {"empirical_error", c->error_estimate},
            {"verification_samples", c->verification_samples},
            {"queries", c->queries}};
  }
  const auto& b = std::get<Bottom>(outcome);
  return {{"instance", b.instance.to_bitstring()},
          {"verdict", "bottom"},
          {"reason", b.reason},
          {"rejected_features", to_json(b.rejected)},
          {"empirical_error", b.error_estimate},
          {"verification_samples", b.verification_samples},
          {"queries", b.queries}};
}

Json to_json(const BatchSummary& s) {
  Json hist = Json::object();
  for (const auto& [size, count] : s.size_histogram) hist[std::to_string(size)] = count;
  return {{"instances", s.instances},     {"bottoms", s.bottoms},
          {"bottom_rate", s.bottom_rate}, {"size_histogram", hist},
          {"mean_queries", s.mean_queries}, {"total_queries", s.total_queries}};
}

Json to_json(const BaselineResult& r) {
  return {{"size", r.features.size()}, {"features", to_json(r.features)}, {"error", r.error}, {"queries", r.queries}};
}

Json to_json(const ParityBenchRow& row) {
  return {{"d", row.dimension},
          {"seeds", row.seeds},
          {"instances", row.instances},
          {"exact_certificate_complexity", row.exact_certificate_complexity},
          {"implicit",
           {{"mean_size", row.implicit_mean_size},
            {"bottom_rate", row.implicit_bottom_rate},
            {"match_rate", row.implicit_match_rate},
            {"seed_success_rate", row.implicit_seed_success_rate},
            {"max_exact_error", row.implicit_max_exact_error},
            {"mean_queries", row.implicit_mean_queries}}},
          {"baseline",
           {{"mean_size", row.baseline_mean_size},
            {"min_size", row.baseline_min_size},
            {"max_size", row.baseline_max_size},
            {"max_exact_error", row.baseline_max_exact_error},
            {"mean_queries", row.baseline_mean_queries}}}};
}

Json make_report(const Json& job, const Json& results, std::uint64_t seed, std::uint64_t queries, double wall_time_ms) {
  return {{"schema_version", kSchemaVersion},
          {"tool", kToolName},
          {"version", IMPLICERT_VERSION},
          {"seed", seed},
          {"job", job},
          {"results", results},
          {"queries", queries},
          {"wall_time_ms", wall_time_ms}};
}

std::string parity_bench_csv(const std::vector<ParityBenchRow>& rows) {
  std::ostringstream out;
  out << "d,seeds,instances,exact_C,implicit_mean_size,implicit_bottom_rate,implicit_match_rate,"
         "implicit_seed_success_rate,implicit_max_exact_error,implicit_mean_queries,"
         "baseline_mean_size,baseline_min_size,baseline_max_size,baseline_max_exact_error,baseline_mean_queries\n";
  for (const auto& r : rows) {
    out << r.dimension << ',' << r.seeds << ',' << r.instances << ',' << r.exact_certificate_complexity << ','
        << r.implicit_mean_size << ',' << r.implicit_bottom_rate << ',' << r.implicit_match_rate << ','
        << r.implicit_seed_success_rate << ',' << r.implicit_max_exact_error << ',' << r.implicit_mean_queries << ','
        << r.baseline_mean_size << ',' << r.baseline_min_size << ',' << r.baseline_max_size << ','
        << r.baseline_max_exact_error << ',' << r.baseline_mean_queries << '\n';
  }
  return out.str();
}

}  // namespace implicert
