#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "implicert/baseline.hpp"
#include "implicert/bench.hpp"
#include "implicert/certifier.hpp"
#include "implicert/implicit_tree.hpp"

namespace implicert {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolName = "implicert";

Json to_json(const Restriction& r);
Json to_json(const TreeParams& p);
Json to_json(const CertifyOutcome& outcome);
Json to_json(const BatchSummary& s);
Json to_json(const BaselineResult& r);
Json to_json(const ParityBenchRow& row);

/// {schema_version, tool, version, seed, job, results, queries, wall_time_ms}.
/// Everything except wall_time_ms is a function of the job alone.
Json make_report(const Json& job, const Json& results, std::uint64_t seed, std::uint64_t queries, double wall_time_ms);

std::string parity_bench_csv(const std::vector<ParityBenchRow>& rows);

}  // namespace implicert
