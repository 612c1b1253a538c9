#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "faultplan/congestion.hpp"
#include "faultplan/decision_engine.hpp"
#include "faultplan/delay.hpp"
#include "faultplan/risk.hpp"
#include "faultplan/scenario.hpp"
#include "faultplan/tow.hpp"

namespace faultplan {

/// One table cell. Monostate is an empty / undefined value.
using Cell = std::variant<std::monostate, std::string, long long, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Identifies the tool and input in every output file.
struct Provenance {
  std::string tool_version;
  std::string scenario_id;
  std::string scenario_hash;
};

Provenance provenance_of(const Scenario& scenario);

/// "# faultplan <version> scenario=<id> hash=<hash>", a header row, then rows.
/// Doubles are printed with six decimals.
std::string to_csv(const Table& table, const Provenance& prov);
nlohmann::json to_json(const Table& table, const Provenance& prov);

std::string route_string(const Route& route);
/// {"clock": "HH:MM[:SS]", "hours": h}
nlohmann::json clock_json(ClockTime t);

Table decisions_table(const Evaluation& evaluation);
Table risks_table(const Evaluation& evaluation);
/// Change rates in percent against the decision with 1-based `baseline_index`.
Table change_rate_table(const Evaluation& evaluation, int baseline_index);
Table queue_trace_table(const QueueTrace& trace);
Table sweep_table(const std::vector<SweepCase>& cases);

nlohmann::json pareto_json(const Evaluation& evaluation, const Provenance& prov);

struct TraceResult {
  BreakdownEvent event;
  ExitReferenceTimes reference;
  QueueTrace queue;
  DelayOutcome delay;
};

nlohmann::json timeline_json(const TraceResult& trace, const Provenance& prov);

/// Everything one evaluation produced, plus the settings it ran with.
nlohmann::json run_report_json(const Evaluation& evaluation, const ModelOptions& options,
                               const Provenance& prov);

}  // namespace faultplan
