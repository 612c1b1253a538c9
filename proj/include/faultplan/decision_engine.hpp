#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "faultplan/decision.hpp"
#include "faultplan/risk.hpp"
#include "faultplan/scenario.hpp"

namespace faultplan {

/// Every feasible decision at the alarm: maintenance-first for each simple
/// route to a workshop that avoids the customer, then deliver-first for each
/// simple route to the customer. Within a kind, routes are ordered by
/// destination node, then node sequence. Throws NoDecisions.
std::vector<Decision> generate_decisions(const RiskEngine& engine);
std::vector<Decision> generate_decisions(const Scenario& scenario,
                                         const ModelOptions& options = {});

/// True when `a` is lower than `b` in both risks.
bool strictly_dominates(const RiskPoint& a, const RiskPoint& b);

/// Positions (0-based, ascending) of the points no other point strictly
/// dominates. O(n log n).
std::vector<std::size_t> pareto_front(std::span<const RiskPoint> points);

struct ParetoResult {
  std::vector<RiskPoint> points;
  std::vector<std::size_t> front;  ///< 0-based positions, ascending
  /// For each point off the front, a front member that strictly dominates it.
  std::vector<std::optional<std::size_t>> dominated_by;

  bool on_front(std::size_t position) const;
};

ParetoResult pareto_analysis(std::vector<RiskPoint> points);

/// Signed percentage change of each point against `points[baseline]`. A
/// component is empty when the baseline's value for it is zero.
struct ChangeRate {
  std::optional<double> public_time_loss_pct;
  std::optional<double> mission_delay_pct;
};
std::vector<ChangeRate> change_rates(std::span<const RiskPoint> points, std::size_t baseline);

struct Evaluation {
  std::vector<Decision> decisions;
  ParetoResult pareto;  ///< points[k] belongs to decisions[k]
};

/// Generates and evaluates every decision, in parallel, gathered in order.
Evaluation evaluate_scenario(const Scenario& scenario, const ModelOptions& options = {});
Evaluation evaluate_scenario(const RiskEngine& engine);

struct SweepOptions {
  double spacing_km = 5.0;
  /// Cases to run, 1-based. Empty: every case that fits before the last
  /// link of the planned route.
  std::vector<int> cases;
  double deadline_speed_kmh = 100.0;
  double deadline_slack_h = 0.5;
  double mean_margin_km = 50.0;
};

struct SweepCase {
  int z = 0;
  Scenario scenario;
  Evaluation evaluation;
  /// RS1 / RS2 over front members with RS2 > 0; positions refer to
  /// evaluation.decisions.
  std::optional<double> min_ratio;
  std::optional<double> max_ratio;
  std::optional<std::size_t> min_ratio_position;
  std::optional<std::size_t> max_ratio_position;
  std::size_t infinite_ratios = 0;  ///< front members with RS2 = 0
};

/// Number of sweep cases the base scenario's planned route admits.
int sweep_case_count(const Scenario& base, const SweepOptions& options = {});

/// The base scenario with the alarm moved z * spacing km along the planned
/// route, and the deadline and mean breakdown distance set from the distance
/// left to the customer. Throws ValidationError without a planned route and
/// OutOfRange when z is not a valid case.
Scenario sweep_case_scenario(const Scenario& base, int z, const SweepOptions& options = {});

/// Cases run concurrently; results are ordered by case.
std::vector<SweepCase> sweep_alarm_locations(const Scenario& base,
                                             const SweepOptions& sweep = {},
                                             const ModelOptions& options = {});

}  // namespace faultplan
