#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "faultplan/congestion.hpp"
#include "faultplan/decision.hpp"
#include "faultplan/delay.hpp"
#include "faultplan/scenario.hpp"
#include "faultplan/tow.hpp"

namespace faultplan {

struct ModelOptions {
  double quadrature_step_km = 1.0;    ///< widest quadrature cell
  double integration_step_min = 0.5;  ///< queue integrator step
  InflowReference inflow_reference = InflowReference::exit_fixed;
  std::size_t max_route_hops = 20;
  unsigned threads = 0;  ///< 0: one per hardware thread
};

/// One midpoint-rule cell: evaluate at s_km, weight by the cell's probability.
struct QuadratureCell {
  double s_km = 0.0;
  double weight = 0.0;
};

/// Cells no wider than step_km covering [a_km, b_km]; each weight is the
/// exact probability mass of its cell. Cells without mass are skipped.
std::vector<QuadratureCell> quadrature_cells(const BreakdownDistribution& dist, double a_km,
                                             double b_km, double step_km);

/// Expected costs of one decision.
struct RiskPoint {
  double public_time_loss_vehh = 0.0;
  double mission_delay_h = 0.0;

  bool operator==(const RiskPoint&) const = default;
};

enum class SamplingScheme {
  independent,  ///< plain iid draws
  stratified,   ///< one draw per equal-probability stratum
};

struct MonteCarloResult {
  RiskPoint mean;
  RiskPoint standard_error;  ///< iid estimate; conservative when stratified
  std::size_t samples = 0;
};

/// Expected public time loss and mission delay over the breakdown distance
/// distribution, by composite midpoint quadrature.
class RiskEngine {
 public:
  explicit RiskEngine(Scenario scenario, ModelOptions options = {});

  const Scenario& scenario() const { return planner_.scenario(); }
  const ModelOptions& options() const { return options_; }
  const TowPlanner& planner() const { return planner_; }

  /// Loss if the vehicle breaks down after s_km; zero once it is maintained.
  double public_time_loss(const Decision& decision, double s_km) const;
  DelayOutcome mission_delay(const Decision& decision, double s_km) const;

  RiskPoint evaluate(const Decision& decision) const;

  /// For a first leg that ends at the customer: the customer-to-workshop
  /// route with the least expected public time loss on that leg. Ties go to
  /// the lexicographically smallest route. Throws NoDecisions when no
  /// workshop can be reached.
  Route select_post_delivery_route(const Route& first) const;

  MonteCarloResult monte_carlo(const Decision& decision, std::size_t samples, std::uint64_t seed,
                               SamplingScheme scheme = SamplingScheme::stratified) const;

 private:
  double loss_at(const BreakdownEvent& event) const;
  double loss_at(const DrivePath& drive, double s_km) const;

  TowPlanner planner_;
  ModelOptions options_;
};

RiskPoint evaluate_risk(const Scenario& scenario, const Decision& decision,
                        const ModelOptions& options = {});

}  // namespace faultplan
