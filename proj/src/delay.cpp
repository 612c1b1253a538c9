#include "faultplan/delay.hpp"

#include <algorithm>

#include "faultplan/error.hpp"

namespace faultplan {

namespace {

double lateness(ClockTime arrival, ClockTime deadline) {
  return std::max(0.0, arrival.hours_since(deadline));
}

double drive_hours(const Scenario& scenario, const Route& route) {
  return route_travel_time(scenario.network, TravelView::free_flow, scenario.alarm.location,
                           route);
}

}  // namespace

DelayOutcome mission_delay_without_breakdown(const Scenario& scenario, const Decision& decision) {
  const RoadNetwork& net = scenario.network;
  DelayOutcome out;
  const ClockTime at_first_end = scenario.alarm.time.plus_hours(drive_hours(scenario, decision.first));
  if (decision.kind == DecisionKind::deliver_first) {
    out.arrival = at_first_end;
    return out;
  }
  const NodeId workshop = decision.first.back();
  out.arrival =
      at_first_end.plus_hours(scenario.maintenance_at(workshop).functioning_h +
                              net.hours(decision.second, TravelView::free_flow));
  out.delay_h = lateness(out.arrival, scenario.deadline);
  return out;
}

DelayOutcome mission_delay(const TowPlanner& planner, const Decision& decision, double s_km) {
  if (!(s_km >= 0.0)) throw OutOfRange("breakdown distance must be non-negative");
  const Scenario& scenario = planner.scenario();

  if (decision.kind == DecisionKind::deliver_first && s_km >= decision.first_km) {
    // Delivered before anything happened.
    DelayOutcome out = mission_delay_without_breakdown(scenario, decision);
    out.breakdown = s_km < decision.pre_maintenance_km();
    return out;
  }
  if (s_km >= decision.pre_maintenance_km()) {
    return mission_delay_without_breakdown(scenario, decision);
  }

  return delay_after_breakdown(planner, planner.breakdown_along(decision, s_km));
}

DelayOutcome delay_after_breakdown(const TowPlanner& planner, const BreakdownEvent& event) {
  const Scenario& scenario = planner.scenario();
  const NodeId workshop = event.tow.workshop;
  const double to_customer = planner.free_flow_paths().at(workshop, scenario.customer).hours;
  DelayOutcome out;
  out.breakdown = true;
  out.arrival = event.timeline.workshop_arrival.plus_hours(
      scenario.maintenance_at(workshop).broken_down_h + to_customer);
  out.delay_h = lateness(out.arrival, scenario.deadline);
  return out;
}

DelayOutcome mission_delay(const Scenario& scenario, const Decision& decision, double s_km) {
  return mission_delay(TowPlanner(scenario), decision, s_km);
}

}  // namespace faultplan
