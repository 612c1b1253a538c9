#pragma once

#include "faultplan/clock.hpp"
#include "faultplan/decision.hpp"
#include "faultplan/tow.hpp"

namespace faultplan {

struct DelayOutcome {
  double delay_h = 0.0;  ///< lateness past the deadline, never negative
  bool breakdown = false;
  /// When the goods reach the customer.
  ClockTime arrival;
};

/// Delay when the vehicle can drive s_km more before breaking down. A value
/// beyond the pre-maintenance distance means no breakdown. Throws OutOfRange
/// for negative s_km.
DelayOutcome mission_delay(const TowPlanner& planner, const Decision& decision, double s_km);
DelayOutcome mission_delay(const Scenario& scenario, const Decision& decision, double s_km);

/// Delay for a breakdown before maintenance: towed to the event's workshop,
/// repaired there, then driven to the customer.
DelayOutcome delay_after_breakdown(const TowPlanner& planner, const BreakdownEvent& event);

/// Delay when the vehicle never breaks down.
DelayOutcome mission_delay_without_breakdown(const Scenario& scenario, const Decision& decision);

}  // namespace faultplan
