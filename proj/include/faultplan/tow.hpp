#pragma once

#include "faultplan/clock.hpp"
#include "faultplan/decision.hpp"
#include "faultplan/network.hpp"
#include "faultplan/scenario.hpp"

namespace faultplan {

/// Worst-case towing response to a breakdown: the workshop that gets the
/// vehicle off the road and into maintenance soonest.
struct TowPlan {
  NodeId workshop = 0;
  double reach_h = 0.0;  ///< tow truck, workshop to breakdown, free flow
  /// Downstream node of the breakdown link to the workshop. The tow first
  /// finishes the breakdown link, it never reverses mid-link.
  Route tow_route;
  double tow_h = 0.0;  ///< breakdown to workshop at towing speed
  RoadType road_type = RoadType::motorway;  ///< road type at the breakdown
  /// Distance until the tow leaves the breakdown's road type (for a motorway
  /// breakdown: the motorway exit), or the whole tow if it never does.
  double exit_km = 0.0;
  double exit_tow_h = 0.0;        ///< towing time over exit_km
  double exit_free_flow_h = 0.0;  ///< free-flow time over exit_km
};

struct EventTimeline {
  ClockTime breakdown;
  ClockTime tow_start;
  ClockTime motorway_exit;
  ClockTime workshop_arrival;
};

struct BreakdownEvent {
  double s_km = 0.0;
  NetworkPosition position;
  TowPlan tow;
  EventTimeline timeline;
};

/// Plans tows on one scenario. Shortest paths for both travel views are
/// computed once at construction; the object is read-only afterwards.
class TowPlanner {
 public:
  explicit TowPlanner(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const PathTable& free_flow_paths() const { return free_flow_; }
  const PathTable& towing_paths() const { return towing_; }

  /// Throws NoWorkshopReachable.
  TowPlan plan(const NetworkPosition& breakdown) const;
  EventTimeline timeline(ClockTime breakdown_time, const TowPlan& plan) const;

  /// Breakdown after driving s_km along the decision's pre-maintenance route.
  /// Throws OutOfRange unless 0 <= s_km < pre-maintenance distance.
  BreakdownEvent breakdown_along(const Decision& decision, double s_km) const;
  BreakdownEvent breakdown_along(const DrivePath& drive, double s_km) const;

  DrivePath pre_maintenance_drive(const Decision& decision) const;

 private:
  Scenario scenario_;
  PathTable free_flow_;
  PathTable towing_;
};

TowPlan plan_worst_case_tow(const Scenario& scenario, const NetworkPosition& breakdown);
EventTimeline event_timeline(const Scenario& scenario, const Decision& decision, double s_km);

}  // namespace faultplan
