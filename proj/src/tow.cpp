#include "faultplan/tow.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "faultplan/error.hpp"

namespace faultplan {

namespace {

constexpr double kTieHours = 1e-9;

}  // namespace

TowPlanner::TowPlanner(Scenario scenario)
    : scenario_(std::move(scenario)),
      free_flow_(scenario_.network, TravelView::free_flow),
      towing_(scenario_.network, TravelView::towing) {}

TowPlan TowPlanner::plan(const NetworkPosition& breakdown) const {
  const RoadNetwork& net = scenario_.network;
  const Link& link = net.link(breakdown.from, breakdown.to);
  const double remainder_km = link.length_km - breakdown.offset_km;

  TowPlan best;
  double best_total = std::numeric_limits<double>::infinity();
  for (NodeId workshop : net.workshops()) {
    const PathResult* approach = free_flow_.find(workshop, breakdown.from);
    const PathResult* tow = towing_.find(breakdown.to, workshop);
    if (approach == nullptr || tow == nullptr) continue;
    const double reach = approach->hours + link.hours(TravelView::free_flow, breakdown.offset_km);
    const double towing = link.hours(TravelView::towing, remainder_km) + tow->hours;
    // Workshops are visited in ascending id, so a tie keeps the smaller id.
    if (reach + towing < best_total - kTieHours) {
      best_total = reach + towing;
      best.workshop = workshop;
      best.reach_h = reach;
      best.tow_route = tow->route;
      best.tow_h = towing;
    }
  }
  if (!std::isfinite(best_total)) {
    std::ostringstream msg;
    msg << "no workshop can reach and tow from link (" << breakdown.from << "," << breakdown.to
        << ")";
    throw NoWorkshopReachable(msg.str());
  }

  // Walk the tow until the road type changes.
  best.road_type = link.road_type;
  best.exit_km = remainder_km;
  best.exit_tow_h = link.hours(TravelView::towing, remainder_km);
  best.exit_free_flow_h = link.hours(TravelView::free_flow, remainder_km);
  const auto& nodes = best.tow_route.nodes;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const Link& next = net.link(nodes[k - 1], nodes[k]);
    if (next.road_type != link.road_type) break;
    best.exit_km += next.length_km;
    best.exit_tow_h += next.hours(TravelView::towing);
    best.exit_free_flow_h += next.hours(TravelView::free_flow);
  }
  return best;
}

EventTimeline TowPlanner::timeline(ClockTime breakdown_time, const TowPlan& plan) const {
  EventTimeline t;
  t.breakdown = breakdown_time;
  t.tow_start = breakdown_time.plus_hours(scenario_.tow_dispatch_delay_h + plan.reach_h);
  t.motorway_exit = t.tow_start.plus_hours(plan.exit_tow_h);
  t.workshop_arrival = t.tow_start.plus_hours(plan.tow_h);
  return t;
}

DrivePath TowPlanner::pre_maintenance_drive(const Decision& decision) const {
  return DrivePath(scenario_.network, scenario_.alarm.location, decision.pre_maintenance_route());
}

BreakdownEvent TowPlanner::breakdown_along(const DrivePath& drive, double s_km) const {
  if (!(s_km >= 0.0) || !(s_km < drive.length_km())) {
    std::ostringstream msg;
    msg << "breakdown distance " << s_km << " km is outside the pre-maintenance drive of "
        << drive.length_km() << " km";
    throw OutOfRange(msg.str());
  }
  BreakdownEvent event;
  event.s_km = s_km;
  event.position = drive.position_at(s_km);
  event.tow = plan(event.position);
  event.timeline =
      timeline(scenario_.alarm.time.plus_hours(drive.free_flow_hours_to(s_km)), event.tow);
  return event;
}

BreakdownEvent TowPlanner::breakdown_along(const Decision& decision, double s_km) const {
  return breakdown_along(pre_maintenance_drive(decision), s_km);
}

TowPlan plan_worst_case_tow(const Scenario& scenario, const NetworkPosition& breakdown) {
  return TowPlanner(scenario).plan(breakdown);
}

EventTimeline event_timeline(const Scenario& scenario, const Decision& decision, double s_km) {
  return TowPlanner(scenario).breakdown_along(decision, s_km).timeline;
}

}  // namespace faultplan
