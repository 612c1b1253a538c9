#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "faultplan/clock.hpp"
#include "faultplan/scenario.hpp"
#include "faultplan/tow.hpp"

namespace faultplan {

/// Which clock the inflow profile is read at.
enum class InflowReference {
  exit_fixed,    ///< the shifted time at the exit point (default)
  ego_position,  ///< the real time at which the vehicle is at that stage
};

std::string_view to_string(InflowReference ref);
/// Throws std::invalid_argument.
InflowReference inflow_reference_from_string(std::string_view text);

/// The three bottleneck boundaries, observed at the exit point: vehicles that
/// reach the exit are the ones that passed the breakdown one free-flow
/// travel time earlier.
struct ExitReferenceTimes {
  ClockTime breakdown;    ///< bottleneck at q_b begins
  ClockTime tow_start;    ///< q_t begins
  ClockTime tow_at_exit;  ///< tow leaves the road, capacity back to q_max
};

ExitReferenceTimes map_to_exit_reference(const EventTimeline& timeline, const TowPlan& tow);

struct BottleneckEpisode {
  ExitReferenceTimes times;
  Capacities capacities;
  /// Inflow in veh/h at a reference time.
  std::function<double(ClockTime)> inflow;
};

BottleneckEpisode make_episode(const Scenario& scenario, const BreakdownEvent& event,
                               InflowReference reference = InflowReference::exit_fixed);

struct QueueSample {
  ClockTime t;
  double queue_veh = 0.0;
  double inflow_vph = 0.0;
  double capacity_vph = 0.0;
  double outflow_vph = 0.0;
  double cumulative_in_veh = 0.0;
  double cumulative_out_veh = 0.0;
};

struct QueueTrace {
  std::vector<QueueSample> samples;
  ClockTime dissipation;
  double total_loss_vehh = 0.0;
  double peak_queue_veh = 0.0;
};

/// Integrates the point queue with fixed steps of `step_min` minutes, split at
/// the capacity changes. Throws NonDissipating when the queue is still there
/// a day after the tow has left.
QueueTrace queue_trace(const BottleneckEpisode& episode, double step_min = 0.5);
/// Total delay to the public, veh*h. Same integration, no samples kept.
double public_time_loss(const BottleneckEpisode& episode, double step_min = 0.5);

struct ClosedFormQueue {
  double queue_at_tow_start_veh = 0.0;
  double queue_at_exit_veh = 0.0;
  ClockTime dissipation;
  double total_loss_vehh = 0.0;
};

/// Exact solution for a constant inflow. Throws PreconditionViolated unless
/// q_b < inflow, q_t < inflow and inflow < q_max.
ClosedFormQueue closed_form_constant_inflow(const ExitReferenceTimes& times,
                                            const Capacities& capacities, double inflow_vph);

}  // namespace faultplan
