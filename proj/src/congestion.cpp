#include "faultplan/congestion.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include "faultplan/error.hpp"

namespace faultplan {

std::string_view to_string(InflowReference ref) {
  return ref == InflowReference::exit_fixed ? "exit_fixed" : "ego_position";
}

InflowReference inflow_reference_from_string(std::string_view text) {
  if (text == "exit_fixed") return InflowReference::exit_fixed;
  if (text == "ego_position") return InflowReference::ego_position;
  throw std::invalid_argument("unknown inflow reference '" + std::string(text) + "'");
}

ExitReferenceTimes map_to_exit_reference(const EventTimeline& timeline, const TowPlan& tow) {
  ExitReferenceTimes ref;
  ref.breakdown = timeline.breakdown.plus_hours(tow.exit_free_flow_h);
  ref.tow_start = timeline.tow_start.plus_hours(tow.exit_free_flow_h);
  ref.tow_at_exit = timeline.motorway_exit;
  return ref;
}

BottleneckEpisode make_episode(const Scenario& scenario, const BreakdownEvent& event,
                               InflowReference reference) {
  BottleneckEpisode episode;
  episode.times = map_to_exit_reference(event.timeline, event.tow);
  episode.capacities = scenario.capacities;

  const TrafficProfile* profile = scenario.traffic_for(event.tow.road_type);
  if (profile == nullptr) {
    episode.inflow = [](ClockTime) { return 0.0; };
    return episode;
  }
  if (reference == InflowReference::exit_fixed) {
    episode.inflow = [p = *profile](ClockTime t) { return p.inflow_at(t); };
    return episode;
  }

  // Reference time back to the real time the ego vehicle's stage happened,
  // piecewise linear through the three boundary pairs.
  const double ref[3] = {episode.times.breakdown.minutes(), episode.times.tow_start.minutes(),
                         episode.times.tow_at_exit.minutes()};
  const double real[3] = {event.timeline.breakdown.minutes(), event.timeline.tow_start.minutes(),
                          event.timeline.motorway_exit.minutes()};
  episode.inflow = [p = *profile, r0 = ref[0], r1 = ref[1], r2 = ref[2], e0 = real[0],
                    e1 = real[1], e2 = real[2]](ClockTime t) {
    const double m = t.minutes();
    double mapped;
    if (m <= r0) {
      mapped = m - (r0 - e0);
    } else if (m >= r2) {
      mapped = m - (r2 - e2);
    } else if (m <= r1) {
      mapped = r1 > r0 ? e0 + (m - r0) * (e1 - e0) / (r1 - r0) : e1;
    } else {
      mapped = e1 + (m - r1) * (e2 - e1) / (r2 - r1);
    }
    return p.inflow_at(ClockTime::from_minutes(mapped));
  };
  return episode;
}

namespace {

constexpr double kMaxTailHours = 24.0;

// Shared integrator. `on_sample` is called at every step boundary with the
// sample's fields filled in; pass a no-op to skip tracing.
template <class OnSample>
QueueTrace integrate(const BottleneckEpisode& episode, double step_min, OnSample&& on_sample) {
  if (!(step_min > 0.0)) throw ValidationError("integration step must be positive");
  const ClockTime origin = episode.times.breakdown;
  const double tt = episode.times.tow_start.hours_since(origin);
  const double tw = episode.times.tow_at_exit.hours_since(origin);
  const Capacities& cap = episode.capacities;
  const double h = step_min / 60.0;

  auto capacity_at = [&](double t) { return t < tt ? cap.q_b : (t < tw ? cap.q_t : cap.q_max); };
  auto inflow = [&](double t) { return episode.inflow(origin.plus_hours(t)); };

  QueueTrace result;
  double t = 0.0;
  double eta = 0.0;
  double cum_in = 0.0;
  double q_now = inflow(0.0);

  auto emit = [&](double at, double q) {
    QueueSample s;
    s.t = origin.plus_hours(at);
    s.queue_veh = eta;
    s.inflow_vph = q;
    s.capacity_vph = capacity_at(at);
    s.outflow_vph = eta > 0.0 ? s.capacity_vph : std::min(q, s.capacity_vph);
    s.cumulative_in_veh = cum_in;
    s.cumulative_out_veh = cum_in - eta;
    on_sample(s);
  };
  emit(0.0, q_now);

  while (!(t >= tw && eta <= 0.0)) {
    if (t - tw > kMaxTailHours) {
      std::ostringstream msg;
      msg << "queue still " << eta << " veh " << kMaxTailHours
          << " h after the tow left the road";
      throw NonDissipating(msg.str());
    }
    double next = t + h;
    if (t < tt && next > tt) {
      next = tt;
    } else if (t < tw && next > tw) {
      next = tw;
    }
    const double dt = next - t;
    const double q_next = inflow(next);
    const double q_mean = 0.5 * (q_now + q_next);
    const double rate = q_mean - capacity_at(t);
    const double eta_next = eta + rate * dt;

    if (eta_next >= 0.0) {
      result.total_loss_vehh += 0.5 * (eta + eta_next) * dt;
      cum_in += q_mean * dt;
      eta = eta_next;
      t = next;
      q_now = q_next;
    } else {
      // The queue empties inside this step.
      const double tau = eta / -rate;
      result.total_loss_vehh += 0.5 * eta * tau;
      eta = 0.0;
      if (t >= tw) {
        cum_in += q_mean * tau;
        t += tau;
        q_now = inflow(t);
        result.peak_queue_veh = std::max(result.peak_queue_veh, eta);
        emit(t, q_now);
        break;
      }
      cum_in += q_mean * dt;
      t = next;
      q_now = q_next;
    }
    result.peak_queue_veh = std::max(result.peak_queue_veh, eta);
    emit(t, q_now);
  }
  result.dissipation = origin.plus_hours(std::max(t, tw));
  return result;
}

}  // namespace

QueueTrace queue_trace(const BottleneckEpisode& episode, double step_min) {
  std::vector<QueueSample> samples;
  QueueTrace result =
      integrate(episode, step_min, [&](const QueueSample& s) { samples.push_back(s); });
  result.samples = std::move(samples);
  return result;
}

double public_time_loss(const BottleneckEpisode& episode, double step_min) {
  return integrate(episode, step_min, [](const QueueSample&) {}).total_loss_vehh;
}

ClosedFormQueue closed_form_constant_inflow(const ExitReferenceTimes& times,
                                            const Capacities& c, double q) {
  if (!(c.q_b < q && c.q_t < q && q < c.q_max)) {
    throw PreconditionViolated("closed form needs q_b < inflow, q_t < inflow < q_max");
  }
  // Times relative to the start of the bottleneck; the result does not
  // depend on the origin and this keeps the squares small.
  const double tt = times.tow_start.hours_since(times.breakdown);
  const double tw = times.tow_at_exit.hours_since(times.breakdown);
  if (!(tt >= 0.0 && tw >= tt)) {
    throw PreconditionViolated("bottleneck boundaries out of order");
  }
  const double td = (c.q_max * tw - c.q_b * tt - c.q_t * (tw - tt)) / (c.q_max - q);

  ClosedFormQueue out;
  out.queue_at_tow_start_veh = (q - c.q_b) * tt;
  out.queue_at_exit_veh = out.queue_at_tow_start_veh + (q - c.q_t) * (tw - tt);
  out.dissipation = times.breakdown.plus_hours(td);
  // Area under the queue: integral of (capacity - inflow) * t over the
  // episode, since the net flow integrates to zero.
  out.total_loss_vehh = 0.5 * (c.q_b * tt * tt + c.q_t * (tw * tw - tt * tt) +
                               c.q_max * (td * td - tw * tw) - q * td * td);
  return out;
}

}  // namespace faultplan
