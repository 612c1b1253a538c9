#include "faultplan/decision_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "faultplan/error.hpp"
#include "parallel.hpp"

namespace faultplan {

std::string_view to_string(DecisionKind kind) {
  return kind == DecisionKind::maintenance_first ? "maintenance_first" : "deliver_first";
}

std::vector<Decision> generate_decisions(const RiskEngine& engine) {
  const Scenario& sc = engine.scenario();
  const RoadNetwork& net = sc.network;
  const NodeId start = sc.alarm.location.to;
  const double remainder_km =
      net.link(sc.alarm.location.from, start).length_km - sc.alarm.location.offset_km;
  const std::size_t hops = engine.options().max_route_hops;

  const auto workshop_list = net.workshops();
  const std::set<NodeId> workshops(workshop_list.begin(), workshop_list.end());
  auto to_workshops = enumerate_simple_routes(net, start, workshops, {sc.customer}, hops);
  std::stable_sort(to_workshops.begin(), to_workshops.end(),
                   [](const Route& a, const Route& b) {
                     if (a.back() != b.back()) return a.back() < b.back();
                     return a < b;
                   });
  const auto to_customer = enumerate_simple_routes(net, start, {sc.customer}, {}, hops);

  std::vector<Decision> out;
  out.reserve(to_workshops.size() + to_customer.size());
  for (const Route& first : to_workshops) {
    const PathResult* onward = engine.planner().free_flow_paths().find(first.back(), sc.customer);
    if (onward == nullptr) continue;
    Decision d;
    d.kind = DecisionKind::maintenance_first;
    d.first = first;
    d.second = onward->route;
    out.push_back(std::move(d));
  }
  for (const Route& first : to_customer) {
    Decision d;
    d.kind = DecisionKind::deliver_first;
    d.first = first;
    try {
      d.second = engine.select_post_delivery_route(first);
    } catch (const NoDecisions&) {
      continue;
    }
    out.push_back(std::move(d));
  }
  if (out.empty()) throw NoDecisions("neither a workshop nor the customer is reachable");

  int index = 1;
  for (Decision& d : out) {
    d.index = index++;
    d.first_km = remainder_km + net.length_km(d.first);
    d.second_km = net.length_km(d.second);
  }
  return out;
}

std::vector<Decision> generate_decisions(const Scenario& scenario, const ModelOptions& options) {
  return generate_decisions(RiskEngine(scenario, options));
}

bool strictly_dominates(const RiskPoint& a, const RiskPoint& b) {
  return a.public_time_loss_vehh < b.public_time_loss_vehh &&
         a.mission_delay_h < b.mission_delay_h;
}

namespace {

// Shared sweep: points in increasing RS1, a group of equal RS1 at a time.
// Any point whose RS2 exceeds the least RS2 among strictly smaller RS1 is
// dominated, and that least point is itself on the front.
std::vector<std::optional<std::size_t>> dominators(std::span<const RiskPoint> points,
                                                   std::vector<bool>& dominated) {
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].public_time_loss_vehh < points[b].public_time_loss_vehh;
  });

  std::vector<std::optional<std::size_t>> by(n);
  dominated.assign(n, false);
  std::optional<std::size_t> best;  // least RS2 among earlier groups
  std::size_t g = 0;
  while (g < n) {
    std::size_t end = g;
    const double rs1 = points[order[g]].public_time_loss_vehh;
    while (end < n && points[order[end]].public_time_loss_vehh == rs1) ++end;
    std::optional<std::size_t> group_best;
    for (std::size_t k = g; k < end; ++k) {
      const std::size_t i = order[k];
      if (best && points[*best].mission_delay_h < points[i].mission_delay_h) {
        dominated[i] = true;
        by[i] = best;
      }
      if (!group_best || points[i].mission_delay_h < points[*group_best].mission_delay_h) {
        group_best = i;
      }
    }
    if (!best || points[*group_best].mission_delay_h < points[*best].mission_delay_h) {
      best = group_best;
    }
    g = end;
  }
  return by;
}

}  // namespace

std::vector<std::size_t> pareto_front(std::span<const RiskPoint> points) {
  std::vector<bool> dominated;
  dominators(points, dominated);
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!dominated[i]) front.push_back(i);
  }
  return front;
}

bool ParetoResult::on_front(std::size_t position) const {
  return std::binary_search(front.begin(), front.end(), position);
}

ParetoResult pareto_analysis(std::vector<RiskPoint> points) {
  ParetoResult out;
  std::vector<bool> dominated;
  out.dominated_by = dominators(points, dominated);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!dominated[i]) out.front.push_back(i);
  }
  out.points = std::move(points);
  return out;
}

std::vector<ChangeRate> change_rates(std::span<const RiskPoint> points, std::size_t baseline) {
  if (baseline >= points.size()) throw OutOfRange("baseline is not one of the points");
  const RiskPoint& base = points[baseline];
  auto rate = [](double value, double ref) -> std::optional<double> {
    if (ref == 0.0) return std::nullopt;
    return 100.0 * (value - ref) / ref;
  };
  std::vector<ChangeRate> out;
  out.reserve(points.size());
  for (const RiskPoint& p : points) {
    out.push_back({rate(p.public_time_loss_vehh, base.public_time_loss_vehh),
                   rate(p.mission_delay_h, base.mission_delay_h)});
  }
  return out;
}

Evaluation evaluate_scenario(const RiskEngine& engine) {
  Evaluation out;
  out.decisions = generate_decisions(engine);
  auto points = detail::parallel_map<RiskPoint>(
      out.decisions.size(), engine.options().threads,
      [&](std::size_t k) { return engine.evaluate(out.decisions[k]); });
  out.pareto = pareto_analysis(std::move(points));
  return out;
}

Evaluation evaluate_scenario(const Scenario& scenario, const ModelOptions& options) {
  return evaluate_scenario(RiskEngine(scenario, options));
}

namespace {

void require_planned_route(const Scenario& base) {
  if (base.planned_route.nodes.size() < 3) {
    throw ValidationError("the sweep needs a planned route of at least two links");
  }
}

// Everything before the last link of the planned route.
double sweep_length_km(const Scenario& base) {
  const auto& nodes = base.planned_route.nodes;
  const double total = base.network.length_km(base.planned_route);
  return total - base.network.link(nodes[nodes.size() - 2], nodes.back()).length_km;
}

}  // namespace

int sweep_case_count(const Scenario& base, const SweepOptions& options) {
  require_planned_route(base);
  if (!(options.spacing_km > 0.0)) throw ValidationError("sweep spacing must be positive");
  return static_cast<int>(std::floor(sweep_length_km(base) / options.spacing_km + 1e-9));
}

Scenario sweep_case_scenario(const Scenario& base, int z, const SweepOptions& options) {
  const int count = sweep_case_count(base, options);
  if (z < 1 || z > count) {
    std::ostringstream msg;
    msg << "sweep case " << z << " is outside 1.." << count;
    throw OutOfRange(msg.str());
  }
  const auto& nodes = base.planned_route.nodes;
  const NetworkPosition warehouse{nodes[0], nodes[1], 0.0};
  const Route rest{{nodes.begin() + 1, nodes.end()}};
  const DrivePath drive(base.network, warehouse, rest);
  const double along = z * options.spacing_km;
  const double left = drive.length_km() - along;

  Scenario sc = base;
  sc.id = base.id + "#" + std::to_string(z);
  // On a node the alarm stays at the end of the link just driven, so a
  // workshop at that node is reachable with no further driving.
  sc.alarm.location = drive.position_at(along, NodeSnap::incoming);
  sc.deadline = sc.alarm.time.plus_hours(left / options.deadline_speed_kmh + options.deadline_slack_h);
  const BreakdownDistribution& dist = base.alarm.breakdown;
  if (dist.kind() == BreakdownDistribution::Kind::normal) {
    sc.alarm.breakdown = BreakdownDistribution::normal(left + options.mean_margin_km, dist.sigma_km());
  }
  validate(sc);
  return sc;
}

std::vector<SweepCase> sweep_alarm_locations(const Scenario& base, const SweepOptions& sweep,
                                             const ModelOptions& options) {
  std::vector<int> cases = sweep.cases;
  if (cases.empty()) {
    const int count = sweep_case_count(base, sweep);
    for (int z = 1; z <= count; ++z) cases.push_back(z);
  }
  // Validate every case before starting any work.
  std::vector<Scenario> scenarios;
  scenarios.reserve(cases.size());
  for (int z : cases) scenarios.push_back(sweep_case_scenario(base, z, sweep));

  ModelOptions inner = options;
  inner.threads = 1;
  return detail::parallel_map<SweepCase>(cases.size(), options.threads, [&](std::size_t k) {
    SweepCase c;
    c.z = cases[k];
    c.scenario = scenarios[k];
    c.evaluation = evaluate_scenario(c.scenario, inner);
    const ParetoResult& p = c.evaluation.pareto;
    for (std::size_t i : p.front) {
      const RiskPoint& pt = p.points[i];
      if (pt.mission_delay_h <= 0.0) {
        ++c.infinite_ratios;
        continue;
      }
      const double ratio = pt.public_time_loss_vehh / pt.mission_delay_h;
      if (!c.min_ratio || ratio < *c.min_ratio) {
        c.min_ratio = ratio;
        c.min_ratio_position = i;
      }
      if (!c.max_ratio || ratio > *c.max_ratio) {
        c.max_ratio = ratio;
        c.max_ratio_position = i;
      }
    }
    return c;
  });
}

}  // namespace faultplan
