#include "faultplan/risk.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "faultplan/error.hpp"

namespace faultplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Midpoint rule over [a, b] in cells no wider than `step`. Each cell is
// weighted by its exact probability mass, so the weights add up to
// cdf(b) - cdf(a) however coarse the grid. `fn` returns false to stop early.
template <class Fn>
void for_each_cell(const BreakdownDistribution& dist, double a, double b, double step, Fn&& fn) {
  if (!(b > a)) return;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / step - 1e-9)));
  const double h = (b - a) / static_cast<double>(n);
  double lower = dist.cdf(a);
  for (std::size_t k = 0; k < n; ++k) {
    const double right = k + 1 == n ? b : a + static_cast<double>(k + 1) * h;
    const double upper = dist.cdf(right);
    const double weight = upper - lower;
    lower = upper;
    if (weight <= 0.0) continue;
    if (!fn(a + (static_cast<double>(k) + 0.5) * h, weight)) return;
  }
}

}  // namespace

std::vector<QuadratureCell> quadrature_cells(const BreakdownDistribution& dist, double a_km,
                                             double b_km, double step_km) {
  if (!(step_km > 0.0)) throw ValidationError("quadrature step must be positive");
  std::vector<QuadratureCell> cells;
  for_each_cell(dist, a_km, b_km, step_km, [&](double s, double w) {
    cells.push_back({s, w});
    return true;
  });
  return cells;
}

RiskEngine::RiskEngine(Scenario scenario, ModelOptions options)
    : planner_(std::move(scenario)), options_(options) {
  if (!(options_.quadrature_step_km > 0.0)) {
    throw ValidationError("quadrature step must be positive");
  }
  if (!(options_.integration_step_min > 0.0)) {
    throw ValidationError("integration step must be positive");
  }
}

double RiskEngine::loss_at(const BreakdownEvent& event) const {
  return faultplan::public_time_loss(
      make_episode(scenario(), event, options_.inflow_reference), options_.integration_step_min);
}

double RiskEngine::loss_at(const DrivePath& drive, double s_km) const {
  if (s_km >= drive.length_km()) return 0.0;
  return loss_at(planner_.breakdown_along(drive, s_km));
}

double RiskEngine::public_time_loss(const Decision& decision, double s_km) const {
  if (!(s_km >= 0.0)) throw OutOfRange("breakdown distance must be non-negative");
  return loss_at(planner_.pre_maintenance_drive(decision), s_km);
}

DelayOutcome RiskEngine::mission_delay(const Decision& decision, double s_km) const {
  return faultplan::mission_delay(planner_, decision, s_km);
}

RiskPoint RiskEngine::evaluate(const Decision& decision) const {
  const BreakdownDistribution& dist = scenario().alarm.breakdown;
  const DrivePath drive = planner_.pre_maintenance_drive(decision);
  const double d1 = decision.first_km;
  const double d_pre = drive.length_km();

  RiskPoint risk;
  if (auto atom = dist.atom()) {
    risk.public_time_loss_vehh = loss_at(drive, *atom);
    risk.mission_delay_h = mission_delay(decision, *atom).delay_h;
    return risk;
  }

  const double step = options_.quadrature_step_km;
  for_each_cell(dist, 0.0, d1, step, [&](double s, double w) {
    const BreakdownEvent event = planner_.breakdown_along(drive, s);
    risk.public_time_loss_vehh += w * loss_at(event);
    risk.mission_delay_h += w * delay_after_breakdown(planner_, event).delay_h;
    return true;
  });
  for_each_cell(dist, d1, d_pre, step, [&](double s, double w) {
    risk.public_time_loss_vehh += w * loss_at(drive, s);
    return true;
  });
  if (decision.kind == DecisionKind::maintenance_first) {
    const double tail = 1.0 - dist.cdf(d1);
    if (tail > 0.0) {
      risk.mission_delay_h += tail * mission_delay_without_breakdown(scenario(), decision).delay_h;
    }
  }
  return risk;
}

Route RiskEngine::select_post_delivery_route(const Route& first) const {
  const Scenario& sc = scenario();
  const RoadNetwork& net = sc.network;
  const auto workshops = net.workshops();
  const std::set<NodeId> targets(workshops.begin(), workshops.end());
  const auto candidates =
      enumerate_simple_routes(net, sc.customer, targets, {}, options_.max_route_hops);
  if (candidates.empty()) throw NoDecisions("no route from the customer to a workshop");

  const BreakdownDistribution& dist = sc.alarm.breakdown;
  const double d1 = sc.network.link(sc.alarm.location.from, sc.alarm.location.to).length_km -
                    sc.alarm.location.offset_km + net.length_km(first);

  const Route* best = nullptr;
  double best_risk = kInf;
  for (const Route& candidate : candidates) {
    const DrivePath drive(net, sc.alarm.location, concatenate(first, candidate));
    double risk = 0.0;
    if (auto atom = dist.atom()) {
      if (*atom >= d1) risk = loss_at(drive, *atom);
    } else {
      // Terms are non-negative, so a candidate can be dropped as soon as its
      // partial sum reaches the best so far.
      for_each_cell(dist, d1, drive.length_km(), options_.quadrature_step_km,
                    [&](double s, double w) {
                      risk += w * loss_at(drive, s);
                      return risk < best_risk;
                    });
    }
    if (risk < best_risk) {
      best_risk = risk;
      best = &candidate;
    }
  }
  return *best;
}

MonteCarloResult RiskEngine::monte_carlo(const Decision& decision, std::size_t samples,
                                         std::uint64_t seed, SamplingScheme scheme) const {
  if (samples == 0) throw ValidationError("Monte Carlo needs at least one sample");
  const BreakdownDistribution& dist = scenario().alarm.breakdown;
  const DrivePath drive = planner_.pre_maintenance_drive(decision);
  const double no_breakdown_delay =
      mission_delay_without_breakdown(scenario(), decision).delay_h;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(dist.mu_km(), dist.sigma_km());
  auto draw = [&](std::size_t k) {
    if (scheme == SamplingScheme::stratified) {
      return dist.quantile((static_cast<double>(k) + unit(rng)) / static_cast<double>(samples));
    }
    if (dist.kind() == BreakdownDistribution::Kind::normal) {
      for (;;) {
        const double s = gauss(rng);
        if (s >= 0.0) return s;
      }
    }
    return dist.quantile(unit(rng));
  };

  double sum1 = 0.0, sq1 = 0.0, sum2 = 0.0, sq2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double s = draw(k);
    double c1 = 0.0;
    double c2 = 0.0;
    if (s < drive.length_km()) {
      const BreakdownEvent event = planner_.breakdown_along(drive, s);
      c1 = loss_at(event);
      if (s < decision.first_km) c2 = delay_after_breakdown(planner_, event).delay_h;
    } else if (decision.kind == DecisionKind::maintenance_first) {
      c2 = no_breakdown_delay;
    }
    sum1 += c1;
    sq1 += c1 * c1;
    sum2 += c2;
    sq2 += c2 * c2;
  }

  const double n = static_cast<double>(samples);
  auto stderr_of = [n](double sum, double sq) {
    if (n < 2.0) return 0.0;
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, (sq / n - mean * mean) * n / (n - 1.0)) / n);
  };
  MonteCarloResult out;
  out.samples = samples;
  out.mean = {sum1 / n, sum2 / n};
  out.standard_error = {stderr_of(sum1, sq1), stderr_of(sum2, sq2)};
  return out;
}

RiskPoint evaluate_risk(const Scenario& scenario, const Decision& decision,
                        const ModelOptions& options) {
  return RiskEngine(scenario, options).evaluate(decision);
}

}  // namespace faultplan
