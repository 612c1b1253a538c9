#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "faultplan/clock.hpp"
#include "faultplan/network.hpp"

namespace faultplan {

/// Distribution of the distance the faulty vehicle can still drive before it
/// breaks down. Densities are restricted to [0, inf) and renormalized there.
class BreakdownDistribution {
 public:
  enum class Kind { normal, empirical, point_mass };

  /// Normal(mu, sigma) truncated at zero. Throws ValidationError unless sigma > 0.
  static BreakdownDistribution normal(double mu_km, double sigma_km);
  /// Piecewise-linear density through (support[k], density[k]), zero outside
  /// the support, scaled to unit mass.
  static BreakdownDistribution empirical(std::vector<double> support_km,
                                         std::vector<double> density);
  static BreakdownDistribution point_mass(double at_km);

  Kind kind() const { return kind_; }
  double pdf(double s_km) const;
  double cdf(double s_km) const;
  /// Smallest s with cdf(s) >= p, for p in [0, 1].
  double quantile(double p) const;
  /// The location of a point mass, if this distribution is one.
  std::optional<double> atom() const;

  double mu_km() const { return mu_; }
  double sigma_km() const { return sigma_; }
  const std::vector<double>& support_km() const { return support_; }
  const std::vector<double>& density() const { return density_; }

  bool operator==(const BreakdownDistribution&) const = default;

 private:
  BreakdownDistribution() = default;

  Kind kind_ = Kind::normal;
  double mu_ = 0.0;
  double sigma_ = 1.0;
  double mass_above_zero_ = 1.0;
  std::vector<double> support_;
  std::vector<double> density_;
  std::vector<double> cumulative_;
};

/// Piecewise-linear daily inflow in veh/h, clamped outside its breakpoints.
class TrafficProfile {
 public:
  TrafficProfile() = default;
  /// Throws ValidationError on empty input, negative flows or unsorted times.
  explicit TrafficProfile(std::vector<std::pair<ClockTime, double>> breakpoints);

  double inflow_at(ClockTime t) const;
  const std::vector<std::pair<ClockTime, double>>& breakpoints() const { return breakpoints_; }

  bool operator==(const TrafficProfile&) const = default;

 private:
  std::vector<std::pair<ClockTime, double>> breakpoints_;
};

double inflow_at(const TrafficProfile& profile, ClockTime t);
double breakdown_pdf(const BreakdownDistribution& dist, double s_km);
double breakdown_cdf(const BreakdownDistribution& dist, double s_km);

/// Road capacity and the two bottleneck capacities, veh/h.
struct Capacities {
  double q_max = 0.0;
  double q_b = 0.0;  ///< broken-down vehicle blocking the road
  double q_t = 0.0;  ///< vehicle being towed

  bool operator==(const Capacities&) const = default;
};

struct MaintenanceTimes {
  double functioning_h = 0.0;
  double broken_down_h = 0.0;

  bool operator==(const MaintenanceTimes&) const = default;
};

struct RoadSpeeds {
  double free_flow_kmh = 0.0;
  double towing_kmh = 0.0;

  bool operator==(const RoadSpeeds&) const = default;
};

struct AlarmState {
  ClockTime time;
  NetworkPosition location;
  BreakdownDistribution breakdown = BreakdownDistribution::point_mass(0.0);

  bool operator==(const AlarmState&) const = default;
};

struct Scenario {
  std::string id;
  RoadNetwork network;
  /// Default speeds per road type; individual links may override them.
  std::map<RoadType, RoadSpeeds> speeds;
  AlarmState alarm;
  NodeId customer = 0;
  ClockTime deadline;
  MaintenanceTimes default_maintenance;
  std::map<NodeId, MaintenanceTimes> maintenance_overrides;
  Capacities capacities;
  /// Inflow to motorway links.
  TrafficProfile traffic;
  /// Inflow to country roads; none means breakdowns there cause no queue.
  std::optional<TrafficProfile> country_traffic;
  /// Full planned trip, warehouse to customer. May be empty.
  Route planned_route;
  double tow_dispatch_delay_h = 0.0;

  MaintenanceTimes maintenance_at(NodeId workshop) const;
  const TrafficProfile* traffic_for(RoadType type) const;
  /// The planned route from the alarm link's downstream node to the customer.
  /// Falls back to the fastest free-flow route when no planned route is set.
  Route remaining_planned_route() const;

  bool operator==(const Scenario&) const = default;
};

/// Builds a validated Scenario. Throws SchemaError (with a JSON-pointer-like
/// path) or ValidationError.
Scenario load_scenario(const nlohmann::json& document);
nlohmann::json to_json(const Scenario& scenario);

/// Throws SchemaError when the file cannot be read or parsed.
Scenario load_scenario_file(const std::filesystem::path& path);

/// Loads a path if it exists, else a bundled scenario of that name.
Scenario load_scenario_named(const std::string& path_or_name);

std::vector<std::string> bundled_scenario_names();
/// Raw JSON text of a bundled scenario, if one has that name.
std::optional<std::string_view> bundled_scenario_text(std::string_view name);
Scenario load_bundled_scenario(std::string_view name);

/// Re-validates the cross-field invariants. Throws ValidationError.
void validate(const Scenario& scenario);

/// Stable 64-bit FNV-1a hash of the canonical serialization, hex encoded.
std::string scenario_hash(const Scenario& scenario);

}  // namespace faultplan
