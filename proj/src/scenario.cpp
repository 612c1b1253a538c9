#include "faultplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bundled_scenarios.hpp"
#include "faultplan/error.hpp"

namespace faultplan {

using nlohmann::json;

namespace {

// Standard normal CDF and upper tail, both accurate in the far tails.
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Read access to a JSON subtree that remembers where it is, so schema errors
// can name the offending field.
class Field {
 public:
  Field(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  bool has(const char* key) const { return value_.is_object() && value_.contains(key); }

  Field operator[](const char* key) const {
    if (!value_.is_object()) fail("expected an object");
    auto it = value_.find(key);
    if (it == value_.end()) {
      throw SchemaError(path_ + "/" + key, "missing required field");
    }
    return Field(*it, path_ + "/" + key);
  }

  std::vector<Field> items() const {
    if (!value_.is_array()) fail("expected an array");
    std::vector<Field> out;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      out.emplace_back(value_[i], path_ + "/" + std::to_string(i));
    }
    return out;
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  int integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<int>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  ClockTime clock() const {
    try {
      return ClockTime::parse(string());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  template <typename Fn>
  auto parse_with(Fn&& fn) const {
    try {
      return fn(string());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw SchemaError(path_, what); }

 private:
  const json& value_;
  std::string path_;
};

RoadSpeeds read_speeds(const Field& f) {
  return RoadSpeeds{f["free_flow_kmh"].number(), f["towing_kmh"].number()};
}

TrafficProfile read_profile(const Field& f) {
  std::vector<std::pair<ClockTime, double>> points;
  for (const Field& item : f.items()) {
    auto pair = item.items();
    if (pair.size() != 2) item.fail("expected [\"HH:MM\", veh_per_h]");
    points.emplace_back(pair[0].clock(), pair[1].number());
  }
  return TrafficProfile(std::move(points));
}

BreakdownDistribution read_distribution(const Field& f) {
  const std::string kind = f["kind"].string();
  if (kind == "normal") {
    return BreakdownDistribution::normal(f["mu_km"].number(), f["sigma_km"].number());
  }
  if (kind == "empirical") {
    std::vector<double> support;
    std::vector<double> density;
    for (const Field& x : f["support_km"].items()) support.push_back(x.number());
    for (const Field& x : f["density"].items()) density.push_back(x.number());
    return BreakdownDistribution::empirical(std::move(support), std::move(density));
  }
  if (kind == "point_mass") return BreakdownDistribution::point_mass(f["at_km"].number());
  f["kind"].fail("unknown distribution kind '" + kind + "'");
}

MaintenanceTimes read_maintenance(const Field& f) {
  return MaintenanceTimes{f["functioning_h"].number(), f["broken_down_h"].number()};
}

Route read_route(const Field& f) {
  Route route;
  for (const Field& item : f.items()) route.nodes.push_back(item.integer());
  return route;
}

json profile_to_json(const TrafficProfile& profile) {
  json out = json::array();
  for (const auto& [t, q] : profile.breakpoints()) out.push_back(json::array({t.to_string(), q}));
  return out;
}

json distribution_to_json(const BreakdownDistribution& d) {
  switch (d.kind()) {
    case BreakdownDistribution::Kind::normal:
      return {{"kind", "normal"}, {"mu_km", d.mu_km()}, {"sigma_km", d.sigma_km()}};
    case BreakdownDistribution::Kind::empirical:
      return {{"kind", "empirical"}, {"support_km", d.support_km()}, {"density", d.density()}};
    case BreakdownDistribution::Kind::point_mass:
      return {{"kind", "point_mass"}, {"at_km", *d.atom()}};
  }
  return {};
}

}  // namespace

// ---------------------------------------------------------------------------
// BreakdownDistribution

BreakdownDistribution BreakdownDistribution::normal(double mu_km, double sigma_km) {
  if (!(sigma_km > 0.0) || !std::isfinite(sigma_km) || !std::isfinite(mu_km)) {
    throw ValidationError(
        "breakdown distribution: normal requires finite mu and sigma > 0 "
        "(use kind point_mass for a deterministic breakdown)");
  }
  BreakdownDistribution d;
  d.kind_ = Kind::normal;
  d.mu_ = mu_km;
  d.sigma_ = sigma_km;
  d.mass_above_zero_ = normal_tail(-mu_km / sigma_km);
  if (!(d.mass_above_zero_ > 0.0)) {
    throw ValidationError("breakdown distribution: no probability mass above 0 km");
  }
  return d;
}

BreakdownDistribution BreakdownDistribution::empirical(std::vector<double> support_km,
                                                       std::vector<double> density) {
  if (support_km.size() < 2 || support_km.size() != density.size()) {
    throw ValidationError(
        "breakdown distribution: empirical needs >= 2 support points and one density per point");
  }
  for (std::size_t k = 0; k < support_km.size(); ++k) {
    if (support_km[k] < 0.0) throw ValidationError("breakdown distribution: support must be >= 0");
    if (density[k] < 0.0) throw ValidationError("breakdown distribution: density must be >= 0");
    if (k > 0 && !(support_km[k] > support_km[k - 1])) {
      throw ValidationError("breakdown distribution: support must be strictly increasing");
    }
  }
  BreakdownDistribution d;
  d.kind_ = Kind::empirical;
  d.cumulative_.assign(support_km.size(), 0.0);
  for (std::size_t k = 1; k < support_km.size(); ++k) {
    const double h = support_km[k] - support_km[k - 1];
    d.cumulative_[k] = d.cumulative_[k - 1] + 0.5 * h * (density[k] + density[k - 1]);
  }
  const double mass = d.cumulative_.back();
  if (!(mass > 0.0)) throw ValidationError("breakdown distribution: empirical density has no mass");
  d.support_ = std::move(support_km);
  d.density_ = std::move(density);
  d.mass_above_zero_ = mass;
  return d;
}

BreakdownDistribution BreakdownDistribution::point_mass(double at_km) {
  if (!(at_km >= 0.0) || !std::isfinite(at_km)) {
    throw ValidationError("breakdown distribution: point mass must lie at >= 0 km");
  }
  BreakdownDistribution d;
  d.kind_ = Kind::point_mass;
  d.mu_ = at_km;
  d.sigma_ = 0.0;
  return d;
}

double BreakdownDistribution::pdf(double s_km) const {
  if (s_km < 0.0) return 0.0;
  switch (kind_) {
    case Kind::normal: {
      const double z = (s_km - mu_) / sigma_;
      return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * M_PI) * mass_above_zero_);
    }
    case Kind::empirical: {
      if (s_km < support_.front() || s_km > support_.back()) return 0.0;
      auto it = std::upper_bound(support_.begin(), support_.end(), s_km);
      const std::size_t k = it == support_.end() ? support_.size() - 1
                                                  : static_cast<std::size_t>(it - support_.begin());
      const double x0 = support_[k - 1];
      const double x1 = support_[k];
      const double u = (s_km - x0) / (x1 - x0);
      return ((1.0 - u) * density_[k - 1] + u * density_[k]) / mass_above_zero_;
    }
    case Kind::point_mass:
      return 0.0;
  }
  return 0.0;
}

double BreakdownDistribution::cdf(double s_km) const {
  if (std::isinf(s_km)) return s_km > 0 ? 1.0 : 0.0;
  switch (kind_) {
    case Kind::normal: {
      if (s_km <= 0.0) return 0.0;
      const double z = (s_km - mu_) / sigma_;
      const double z0 = -mu_ / sigma_;
      if (z < 0.0) return (normal_cdf(z) - normal_cdf(z0)) / mass_above_zero_;
      return 1.0 - normal_tail(z) / mass_above_zero_;
    }
    case Kind::empirical: {
      if (s_km <= support_.front()) return 0.0;
      if (s_km >= support_.back()) return 1.0;
      auto it = std::upper_bound(support_.begin(), support_.end(), s_km);
      const std::size_t k = static_cast<std::size_t>(it - support_.begin());
      const double x0 = support_[k - 1];
      const double h = support_[k] - x0;
      const double u = s_km - x0;
      const double d0 = density_[k - 1];
      const double d1 = density_[k];
      return (cumulative_[k - 1] + d0 * u + (d1 - d0) * u * u / (2.0 * h)) / mass_above_zero_;
    }
    case Kind::point_mass:
      return s_km >= mu_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double BreakdownDistribution::quantile(double p) const {
  p = std::clamp(p, 0.0, 1.0);
  if (kind_ == Kind::point_mass) return mu_;
  double lo = 0.0;
  double hi = 0.0;
  if (kind_ == Kind::normal) {
    hi = std::max(mu_, 0.0) + 40.0 * sigma_;
  } else {
    lo = support_.front();
    hi = support_.back();
  }
  if (p <= 0.0) return lo;
  if (p >= 1.0) return hi;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::optional<double> BreakdownDistribution::atom() const {
  if (kind_ == Kind::point_mass) return mu_;
  return std::nullopt;
}

double breakdown_pdf(const BreakdownDistribution& dist, double s_km) { return dist.pdf(s_km); }
double breakdown_cdf(const BreakdownDistribution& dist, double s_km) { return dist.cdf(s_km); }

// ---------------------------------------------------------------------------
// TrafficProfile

TrafficProfile::TrafficProfile(std::vector<std::pair<ClockTime, double>> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) throw ValidationError("traffic profile: needs at least one breakpoint");
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k].second >= 0.0)) {
      throw ValidationError("traffic profile: flows must be >= 0");
    }
    if (k > 0 && !(breakpoints_[k].first > breakpoints_[k - 1].first)) {
      throw ValidationError("traffic profile: breakpoint times must be strictly increasing");
    }
  }
}

double TrafficProfile::inflow_at(ClockTime t) const {
  if (breakpoints_.empty()) return 0.0;
  if (t <= breakpoints_.front().first) return breakpoints_.front().second;
  if (t >= breakpoints_.back().first) return breakpoints_.back().second;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                             [](ClockTime value, const auto& bp) { return value < bp.first; });
  const auto& [t1, q1] = *it;
  const auto& [t0, q0] = *(it - 1);
  const double u = (t.minutes() - t0.minutes()) / (t1.minutes() - t0.minutes());
  return q0 + u * (q1 - q0);
}

double inflow_at(const TrafficProfile& profile, ClockTime t) { return profile.inflow_at(t); }

// ---------------------------------------------------------------------------
// Scenario

MaintenanceTimes Scenario::maintenance_at(NodeId workshop) const {
  auto it = maintenance_overrides.find(workshop);
  return it == maintenance_overrides.end() ? default_maintenance : it->second;
}

const TrafficProfile* Scenario::traffic_for(RoadType type) const {
  if (type == RoadType::motorway) return &traffic;
  return country_traffic ? &*country_traffic : nullptr;
}

Route Scenario::remaining_planned_route() const {
  const auto& nodes = planned_route.nodes;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (nodes[k - 1] == alarm.location.from && nodes[k] == alarm.location.to) {
      return Route{{nodes.begin() + static_cast<std::ptrdiff_t>(k), nodes.end()}};
    }
  }
  return shortest_path(network, TravelView::free_flow, alarm.location.to, customer).route;
}

void validate(const Scenario& s) {
  const Capacities& c = s.capacities;
  if (!(c.q_max > 0.0)) throw ValidationError("capacities: requires q_max > 0");
  if (!(c.q_b > 0.0 && c.q_b <= c.q_max)) {
    throw ValidationError("capacities: requires 0 < q_b <= q_max");
  }
  if (!(c.q_t > 0.0 && c.q_t <= c.q_max)) {
    throw ValidationError("capacities: requires 0 < q_t <= q_max");
  }

  auto check_maintenance = [](const MaintenanceTimes& m, const std::string& where) {
    if (!(m.functioning_h >= 0.0 && m.broken_down_h >= m.functioning_h)) {
      throw ValidationError("maintenance " + where +
                            ": requires broken_down_h >= functioning_h >= 0");
    }
  };
  check_maintenance(s.default_maintenance, "default");
  for (const auto& [node, m] : s.maintenance_overrides) {
    if (!s.network.has_node(node) || s.network.kind(node) != NodeKind::workshop) {
      throw ValidationError("maintenance override for node " + std::to_string(node) +
                            " which is not a workshop");
    }
    check_maintenance(m, "at workshop " + std::to_string(node));
  }

  if (!(s.deadline > s.alarm.time)) {
    throw ValidationError("mission: deadline must be after the alarm time");
  }
  if (s.customer != s.network.customer()) {
    throw ValidationError("mission: customer node " + std::to_string(s.customer) +
                          " is not the network's customer node");
  }

  const NetworkPosition& at = s.alarm.location;
  const Link* link = s.network.find_link(at.from, at.to);
  if (link == nullptr) {
    throw ValidationError("fault: alarm link (" + std::to_string(at.from) + "," +
                          std::to_string(at.to) + ") is not a link of the network");
  }
  if (!(at.offset_km >= 0.0 && at.offset_km <= link->length_km)) {
    throw ValidationError("fault: offset_km must lie within the alarm link");
  }

  if (!s.planned_route.nodes.empty()) {
    try {
      (void)s.network.length_km(s.planned_route);
    } catch (const InconsistentRoute& e) {
      throw ValidationError(std::string("mission: planned_route is not a path: ") + e.what());
    }
    if (s.planned_route.back() != s.customer) {
      throw ValidationError("mission: planned_route must end at the customer");
    }
  }
  if (!(s.tow_dispatch_delay_h >= 0.0)) {
    throw ValidationError("towing: dispatch_delay_h must be >= 0");
  }
}

Scenario load_scenario(const json& document) {
  const Field root(document, "");
  Scenario s;
  s.id = root.has("id") ? root["id"].string() : std::string("scenario");

  const Field speeds = root["speeds"];
  for (RoadType type : {RoadType::motorway, RoadType::country}) {
    const std::string key(to_string(type));
    if (speeds.has(key.c_str())) s.speeds[type] = read_speeds(speeds[key.c_str()]);
  }

  const Field net = root["network"];
  std::map<NodeId, NodeKind> nodes;
  for (const Field& n : net["nodes"].items()) {
    const NodeId id = n["id"].integer();
    const NodeKind kind = n["kind"].parse_with(node_kind_from_string);
    if (!nodes.emplace(id, kind).second) n["id"].fail("duplicate node id");
  }
  std::vector<Link> links;
  for (const Field& l : net["links"].items()) {
    Link link;
    link.from = l["from"].integer();
    link.to = l["to"].integer();
    link.length_km = l["length_km"].number();
    link.road_type = l["road_type"].parse_with(road_type_from_string);
    auto it = s.speeds.find(link.road_type);
    if (it != s.speeds.end()) {
      link.free_flow_kmh = it->second.free_flow_kmh;
      link.towing_kmh = it->second.towing_kmh;
    }
    if (l.has("free_flow_kmh")) link.free_flow_kmh = l["free_flow_kmh"].number();
    if (l.has("towing_kmh")) link.towing_kmh = l["towing_kmh"].number();
    if (link.free_flow_kmh == 0.0 || link.towing_kmh == 0.0) {
      l.fail("no speeds for road type '" + std::string(to_string(link.road_type)) + "'");
    }
    links.push_back(link);
  }
  s.network = RoadNetwork(std::move(nodes), std::move(links));

  const Field cap = root["capacities"];
  s.capacities = Capacities{cap["q_max"].number(), cap["q_b"].number(), cap["q_t"].number()};

  s.traffic = read_profile(root["traffic_profile"]);
  if (root.has("country_traffic_profile")) {
    s.country_traffic = read_profile(root["country_traffic_profile"]);
  }

  const Field fault = root["fault"];
  s.alarm.time = fault["alarm_time"].clock();
  auto alarm_link = fault["alarm_link"].items();
  if (alarm_link.size() != 2) fault["alarm_link"].fail("expected [from, to]");
  s.alarm.location = NetworkPosition{alarm_link[0].integer(), alarm_link[1].integer(),
                                     fault["offset_km"].number()};
  s.alarm.breakdown = read_distribution(fault["distribution"]);

  const Field mission = root["mission"];
  s.customer = mission["customer"].integer();
  s.deadline = mission["deadline"].clock();
  if (mission.has("planned_route")) s.planned_route = read_route(mission["planned_route"]);

  const Field maintenance = root["maintenance"];
  s.default_maintenance = read_maintenance(maintenance["default"]);
  if (maintenance.has("workshops")) {
    for (const Field& w : maintenance["workshops"].items()) {
      s.maintenance_overrides[w["node"].integer()] = read_maintenance(w);
    }
  }

  if (root.has("towing")) s.tow_dispatch_delay_h = root["towing"]["dispatch_delay_h"].number();

  validate(s);
  return s;
}

json to_json(const Scenario& s) {
  json doc;
  doc["id"] = s.id;

  json speeds = json::object();
  for (const auto& [type, v] : s.speeds) {
    speeds[std::string(to_string(type))] = {{"free_flow_kmh", v.free_flow_kmh},
                                            {"towing_kmh", v.towing_kmh}};
  }
  doc["speeds"] = speeds;

  json nodes = json::array();
  for (const auto& [id, kind] : s.network.nodes()) {
    nodes.push_back({{"id", id}, {"kind", to_string(kind)}});
  }
  json links = json::array();
  for (const Link& l : s.network.links()) {
    json item = {{"from", l.from},
                 {"to", l.to},
                 {"length_km", l.length_km},
                 {"road_type", to_string(l.road_type)}};
    auto it = s.speeds.find(l.road_type);
    if (it == s.speeds.end() || it->second.free_flow_kmh != l.free_flow_kmh) {
      item["free_flow_kmh"] = l.free_flow_kmh;
    }
    if (it == s.speeds.end() || it->second.towing_kmh != l.towing_kmh) {
      item["towing_kmh"] = l.towing_kmh;
    }
    links.push_back(item);
  }
  doc["network"] = {{"nodes", nodes}, {"links", links}};

  doc["capacities"] = {
      {"q_max", s.capacities.q_max}, {"q_b", s.capacities.q_b}, {"q_t", s.capacities.q_t}};
  doc["traffic_profile"] = profile_to_json(s.traffic);
  if (s.country_traffic) doc["country_traffic_profile"] = profile_to_json(*s.country_traffic);

  doc["fault"] = {{"alarm_time", s.alarm.time.to_string()},
                  {"alarm_link", {s.alarm.location.from, s.alarm.location.to}},
                  {"offset_km", s.alarm.location.offset_km},
                  {"distribution", distribution_to_json(s.alarm.breakdown)}};

  json mission = {{"customer", s.customer}, {"deadline", s.deadline.to_string()}};
  if (!s.planned_route.nodes.empty()) mission["planned_route"] = s.planned_route.nodes;
  doc["mission"] = mission;

  json overrides = json::array();
  for (const auto& [node, m] : s.maintenance_overrides) {
    overrides.push_back(
        {{"node", node}, {"functioning_h", m.functioning_h}, {"broken_down_h", m.broken_down_h}});
  }
  doc["maintenance"] = {{"default",
                         {{"functioning_h", s.default_maintenance.functioning_h},
                          {"broken_down_h", s.default_maintenance.broken_down_h}}},
                        {"workshops", overrides}};
  doc["towing"] = {{"dispatch_delay_h", s.tow_dispatch_delay_h}};
  return doc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string(), std::string("malformed JSON: ") + e.what());
  }
  return load_scenario(doc);
}

std::vector<std::string> bundled_scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::bundled_scenarios()) names.emplace_back(name);
  return names;
}

std::optional<std::string_view> bundled_scenario_text(std::string_view name) {
  for (const auto& [key, text] : detail::bundled_scenarios()) {
    if (key == name) return text;
  }
  return std::nullopt;
}

Scenario load_bundled_scenario(std::string_view name) {
  auto text = bundled_scenario_text(name);
  if (!text) throw SchemaError(std::string(name), "no bundled scenario with this name");
  return load_scenario(json::parse(*text));
}

Scenario load_scenario_named(const std::string& path_or_name) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path_or_name, ec)) return load_scenario_file(path_or_name);
  if (bundled_scenario_text(path_or_name)) return load_bundled_scenario(path_or_name);
  throw SchemaError(path_or_name, "neither a readable file nor a bundled scenario name");
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string text = to_json(scenario).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace faultplan
