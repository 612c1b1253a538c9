#include "faultplan/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <string>
#include <utility>

#include "faultplan/error.hpp"

namespace faultplan {

namespace {

constexpr double kTieHours = 1e-9;
constexpr double kDistanceTol = 1e-9;

std::string link_name(NodeId from, NodeId to) {
  std::ostringstream out;
  out << "(" << from << "," << to << ")";
  return out.str();
}

// Single-source Dijkstra keeping the lexicographically smallest node sequence
// among equal-time paths. Appending a node preserves lexicographic order of
// two distinct simple paths ending at the same node, so label setting stays
// exact under this tie rule.
std::map<NodeId, PathResult> single_source(const RoadNetwork& network, TravelView view,
                                           NodeId source) {
  std::map<NodeId, PathResult> labels;
  std::set<NodeId> settled;
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  labels[source] = PathResult{Route{{source}}, 0.0};
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [h, u] = heap.top();
    heap.pop();
    if (!settled.insert(u).second) continue;
    const PathResult& here = labels.at(u);
    for (const Link* link : network.outgoing(u)) {
      const NodeId v = link->to;
      if (settled.contains(v)) continue;
      const double candidate = here.hours + link->hours(view);
      auto it = labels.find(v);
      bool better = it == labels.end() || candidate < it->second.hours - kTieHours;
      if (!better && std::abs(candidate - it->second.hours) <= kTieHours) {
        Route extended = here.route;
        extended.nodes.push_back(v);
        better = extended < it->second.route;
      }
      if (!better) continue;
      Route extended = here.route;
      extended.nodes.push_back(v);
      labels[v] = PathResult{std::move(extended), candidate};
      heap.emplace(candidate, v);
    }
  }
  return labels;
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::workshop: return "workshop";
    case NodeKind::traffic: return "traffic";
    case NodeKind::customer: return "customer";
  }
  return "traffic";
}

std::string_view to_string(RoadType type) {
  return type == RoadType::motorway ? "motorway" : "country";
}

NodeKind node_kind_from_string(std::string_view text) {
  if (text == "workshop") return NodeKind::workshop;
  if (text == "traffic") return NodeKind::traffic;
  if (text == "customer") return NodeKind::customer;
  throw std::invalid_argument("unknown node kind '" + std::string(text) + "'");
}

RoadType road_type_from_string(std::string_view text) {
  if (text == "motorway") return RoadType::motorway;
  if (text == "country") return RoadType::country;
  throw std::invalid_argument("unknown road type '" + std::string(text) + "'");
}

bool Route::contains(NodeId node) const {
  return std::find(nodes.begin(), nodes.end(), node) != nodes.end();
}

Route concatenate(const Route& head, const Route& tail) {
  if (head.nodes.empty()) return tail;
  if (tail.nodes.empty()) return head;
  if (head.back() != tail.front()) {
    throw InconsistentRoute("cannot join routes ending at " + std::to_string(head.back()) +
                            " and starting at " + std::to_string(tail.front()));
  }
  Route joined = head;
  joined.nodes.insert(joined.nodes.end(), tail.nodes.begin() + 1, tail.nodes.end());
  return joined;
}

RoadNetwork::RoadNetwork(std::map<NodeId, NodeKind> nodes, std::vector<Link> links) {
  auto data = std::make_shared<Data>();
  data->nodes = std::move(nodes);
  data->links = std::move(links);

  int customers = 0;
  int workshops = 0;
  for (const auto& [id, kind] : data->nodes) {
    if (kind == NodeKind::customer) {
      ++customers;
      data->customer = id;
    }
    if (kind == NodeKind::workshop) ++workshops;
  }
  if (customers != 1) {
    throw ValidationError("network must have exactly one customer node, found " +
                          std::to_string(customers));
  }
  if (workshops < 1) throw ValidationError("network must have at least one workshop node");

  for (std::size_t i = 0; i < data->links.size(); ++i) {
    const Link& l = data->links[i];
    const std::string name = link_name(l.from, l.to);
    if (!data->nodes.contains(l.from) || !data->nodes.contains(l.to)) {
      throw ValidationError("link " + name + " references an unknown node");
    }
    if (l.from == l.to) throw ValidationError("link " + name + " is a self loop");
    if (!(l.length_km > 0.0)) throw ValidationError("link " + name + " must have length_km > 0");
    if (!(l.free_flow_kmh > 0.0) || !(l.towing_kmh > 0.0)) {
      throw ValidationError("link " + name + " must have positive speeds");
    }
    if (l.towing_kmh > l.free_flow_kmh) {
      throw ValidationError("link " + name + " has towing speed above free-flow speed");
    }
    if (!data->index.emplace(std::make_pair(l.from, l.to), i).second) {
      throw ValidationError("duplicate link " + name);
    }
  }
  for (const auto& [id, kind] : data->nodes) data->outgoing[id];
  for (const Link& l : data->links) data->outgoing[l.from].push_back(&l);
  for (auto& [id, out] : data->outgoing) {
    std::sort(out.begin(), out.end(), [](const Link* a, const Link* b) { return a->to < b->to; });
  }
  data_ = std::move(data);
}

NodeKind RoadNetwork::kind(NodeId node) const {
  auto it = data_->nodes.find(node);
  if (it == data_->nodes.end()) throw InconsistentRoute("unknown node " + std::to_string(node));
  return it->second;
}

std::vector<NodeId> RoadNetwork::workshops() const {
  std::vector<NodeId> out;
  for (const auto& [id, kind] : data_->nodes) {
    if (kind == NodeKind::workshop) out.push_back(id);
  }
  return out;
}

const Link* RoadNetwork::find_link(NodeId from, NodeId to) const {
  auto it = data_->index.find({from, to});
  return it == data_->index.end() ? nullptr : &data_->links[it->second];
}

const Link& RoadNetwork::link(NodeId from, NodeId to) const {
  const Link* l = find_link(from, to);
  if (l == nullptr) throw InconsistentRoute("no link " + link_name(from, to));
  return *l;
}

std::span<const Link* const> RoadNetwork::outgoing(NodeId node) const {
  auto it = data_->outgoing.find(node);
  if (it == data_->outgoing.end()) return {};
  return it->second;
}

double RoadNetwork::length_km(const Route& route) const {
  double total = 0.0;
  for (std::size_t i = 1; i < route.nodes.size(); ++i) {
    total += link(route.nodes[i - 1], route.nodes[i]).length_km;
  }
  return total;
}

double RoadNetwork::hours(const Route& route, TravelView view) const {
  double total = 0.0;
  for (std::size_t i = 1; i < route.nodes.size(); ++i) {
    total += link(route.nodes[i - 1], route.nodes[i]).hours(view);
  }
  return total;
}

PathResult shortest_path(const RoadNetwork& network, TravelView view, NodeId from, NodeId to) {
  if (!network.has_node(from) || !network.has_node(to)) {
    throw NoPath("unknown node in shortest path query " + link_name(from, to));
  }
  auto labels = single_source(network, view, from);
  auto it = labels.find(to);
  if (it == labels.end()) {
    throw NoPath("node " + std::to_string(to) + " unreachable from " + std::to_string(from));
  }
  return it->second;
}

PathTable::PathTable(const RoadNetwork& network, TravelView view) : view_(view) {
  for (const auto& [source, kind] : network.nodes()) {
    for (auto& [target, path] : single_source(network, view, source)) {
      paths_.emplace(std::make_pair(source, target), std::move(path));
    }
  }
}

const PathResult* PathTable::find(NodeId from, NodeId to) const {
  auto it = paths_.find({from, to});
  return it == paths_.end() ? nullptr : &it->second;
}

const PathResult& PathTable::at(NodeId from, NodeId to) const {
  const PathResult* p = find(from, to);
  if (p == nullptr) {
    throw NoPath("node " + std::to_string(to) + " unreachable from " + std::to_string(from));
  }
  return *p;
}

std::vector<Route> enumerate_simple_routes(const RoadNetwork& network, NodeId start,
                                           const std::set<NodeId>& targets,
                                           const std::set<NodeId>& forbidden_via,
                                           std::size_t max_hops) {
  std::vector<Route> found;
  if (!network.has_node(start)) return found;

  Route path{{start}};
  std::set<NodeId> on_path{start};

  // Depth-first over simple paths. A forbidden node may only close a route.
  auto visit = [&](auto&& self, NodeId node) -> void {
    if (targets.contains(node)) found.push_back(path);
    if (forbidden_via.contains(node)) return;
    if (path.hop_count() >= max_hops) return;
    for (const Link* link : network.outgoing(node)) {
      if (on_path.contains(link->to)) continue;
      path.nodes.push_back(link->to);
      on_path.insert(link->to);
      self(self, link->to);
      on_path.erase(link->to);
      path.nodes.pop_back();
    }
  };
  visit(visit, start);
  std::sort(found.begin(), found.end());
  return found;
}

DrivePath::DrivePath(const RoadNetwork& network, const NetworkPosition& origin, const Route& route)
    : origin_(origin) {
  const Link& first = network.link(origin.from, origin.to);
  if (origin.offset_km < -kDistanceTol || origin.offset_km > first.length_km + kDistanceTol) {
    throw InconsistentRoute("origin offset outside link " + link_name(origin.from, origin.to));
  }
  if (route.nodes.empty() || route.front() != origin.to) {
    throw InconsistentRoute("route must start at node " + std::to_string(origin.to));
  }
  const double start_offset = std::clamp(origin.offset_km, 0.0, first.length_km);
  segments_.push_back(Segment{&first, start_offset, first.length_km - start_offset, 0.0, 0.0});
  length_km_ = segments_.back().length_km;
  free_flow_h_ = first.hours(TravelView::free_flow, segments_.back().length_km);
  for (std::size_t i = 1; i < route.nodes.size(); ++i) {
    const Link& l = network.link(route.nodes[i - 1], route.nodes[i]);
    segments_.push_back(Segment{&l, 0.0, l.length_km, length_km_, free_flow_h_});
    length_km_ += l.length_km;
    free_flow_h_ += l.hours(TravelView::free_flow);
  }
}

double DrivePath::hours(TravelView view) const {
  if (view == TravelView::free_flow) return free_flow_h_;
  double total = 0.0;
  for (const Segment& seg : segments_) total += seg.link->hours(view, seg.length_km);
  return total;
}

std::size_t DrivePath::segment_at(double s_km) const {
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (s_km < segments_[k].start_km + segments_[k].length_km) return k;
  }
  return segments_.size() - 1;
}

double DrivePath::distance_at(std::size_t index, double offset_km) const {
  const Segment& seg = segments_.at(index);
  return seg.start_km + (offset_km - seg.start_offset_km);
}

NetworkPosition DrivePath::position_at(double s_km, NodeSnap snap) const {
  if (s_km < -kDistanceTol || s_km > length_km_ + kDistanceTol) {
    std::ostringstream msg;
    msg << "distance " << s_km << " km outside drive of " << length_km_ << " km";
    throw OutOfRange(msg.str());
  }
  if (s_km <= kDistanceTol) return origin_;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const Segment& seg = segments_[k];
    const double end = seg.start_km + seg.length_km;
    if (s_km < end - kDistanceTol) {
      return {seg.link->from, seg.link->to, seg.start_offset_km + (s_km - seg.start_km)};
    }
    if (s_km <= end + kDistanceTol) {
      if (snap == NodeSnap::outgoing && k + 1 < segments_.size()) {
        const Link* next = segments_[k + 1].link;
        return {next->from, next->to, 0.0};
      }
      return {seg.link->from, seg.link->to, seg.start_offset_km + seg.length_km};
    }
  }
  const Segment& last = segments_.back();
  return {last.link->from, last.link->to, last.start_offset_km + last.length_km};
}

double DrivePath::free_flow_hours_to(double s_km) const {
  if (s_km < -kDistanceTol || s_km > length_km_ + kDistanceTol) {
    std::ostringstream msg;
    msg << "distance " << s_km << " km outside drive of " << length_km_ << " km";
    throw OutOfRange(msg.str());
  }
  const Segment& seg = segments_[segment_at(s_km)];
  const double within = std::clamp(s_km - seg.start_km, 0.0, seg.length_km);
  return seg.start_free_flow_h + seg.link->hours(TravelView::free_flow, within);
}

NetworkPosition position_at_distance(const RoadNetwork& network, const NetworkPosition& origin,
                                     const Route& route, double s_km) {
  return DrivePath(network, origin, route).position_at(s_km);
}

double route_travel_time(const RoadNetwork& network, TravelView view,
                         const NetworkPosition& origin, const Route& route) {
  if (route.nodes.empty()) return 0.0;
  return DrivePath(network, origin, route).hours(view);
}

}  // namespace faultplan
