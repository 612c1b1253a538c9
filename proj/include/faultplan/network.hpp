#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

namespace faultplan {

using NodeId = int;

enum class NodeKind { workshop, traffic, customer };
enum class RoadType { motorway, country };

/// Which link travel times a query uses: the ego vehicle / tow truck at
/// free flow, or a tow truck pulling the broken-down vehicle.
enum class TravelView { free_flow, towing };

std::string_view to_string(NodeKind kind);
std::string_view to_string(RoadType type);
NodeKind node_kind_from_string(std::string_view text);
RoadType road_type_from_string(std::string_view text);

struct Link {
  NodeId from = 0;
  NodeId to = 0;
  double length_km = 0.0;
  RoadType road_type = RoadType::motorway;
  double free_flow_kmh = 0.0;
  double towing_kmh = 0.0;

  double speed_kmh(TravelView view) const {
    return view == TravelView::free_flow ? free_flow_kmh : towing_kmh;
  }
  double hours(TravelView view) const { return length_km / speed_kmh(view); }
  double hours(TravelView view, double distance_km) const {
    return distance_km / speed_kmh(view);
  }

  bool operator==(const Link&) const = default;
};

/// A point on a directed link, `offset_km` from its upstream node.
struct NetworkPosition {
  NodeId from = 0;
  NodeId to = 0;
  double offset_km = 0.0;

  bool operator==(const NetworkPosition&) const = default;
};

/// Node sequence; consecutive pairs are links. A route with fewer than two
/// nodes contains no links.
struct Route {
  std::vector<NodeId> nodes;

  bool has_links() const { return nodes.size() >= 2; }
  std::size_t hop_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  NodeId front() const { return nodes.front(); }
  NodeId back() const { return nodes.back(); }
  bool contains(NodeId node) const;

  auto operator<=>(const Route&) const = default;
  bool operator==(const Route&) const = default;
};

/// Appends `tail` to `head`; `tail` must start where `head` ends.
Route concatenate(const Route& head, const Route& tail);

/// Directed road graph with free-flow and towing travel times per link.
/// Immutable after construction.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  /// Throws ValidationError when an invariant is violated.
  RoadNetwork(std::map<NodeId, NodeKind> nodes, std::vector<Link> links);

  const std::map<NodeId, NodeKind>& nodes() const { return data_->nodes; }
  std::span<const Link> links() const { return data_->links; }
  bool has_node(NodeId node) const { return data_->nodes.contains(node); }
  NodeKind kind(NodeId node) const;

  std::vector<NodeId> workshops() const;
  NodeId customer() const { return data_->customer; }

  const Link* find_link(NodeId from, NodeId to) const;
  /// Throws InconsistentRoute when (from, to) is not a link.
  const Link& link(NodeId from, NodeId to) const;
  /// Outgoing links of `node`, ordered by head node id.
  std::span<const Link* const> outgoing(NodeId node) const;

  double length_km(const Route& route) const;
  double hours(const Route& route, TravelView view) const;

  friend bool operator==(const RoadNetwork& a, const RoadNetwork& b) {
    return a.nodes() == b.nodes() && std::equal(a.links().begin(), a.links().end(),
                                                b.links().begin(), b.links().end());
  }

 private:
  // Shared so that copies stay cheap and Link pointers handed out by one copy
  // remain valid for as long as any copy lives.
  struct Data {
    std::map<NodeId, NodeKind> nodes;
    std::vector<Link> links;
    std::map<NodeId, std::vector<const Link*>> outgoing;
    std::map<std::pair<NodeId, NodeId>, std::size_t> index;
    NodeId customer = 0;
  };
  std::shared_ptr<const Data> data_ = std::make_shared<const Data>();
};

struct PathResult {
  Route route;
  double hours = 0.0;
};

/// Minimum travel time path. Among equal-time paths the lexicographically
/// smallest node sequence wins. `from == to` yields the single-node route.
/// Throws NoPath.
PathResult shortest_path(const RoadNetwork& network, TravelView view, NodeId from, NodeId to);

/// All-pairs shortest paths under one view, computed once.
class PathTable {
 public:
  PathTable(const RoadNetwork& network, TravelView view);

  TravelView view() const { return view_; }
  /// nullptr when `to` is unreachable from `from`.
  const PathResult* find(NodeId from, NodeId to) const;
  /// Throws NoPath.
  const PathResult& at(NodeId from, NodeId to) const;

 private:
  TravelView view_;
  std::map<std::pair<NodeId, NodeId>, PathResult> paths_;
};

/// Every simple route from `start` ending at a member of `targets`, skipping
/// routes that visit a `forbidden_via` node before their last node. Routes
/// longer than `max_hops` links are not explored. Sorted lexicographically.
/// A single-node route is included when `start` is itself a target.
std::vector<Route> enumerate_simple_routes(const RoadNetwork& network, NodeId start,
                                           const std::set<NodeId>& targets,
                                           const std::set<NodeId>& forbidden_via,
                                           std::size_t max_hops = 20);

/// Where a position that lands exactly on a node is reported.
enum class NodeSnap {
  outgoing,  ///< offset 0 on the next link of the route (default)
  incoming,  ///< end of the link just driven
};

/// A drive that starts mid-link at `origin`, finishes that link, then follows
/// `route` (which must start at origin.to). Cumulative distances and times are
/// precomputed so that repeated queries along the same drive stay cheap.
class DrivePath {
 public:
  struct Segment {
    const Link* link = nullptr;
    double start_offset_km = 0.0;  ///< where on the link the segment begins
    double length_km = 0.0;        ///< driven portion of the link
    double start_km = 0.0;         ///< cumulative distance at segment start
    double start_free_flow_h = 0.0;
  };

  /// Throws InconsistentRoute.
  DrivePath(const RoadNetwork& network, const NetworkPosition& origin, const Route& route);

  double length_km() const { return length_km_; }
  double hours(TravelView view) const;
  std::span<const Segment> segments() const { return segments_; }
  const NetworkPosition& origin() const { return origin_; }

  /// Throws OutOfRange when s_km is negative or past the end.
  NetworkPosition position_at(double s_km, NodeSnap snap = NodeSnap::outgoing) const;
  /// Free-flow driving time over the first s_km. Throws OutOfRange.
  double free_flow_hours_to(double s_km) const;
  /// Index of the segment holding distance s_km (last segment at the end).
  std::size_t segment_at(double s_km) const;
  /// Distance driven when reaching `offset_km` on segment `index`'s link.
  double distance_at(std::size_t index, double offset_km) const;

 private:
  NetworkPosition origin_;
  std::vector<Segment> segments_;
  double length_km_ = 0.0;
  double free_flow_h_ = 0.0;
};

/// The point reached after driving s_km from `origin` along `route`.
NetworkPosition position_at_distance(const RoadNetwork& network, const NetworkPosition& origin,
                                     const Route& route, double s_km);

/// Travel time from `origin` to the end of `route`. A route without nodes
/// means no travel.
double route_travel_time(const RoadNetwork& network, TravelView view,
                         const NetworkPosition& origin, const Route& route);

}  // namespace faultplan
