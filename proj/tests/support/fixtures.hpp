#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <random>
#include <vector>

#include "faultplan/scenario.hpp"

namespace fixtures {

inline const faultplan::Scenario& case1() {
  static const faultplan::Scenario s = faultplan::load_bundled_scenario("e4_case1");
  return s;
}

inline const faultplan::Scenario& case2() {
  static const faultplan::Scenario s = faultplan::load_bundled_scenario("e4_case2");
  return s;
}

inline const faultplan::Scenario& breakdown110() {
  static const faultplan::Scenario s = faultplan::load_bundled_scenario("e4_breakdown110");
  return s;
}

/// Small seeded generator for hand-rolled property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  /// Connected random network: workshops 1..w, traffic nodes, customer last.
  /// Every pair is linked in both directions with random lengths and types.
  faultplan::RoadNetwork network(int workshops, int traffic, double extra_link_prob = 0.35) {
    using namespace faultplan;
    const int n = workshops + traffic + 1;
    std::map<NodeId, NodeKind> nodes;
    for (int id = 1; id <= n; ++id) {
      nodes[id] = id <= workshops ? NodeKind::workshop
                                  : (id == n ? NodeKind::customer : NodeKind::traffic);
    }
    std::vector<Link> links;
    auto add_pair = [&](NodeId a, NodeId b) {
      const bool motorway = coin(0.6);
      const double km = static_cast<double>(integer(2, 12)) * 5.0;
      const double ff = motorway ? 100.0 : 80.0;
      links.push_back({a, b, km, motorway ? RoadType::motorway : RoadType::country, ff, 30.0});
      links.push_back({b, a, km, motorway ? RoadType::motorway : RoadType::country, ff, 30.0});
    };
    std::set<std::pair<int, int>> linked;
    // Random spanning tree first so that everything is reachable.
    for (int id = 2; id <= n; ++id) {
      const int other = integer(1, id - 1);
      linked.insert({other, id});
      add_pair(other, id);
    }
    for (int a = 1; a <= n; ++a) {
      for (int b = a + 1; b <= n; ++b) {
        if (!linked.contains({a, b}) && coin(extra_link_prob)) {
          linked.insert({a, b});
          add_pair(a, b);
        }
      }
    }
    return RoadNetwork(std::move(nodes), std::move(links));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace fixtures
