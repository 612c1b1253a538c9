#pragma once

#include <string_view>

#include "faultplan/network.hpp"

namespace faultplan {

enum class DecisionKind { maintenance_first, deliver_first };

std::string_view to_string(DecisionKind kind);

/// An ordered pair of routes: the first mission, then the second. Both start
/// at the end of the previous leg; the first starts at the downstream node of
/// the alarm link.
struct Decision {
  int index = 0;  ///< 1-based position in the generated decision list
  DecisionKind kind = DecisionKind::maintenance_first;
  Route first;
  Route second;
  double first_km = 0.0;   ///< alarm position to end of `first`
  double second_km = 0.0;  ///< length of `second`

  /// Workshop where the vehicle is maintained if it does not break down.
  NodeId planned_workshop() const {
    return kind == DecisionKind::maintenance_first ? first.back() : second.back();
  }

  /// Route driven before maintenance (both legs when delivering first).
  Route pre_maintenance_route() const {
    return kind == DecisionKind::maintenance_first ? first : concatenate(first, second);
  }

  /// Distance driven before maintenance.
  double pre_maintenance_km() const {
    return kind == DecisionKind::maintenance_first ? first_km : first_km + second_km;
  }

  bool operator==(const Decision&) const = default;
};

}  // namespace faultplan
