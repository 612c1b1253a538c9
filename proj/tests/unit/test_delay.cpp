#include <gtest/gtest.h>

#include "faultplan/decision_engine.hpp"
#include "faultplan/delay.hpp"
#include "faultplan/error.hpp"
#include "fixtures.hpp"

using namespace faultplan;

namespace {

const std::vector<Decision>& decisions() {
  static const auto d = generate_decisions(fixtures::case1());
  return d;
}

const Decision& decision(int index) { return decisions().at(static_cast<std::size_t>(index - 1)); }

}  // namespace

TEST(MissionDelay, MaintainAtThreeWithoutBreakdown) {
  const auto out = mission_delay(fixtures::case1(), decision(5), 95.0);
  EXPECT_FALSE(out.breakdown);
  EXPECT_EQ(out.arrival.to_string(), "14:18");
  EXPECT_NEAR(out.delay_h, 1.3, 1e-9);
}

TEST(MissionDelay, HandSumsWithoutBreakdown) {
  // Alarm 10:00, 20 km to node 9, deadline 13:00, 2 h maintenance.
  // 1: 80 km country + 45 km motorway, then 315 km back to the customer.
  EXPECT_NEAR(mission_delay_without_breakdown(fixtures::case1(), decision(1)).delay_h,
              0.2 + 1.0 + 0.45 + 2.0 + 3.15 - 3.0, 1e-9);
  // 3: 40 km country to workshop 2, then 40 km country + 210 km motorway.
  EXPECT_NEAR(mission_delay_without_breakdown(fixtures::case1(), decision(3)).delay_h,
              0.2 + 0.5 + 2.0 + 0.5 + 2.1 - 3.0, 1e-9);
  // 7: maintain at 5, 40 km on to the customer.
  EXPECT_NEAR(mission_delay_without_breakdown(fixtures::case1(), decision(7)).delay_h,
              0.2 + 1.7 + 2.0 + 0.4 - 3.0, 1e-9);
}

TEST(MissionDelay, DeliverFirstIsOnTimeWithoutBreakdown) {
  for (int i : {8, 9}) {
    EXPECT_EQ(mission_delay(fixtures::case1(), decision(i), 1000.0).delay_h, 0.0);
    EXPECT_EQ(mission_delay(fixtures::case1(), decision(i), decision(i).first_km + 1.0).delay_h,
              0.0);
  }
}

TEST(MissionDelay, PlannedRouteBreakdownAtOneTen) {
  const auto out = mission_delay(fixtures::case1(), decision(8), 110.0);
  EXPECT_TRUE(out.breakdown);
  // 12:38 at workshop 3, 4 h repair, 1.4 h to the customer.
  EXPECT_NEAR(out.delay_h, 12.0 + 38.0 / 60.0 + 4.0 + 1.4 - 13.0, 1e-9);
}

TEST(MissionDelay, NegativeDistanceRejected) {
  EXPECT_THROW(mission_delay(fixtures::case1(), decision(1), -0.1), OutOfRange);
}

TEST(MissionDelay, ConstantBeyondFirstLegForMaintenanceFirst) {
  for (int i = 1; i <= 7; ++i) {
    const double d1 = decision(i).first_km;
    const double ref = mission_delay(fixtures::case1(), decision(i), d1).delay_h;
    for (double extra : {0.1, 10.0, 300.0}) {
      EXPECT_EQ(mission_delay(fixtures::case1(), decision(i), d1 + extra).delay_h, ref);
    }
  }
}

TEST(MissionDelay, NonNegativeAndMonotoneInDeadline) {
  Scenario s = fixtures::case1();
  for (int i = 1; i <= 9; ++i) {
    for (double km = 0.0; km < 400.0; km += 13.0) {
      double last = INFINITY;
      for (double dl : {10.5, 12.0, 13.0, 15.0, 20.0}) {
        s.deadline = ClockTime::from_hours(dl);
        const double d = mission_delay(s, decision(i), km).delay_h;
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, last + 1e-12);
        last = d;
      }
    }
  }
}

TEST(MissionDelay, ShiftingAlarmAndDeadlineTogether) {
  Scenario later = fixtures::case1();
  later.alarm.time = later.alarm.time.plus_hours(7.25);
  later.deadline = later.deadline.plus_hours(7.25);
  for (int i = 1; i <= 9; ++i) {
    for (double km = 0.0; km < 300.0; km += 7.0) {
      EXPECT_NEAR(mission_delay(later, decision(i), km).delay_h,
                  mission_delay(fixtures::case1(), decision(i), km).delay_h, 1e-9);
    }
  }
}
