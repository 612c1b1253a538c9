#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "faultplan/error.hpp"
#include "faultplan/scenario.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace faultplan;
using nlohmann::json;

namespace {

json case1_doc() { return json::parse(*bundled_scenario_text("e4_case1")); }

}  // namespace

TEST(Clock, ParseAndFormat) {
  EXPECT_EQ(ClockTime::parse("11:06").minutes(), 666.0);
  EXPECT_EQ(ClockTime::parse("13:27:20").to_string(), "13:27:20");
  EXPECT_EQ(ClockTime::parse("13:27:20").to_hhmm(), "13:27");
  EXPECT_EQ(ClockTime::from_hours(25.5).to_string(), "25:30");
  EXPECT_THROW(ClockTime::parse("1130"), std::invalid_argument);
  EXPECT_THROW(ClockTime::parse("11:75"), std::invalid_argument);
}

TEST(Scenario, BundledCaseOne) {
  const Scenario& s = fixtures::case1();
  EXPECT_EQ(s.id, "e4_case1");
  EXPECT_EQ(s.network.nodes().size(), 13u);
  EXPECT_EQ(s.network.links().size(), 28u);
  EXPECT_EQ(s.network.workshops().size(), 5u);
  EXPECT_EQ(s.alarm.location, (NetworkPosition{8, 9, 10.0}));
  EXPECT_EQ(s.alarm.time, ClockTime::parse("10:00"));
  EXPECT_EQ(s.deadline, ClockTime::parse("13:00"));
  EXPECT_EQ(s.remaining_planned_route().nodes, (std::vector<NodeId>{9, 10, 3, 11, 4, 5, 13}));
  EXPECT_EQ(bundled_scenario_names(),
            (std::vector<std::string>{"e4_breakdown110", "e4_case1", "e4_case2"}));
}

TEST(Scenario, LinkSpeedsFollowRoadType) {
  const Link& m = fixtures::case1().network.link(3, 11);
  EXPECT_EQ(m.free_flow_kmh, 100.0);
  EXPECT_EQ(m.towing_kmh, 30.0);
  const Link& c = fixtures::case1().network.link(9, 2);
  EXPECT_EQ(c.free_flow_kmh, 80.0);
  EXPECT_EQ(c.towing_kmh, 30.0);
}

TEST(Scenario, RoundTripIsStable) {
  for (const auto& name : bundled_scenario_names()) {
    const Scenario a = load_bundled_scenario(name);
    const Scenario b = load_scenario(to_json(a));
    EXPECT_EQ(a, b) << name;
    EXPECT_EQ(to_json(a), to_json(b)) << name;
    EXPECT_EQ(scenario_hash(a), scenario_hash(b));
  }
  EXPECT_NE(scenario_hash(fixtures::case1()), scenario_hash(fixtures::case2()));
}

TEST(Scenario, SchemaErrorsCarryPath) {
  json doc = case1_doc();
  doc["capacities"].erase("q_b");
  try {
    load_scenario(doc);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "/capacities/q_b");
  }
  doc = case1_doc();
  doc["network"]["links"][0]["road_type"] = "gravel";
  EXPECT_THROW(load_scenario(doc), SchemaError);
  doc = case1_doc();
  doc["fault"]["alarm_time"] = "ten o'clock";
  EXPECT_THROW(load_scenario(doc), SchemaError);
}

TEST(Scenario, ValidationErrors) {
  json doc = case1_doc();
  doc["capacities"]["q_b"] = 2500;
  EXPECT_THROW(load_scenario(doc), ValidationError);

  doc = case1_doc();
  doc["fault"]["distribution"] = {{"kind", "normal"}, {"mu_km", 280}, {"sigma_km", 0}};
  EXPECT_THROW(load_scenario(doc), ValidationError);

  doc = case1_doc();
  doc["fault"]["offset_km"] = 31;
  EXPECT_THROW(load_scenario(doc), ValidationError);

  doc = case1_doc();
  doc["mission"]["deadline"] = "09:00";
  EXPECT_THROW(load_scenario(doc), ValidationError);

  doc = case1_doc();
  doc["maintenance"]["default"]["broken_down_h"] = 1;
  EXPECT_THROW(load_scenario(doc), ValidationError);

  doc = case1_doc();
  doc["mission"]["planned_route"] = {6, 7, 9};
  EXPECT_THROW(load_scenario(doc), Error);
}

TEST(Scenario, FileAndNameLookup) {
  const auto dir = std::filesystem::temp_directory_path() / "faultplan_scenario_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "copy.json";
  std::ofstream(path) << *bundled_scenario_text("e4_case2");
  EXPECT_EQ(load_scenario_named(path.string()), fixtures::case2());
  EXPECT_EQ(load_scenario_named("e4_case2"), fixtures::case2());
  EXPECT_THROW(load_scenario_named("no_such_scenario"), SchemaError);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(load_scenario_file(dir / "bad.json"), SchemaError);
  std::filesystem::remove_all(dir);
}

TEST(TrafficProfile, DefaultE4Levels) {
  const TrafficProfile& p = fixtures::case1().traffic;
  EXPECT_DOUBLE_EQ(inflow_at(p, ClockTime::parse("20:00")), 900.0);
  EXPECT_DOUBLE_EQ(inflow_at(p, ClockTime::parse("11:30")), 1400.0);
  EXPECT_DOUBLE_EQ(inflow_at(p, ClockTime::parse("18:00")), 1150.0);
  EXPECT_DOUBLE_EQ(inflow_at(p, ClockTime::parse("06:30")), 900.0);
  EXPECT_FALSE(fixtures::case1().country_traffic.has_value());
}

TEST(TrafficProfile, ContinuousAtBreakpoints) {
  const TrafficProfile& p = fixtures::case1().traffic;
  for (const auto& [t, q] : p.breakpoints()) {
    EXPECT_DOUBLE_EQ(p.inflow_at(t), q);
    EXPECT_NEAR(p.inflow_at(ClockTime::from_minutes(t.minutes() - 1e-7)), q, 1e-3);
    EXPECT_NEAR(p.inflow_at(ClockTime::from_minutes(t.minutes() + 1e-7)), q, 1e-3);
  }
  using Points = std::vector<std::pair<ClockTime, double>>;
  EXPECT_THROW(TrafficProfile(Points{}), ValidationError);
  EXPECT_THROW(TrafficProfile(Points{{ClockTime::parse("02:00"), 1.0}, {ClockTime::parse("01:00"), 1.0}}),
               ValidationError);
}

TEST(Distribution, TruncatedNormalReferencePoints) {
  const auto d = BreakdownDistribution::normal(280, 70);
  EXPECT_NEAR(breakdown_cdf(d, 230), 0.233, 0.01);
  EXPECT_NEAR(breakdown_cdf(d, 280), 0.5, 3e-5);
  EXPECT_EQ(breakdown_cdf(d, 0), 0.0);
  EXPECT_EQ(breakdown_cdf(d, INFINITY), 1.0);
  for (double x : {5.0, 60.0, 150.0, 230.0, 280.0, 400.0, 600.0}) {
    EXPECT_NEAR(d.cdf(x), oracle::truncated_normal_cdf(280, 70, x), 1e-9) << x;
  }
}

TEST(Distribution, HeavyTruncation) {
  const auto d = BreakdownDistribution::normal(-50, 40);
  for (double x : {1.0, 10.0, 40.0, 100.0}) {
    EXPECT_NEAR(d.cdf(x), oracle::truncated_normal_cdf(-50, 40, x), 1e-8) << x;
  }
  double lo = 0, hi = 500;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (oracle::truncated_normal_cdf(-50, 40, mid) < 0.5 ? lo : hi) = mid;
  }
  EXPECT_NEAR(d.quantile(0.5), hi, 1e-6);
}

TEST(Distribution, EmpiricalAndPointMass) {
  const auto e = BreakdownDistribution::empirical({0, 100, 200}, {0, 1, 0});
  EXPECT_NEAR(e.cdf(100), 0.5, 1e-12);
  EXPECT_NEAR(e.cdf(50), 0.125, 1e-12);
  EXPECT_NEAR(e.pdf(100), 0.01, 1e-12);
  EXPECT_NEAR(e.quantile(0.125), 50, 1e-6);
  EXPECT_THROW(BreakdownDistribution::empirical({0, 100}, {1}), ValidationError);
  EXPECT_THROW(BreakdownDistribution::empirical({0, 100}, {0, 0}), ValidationError);

  const auto p = BreakdownDistribution::point_mass(110);
  EXPECT_EQ(p.cdf(109.9), 0.0);
  EXPECT_EQ(p.cdf(110), 1.0);
  EXPECT_EQ(p.atom(), 110.0);
  EXPECT_FALSE(BreakdownDistribution::normal(1, 1).atom());
}
