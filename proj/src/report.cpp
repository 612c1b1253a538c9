#include "faultplan/report.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "faultplan/version.hpp"

namespace faultplan {

Provenance provenance_of(const Scenario& scenario) {
  return {kVersion, scenario.id, scenario_hash(scenario)};
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::json json_cell(const Cell& cell) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(const std::string& s) const { return s; }
    nlohmann::json operator()(long long v) const { return v; }
    nlohmann::json operator()(double v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::json provenance_json(const Provenance& prov) {
  return {{"tool_version", prov.tool_version},
          {"scenario", prov.scenario_id},
          {"scenario_hash", prov.scenario_hash}};
}

Cell optional_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{};
}

long long as_index(std::size_t position) { return static_cast<long long>(position) + 1; }

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += sep;
    out += parts[k];
  }
  return out;
}

}  // namespace

std::string to_csv(const Table& table, const Provenance& prov) {
  std::ostringstream out;
  out << "# faultplan " << prov.tool_version << " scenario=" << prov.scenario_id
      << " hash=" << prov.scenario_hash << "\n";
  std::vector<std::string> header;
  for (const auto& c : table.columns) header.push_back(csv_escape(c));
  out << join(header, ',') << "\n";
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    for (const auto& c : row) cells.push_back(csv_cell(c));
    out << join(cells, ',') << "\n";
  }
  return out.str();
}

nlohmann::json to_json(const Table& table, const Provenance& prov) {
  nlohmann::json doc = provenance_json(prov);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t k = 0; k < table.columns.size() && k < row.size(); ++k) {
      obj[table.columns[k]] = json_cell(row[k]);
    }
    rows.push_back(std::move(obj));
  }
  doc["columns"] = table.columns;
  doc["rows"] = std::move(rows);
  return doc;
}

std::string route_string(const Route& route) {
  std::vector<std::string> parts;
  for (NodeId n : route.nodes) parts.push_back(std::to_string(n));
  return join(parts, '-');
}

nlohmann::json clock_json(ClockTime t) {
  return {{"clock", t.to_string()}, {"hours", t.hours()}};
}

Table decisions_table(const Evaluation& ev) {
  Table t;
  t.columns = {"index", "kind", "workshop", "first_route", "second_route", "first_km", "second_km"};
  for (const Decision& d : ev.decisions) {
    t.rows.push_back({static_cast<long long>(d.index), std::string(to_string(d.kind)),
                      static_cast<long long>(d.planned_workshop()), route_string(d.first),
                      route_string(d.second), d.first_km, d.second_km});
  }
  return t;
}

Table risks_table(const Evaluation& ev) {
  Table t;
  t.columns = {"index", "kind", "rs1_public_time_loss_vehh", "rs2_mission_delay_h", "on_front",
               "dominated_by"};
  const ParetoResult& p = ev.pareto;
  for (std::size_t k = 0; k < ev.decisions.size(); ++k) {
    const Decision& d = ev.decisions[k];
    Cell by;
    if (p.dominated_by[k]) by = as_index(*p.dominated_by[k]);
    t.rows.push_back({static_cast<long long>(d.index), std::string(to_string(d.kind)),
                      p.points[k].public_time_loss_vehh, p.points[k].mission_delay_h,
                      static_cast<long long>(p.on_front(k) ? 1 : 0), by});
  }
  return t;
}

Table change_rate_table(const Evaluation& ev, int baseline_index) {
  const auto rates =
      change_rates(ev.pareto.points, static_cast<std::size_t>(baseline_index - 1));
  Table t;
  t.columns = {"index", "kind", "baseline", "rs1_change_pct", "rs2_change_pct"};
  for (std::size_t k = 0; k < ev.decisions.size(); ++k) {
    t.rows.push_back({static_cast<long long>(ev.decisions[k].index),
                      std::string(to_string(ev.decisions[k].kind)),
                      static_cast<long long>(baseline_index),
                      optional_cell(rates[k].public_time_loss_pct),
                      optional_cell(rates[k].mission_delay_pct)});
  }
  return t;
}

Table queue_trace_table(const QueueTrace& trace) {
  Table t;
  t.columns = {"t_clock",         "t_hours",       "eta_veh",           "in_veh_per_h",
               "cap_veh_per_h",   "out_veh_per_h", "cum_in_veh",        "cum_out_veh"};
  for (const QueueSample& s : trace.samples) {
    t.rows.push_back({s.t.to_string(), s.t.hours(), s.queue_veh, s.inflow_vph, s.capacity_vph,
                      s.outflow_vph, s.cumulative_in_veh, s.cumulative_out_veh});
  }
  return t;
}

Table sweep_table(const std::vector<SweepCase>& cases) {
  Table t;
  t.columns = {"z",           "alarm_from",       "alarm_to",         "alarm_offset_km",
               "deadline",    "mu_km",            "min_ratio",        "max_ratio",
               "min_ratio_decision", "max_ratio_decision", "max_ratio_kind", "front_size",
               "front_kinds", "front",            "infinite_ratios"};
  for (const SweepCase& c : cases) {
    const auto& decisions = c.evaluation.decisions;
    const auto& front = c.evaluation.pareto.front;
    std::set<std::string> kinds;
    std::vector<std::string> members;
    for (std::size_t i : front) {
      kinds.insert(std::string(to_string(decisions[i].kind)));
      members.push_back(std::to_string(decisions[i].index));
    }
    Cell min_dec, max_dec, max_kind;
    if (c.min_ratio_position) min_dec = as_index(*c.min_ratio_position);
    if (c.max_ratio_position) {
      max_dec = as_index(*c.max_ratio_position);
      max_kind = std::string(to_string(decisions[*c.max_ratio_position].kind));
    }
    const NetworkPosition& at = c.scenario.alarm.location;
    t.rows.push_back({static_cast<long long>(c.z), static_cast<long long>(at.from),
                      static_cast<long long>(at.to), at.offset_km, c.scenario.deadline.to_string(),
                      c.scenario.alarm.breakdown.mu_km(), optional_cell(c.min_ratio),
                      optional_cell(c.max_ratio), min_dec, max_dec, max_kind,
                      static_cast<long long>(front.size()),
                      join({kinds.begin(), kinds.end()}, ';'), join(members, ';'),
                      static_cast<long long>(c.infinite_ratios)});
  }
  return t;
}

nlohmann::json pareto_json(const Evaluation& ev, const Provenance& prov) {
  nlohmann::json doc = provenance_json(prov);
  nlohmann::json front = nlohmann::json::array();
  for (std::size_t i : ev.pareto.front) front.push_back(ev.decisions[i].index);
  nlohmann::json dominated = nlohmann::json::object();
  for (std::size_t k = 0; k < ev.decisions.size(); ++k) {
    if (ev.pareto.dominated_by[k]) {
      dominated[std::to_string(ev.decisions[k].index)] = as_index(*ev.pareto.dominated_by[k]);
    }
  }
  doc["front"] = std::move(front);
  doc["dominated_by"] = std::move(dominated);
  return doc;
}

nlohmann::json timeline_json(const TraceResult& tr, const Provenance& prov) {
  nlohmann::json doc = provenance_json(prov);
  const BreakdownEvent& e = tr.event;
  doc["s_km"] = e.s_km;
  doc["breakdown_position"] = {
      {"from", e.position.from}, {"to", e.position.to}, {"offset_km", e.position.offset_km}};
  doc["road_type"] = std::string(to_string(e.tow.road_type));
  doc["tow"] = {{"workshop", e.tow.workshop},
                {"route", e.tow.tow_route.nodes},
                {"reach_h", e.tow.reach_h},
                {"tow_h", e.tow.tow_h},
                {"exit_km", e.tow.exit_km},
                {"exit_tow_h", e.tow.exit_tow_h}};
  doc["events"] = {{"t_b", clock_json(e.timeline.breakdown)},
                   {"t_t", clock_json(e.timeline.tow_start)},
                   {"t_e", clock_json(e.timeline.motorway_exit)},
                   {"t_workshop", clock_json(e.timeline.workshop_arrival)},
                   {"t_b_rel", clock_json(tr.reference.breakdown)},
                   {"t_t_rel", clock_json(tr.reference.tow_start)},
                   {"t_w", clock_json(tr.reference.tow_at_exit)},
                   {"t_d", clock_json(tr.queue.dissipation)}};
  doc["public_time_loss_vehh"] = tr.queue.total_loss_vehh;
  doc["peak_queue_veh"] = tr.queue.peak_queue_veh;
  doc["mission_delay_h"] = tr.delay.delay_h;
  doc["customer_arrival"] = clock_json(tr.delay.arrival);
  return doc;
}

nlohmann::json run_report_json(const Evaluation& ev, const ModelOptions& options,
                               const Provenance& prov) {
  nlohmann::json doc = provenance_json(prov);
  doc["config"] = {{"step_km", options.quadrature_step_km},
                   {"step_min", options.integration_step_min},
                   {"inflow_reference", std::string(to_string(options.inflow_reference))},
                   {"max_route_hops", options.max_route_hops}};
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < ev.decisions.size(); ++k) {
    const Decision& d = ev.decisions[k];
    rows.push_back({{"index", d.index},
                    {"kind", std::string(to_string(d.kind))},
                    {"first_route", d.first.nodes},
                    {"second_route", d.second.nodes},
                    {"first_km", d.first_km},
                    {"second_km", d.second_km},
                    {"rs1_public_time_loss_vehh", ev.pareto.points[k].public_time_loss_vehh},
                    {"rs2_mission_delay_h", ev.pareto.points[k].mission_delay_h}});
  }
  doc["decisions"] = std::move(rows);
  nlohmann::json front = nlohmann::json::array();
  for (std::size_t i : ev.pareto.front) front.push_back(ev.decisions[i].index);
  doc["front"] = std::move(front);
  return doc;
}

}  // namespace faultplan
