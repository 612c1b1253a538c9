#include "faultplan/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "faultplan/decision_engine.hpp"
#include "faultplan/error.hpp"
#include "faultplan/report.hpp"
#include "faultplan/version.hpp"

namespace faultplan {

namespace {

namespace fs = std::filesystem;

constexpr int kExitInput = 2;
constexpr int kExitComputation = 3;

/// Files to write, name to content, flushed only after a command succeeds.
using Outputs = std::map<std::string, std::string>;

struct CommonFlags {
  std::string scenario;
  std::string out_dir = ".";
  std::string format = "csv";
  double step_km = 1.0;
  double step_min = 0.5;
  std::string inflow_reference = "exit_fixed";
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("scenario", f.scenario, "Scenario file or bundled scenario name")->required();
  cmd->add_option("--out", f.out_dir, "Output directory");
  cmd->add_option("--format", f.format, "Table format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--step-km", f.step_km, "Widest quadrature cell in km")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--step-min", f.step_min, "Queue integration step in minutes")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--inflow-reference", f.inflow_reference, "Clock the inflow is read at")
      ->check(CLI::IsMember({"exit_fixed", "ego_position"}));
  cmd->add_option("--threads", f.threads, "Worker threads, 0 for one per core");
}

ModelOptions model_options(const CommonFlags& f) {
  ModelOptions o;
  o.quadrature_step_km = f.step_km;
  o.integration_step_min = f.step_min;
  o.inflow_reference = inflow_reference_from_string(f.inflow_reference);
  o.threads = f.threads;
  return o;
}

void add_table(Outputs& outputs, const std::string& stem, const Table& table,
               const Provenance& prov, const std::string& format) {
  if (format == "json") {
    outputs[stem + ".json"] = to_json(table, prov).dump(2) + "\n";
  } else {
    outputs[stem + ".csv"] = to_csv(table, prov);
  }
}

void write_outputs(const std::string& dir, const Outputs& outputs) {
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
  for (const auto& [name, content] : outputs) {
    std::ofstream file(root / name, std::ios::binary);
    file << content;
    if (!file) throw InputError("cannot write " + (root / name).string());
  }
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// ---------------------------------------------------------------------------

struct EvaluateFlags {
  int baseline = 0;
  std::size_t verify_samples = 0;
  std::uint64_t seed = 1;
};

Outputs cmd_evaluate(const CommonFlags& f, const EvaluateFlags& e, std::ostream& out) {
  const Scenario sc = load_scenario_named(f.scenario);
  const RiskEngine engine(sc, model_options(f));
  const Evaluation ev = evaluate_scenario(engine);
  const Provenance prov = provenance_of(sc);

  Outputs outputs;
  add_table(outputs, "decisions", decisions_table(ev), prov, f.format);
  add_table(outputs, "risks", risks_table(ev), prov, f.format);
  outputs["pareto.json"] = pareto_json(ev, prov).dump(2) + "\n";
  outputs["report.json"] = run_report_json(ev, engine.options(), prov).dump(2) + "\n";
  if (e.baseline != 0) {
    if (e.baseline < 1 || e.baseline > static_cast<int>(ev.decisions.size())) {
      throw OutOfRange("--baseline must name one of the " + std::to_string(ev.decisions.size()) +
                       " decisions");
    }
    add_table(outputs, "change_rates", change_rate_table(ev, e.baseline), prov, f.format);
  }
  if (e.verify_samples > 0) {
    Table t;
    t.columns = {"index", "rs1_quadrature", "rs1_monte_carlo", "rs1_stderr",
                 "rs2_quadrature", "rs2_monte_carlo", "rs2_stderr"};
    for (std::size_t k = 0; k < ev.decisions.size(); ++k) {
      const MonteCarloResult mc = engine.monte_carlo(ev.decisions[k], e.verify_samples, e.seed);
      const RiskPoint& q = ev.pareto.points[k];
      t.rows.push_back({static_cast<long long>(ev.decisions[k].index), q.public_time_loss_vehh,
                        mc.mean.public_time_loss_vehh, mc.standard_error.public_time_loss_vehh,
                        q.mission_delay_h, mc.mean.mission_delay_h,
                        mc.standard_error.mission_delay_h});
    }
    add_table(outputs, "monte_carlo", t, prov, f.format);
  }

  out << "scenario " << sc.id << ": " << ev.decisions.size() << " decisions\n";
  for (std::size_t k = 0; k < ev.decisions.size(); ++k) {
    const Decision& d = ev.decisions[k];
    out << std::setw(3) << d.index << "  " << std::left << std::setw(18) << to_string(d.kind)
        << std::right << std::setw(12) << fixed(ev.pareto.points[k].public_time_loss_vehh, 3)
        << std::setw(9) << fixed(ev.pareto.points[k].mission_delay_h, 3) << "  "
        << route_string(d.first) << " | " << route_string(d.second)
        << (ev.pareto.on_front(k) ? "  *" : "") << "\n";
  }
  out << "front:";
  for (std::size_t i : ev.pareto.front) out << " " << ev.decisions[i].index;
  out << "\n";
  return outputs;
}

struct TraceFlags {
  double s_km = 0.0;
  int decision = 0;
};

Outputs cmd_trace(const CommonFlags& f, const TraceFlags& t, std::ostream& out) {
  const Scenario sc = load_scenario_named(f.scenario);
  const ModelOptions options = model_options(f);
  const TowPlanner planner(sc);

  std::optional<DrivePath> drive;
  if (t.decision != 0) {
    const auto decisions = generate_decisions(RiskEngine(sc, options));
    if (t.decision < 1 || t.decision > static_cast<int>(decisions.size())) {
      throw OutOfRange("--decision must name one of the " + std::to_string(decisions.size()) +
                       " decisions");
    }
    drive.emplace(planner.pre_maintenance_drive(decisions[t.decision - 1]));
  } else {
    drive.emplace(sc.network, sc.alarm.location, sc.remaining_planned_route());
  }

  TraceResult tr;
  tr.event = planner.breakdown_along(*drive, t.s_km);
  tr.reference = map_to_exit_reference(tr.event.timeline, tr.event.tow);
  tr.queue = queue_trace(make_episode(sc, tr.event, options.inflow_reference), f.step_min);
  tr.delay = delay_after_breakdown(planner, tr.event);

  const Provenance prov = provenance_of(sc);
  Outputs outputs;
  outputs["timeline.json"] = timeline_json(tr, prov).dump(2) + "\n";
  add_table(outputs, "queue_trace", queue_trace_table(tr.queue), prov, f.format);

  const EventTimeline& tl = tr.event.timeline;
  out << "breakdown at link (" << tr.event.position.from << "," << tr.event.position.to
      << ") +" << fixed(tr.event.position.offset_km, 3) << " km, towed to workshop "
      << tr.event.tow.workshop << "\n"
      << "t_b " << tl.breakdown.to_string() << "  t_t " << tl.tow_start.to_string() << "  t_e "
      << tl.motorway_exit.to_string() << "\n"
      << "relative t_b " << tr.reference.breakdown.to_string() << "  t_t "
      << tr.reference.tow_start.to_string() << "  t_d " << tr.queue.dissipation.to_string()
      << "\n"
      << "public time loss " << fixed(tr.queue.total_loss_vehh, 3) << " veh*h, mission delay "
      << fixed(tr.delay.delay_h, 3) << " h\n";
  return outputs;
}

struct SweepFlags {
  std::vector<int> cases;
  double spacing_km = 5.0;
};

Outputs cmd_sweep(const CommonFlags& f, const SweepFlags& s, std::ostream& out) {
  const Scenario sc = load_scenario_named(f.scenario);
  SweepOptions sweep;
  sweep.cases = s.cases;
  sweep.spacing_km = s.spacing_km;
  const auto cases = sweep_alarm_locations(sc, sweep, model_options(f));

  Outputs outputs;
  add_table(outputs, "sweep_ratios", sweep_table(cases), provenance_of(sc), f.format);

  std::size_t small_fronts = 0;
  for (const SweepCase& c : cases) {
    if (c.evaluation.pareto.front.size() < 2) ++small_fronts;
  }
  out << cases.size() << " cases, " << small_fronts << " with a single-member front\n";
  return outputs;
}

void cmd_validate(const std::string& scenario, std::ostream& out) {
  const Scenario sc = load_scenario_named(scenario);
  out << "ok " << sc.id << " hash=" << scenario_hash(sc) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault-response decision support: risk of public time loss and mission delay",
               "faultplan"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonFlags common;
  EvaluateFlags eval_flags;
  TraceFlags trace_flags;
  SweepFlags sweep_flags;
  std::string validate_target;

  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate every decision at the alarm");
  add_common(evaluate, common);
  evaluate->add_option("--baseline", eval_flags.baseline,
                       "Also write change rates against this decision");
  evaluate->add_option("--verify-mc", eval_flags.verify_samples,
                       "Cross-check with this many Monte-Carlo samples");
  evaluate->add_option("--seed", eval_flags.seed, "Monte-Carlo seed");

  CLI::App* trace = app.add_subcommand("trace", "Trace one deterministic breakdown");
  add_common(trace, common);
  trace->add_option("--s", trace_flags.s_km, "Distance driven before the breakdown, km")
      ->required();
  trace->add_option("--decision", trace_flags.decision,
                    "Drive along this decision instead of the planned route");

  CLI::App* sweep = app.add_subcommand("sweep", "Move the alarm along the planned route");
  add_common(sweep, common);
  sweep->add_option("--cases", sweep_flags.cases, "Cases to run, e.g. 44,45")->delimiter(',');
  sweep->add_option("--spacing-km", sweep_flags.spacing_km, "Distance between alarm locations")
      ->check(CLI::PositiveNumber);

  CLI::App* validate_cmd = app.add_subcommand("validate", "Load and check a scenario");
  validate_cmd->add_option("scenario", validate_target, "Scenario file or bundled name")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    Outputs outputs;
    if (*evaluate) {
      outputs = cmd_evaluate(common, eval_flags, out);
    } else if (*trace) {
      outputs = cmd_trace(common, trace_flags, out);
    } else if (*sweep) {
      outputs = cmd_sweep(common, sweep_flags, out);
    } else if (*validate_cmd) {
      cmd_validate(validate_target, out);
      return 0;
    }
    write_outputs(common.out_dir, outputs);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ComputationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return 0;
}

}  // namespace faultplan
