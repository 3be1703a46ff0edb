#include "wcmdp/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "wcmdp/casestudy.hpp"
#include "wcmdp/degeneracy.hpp"
#include "wcmdp/errors.hpp"
#include "wcmdp/output.hpp"
#include "wcmdp/relaxation.hpp"
#include "wcmdp/simulator.hpp"

namespace wcmdp {

namespace {

struct RunConfig {
  std::string model_path;
  std::string preset;
  std::string policy = "lp-update-full";
  std::string rounding = "floor";
  std::vector<long> N;
  long reps = 1000;
  std::optional<std::uint64_t> seed;
  std::string csv;
  std::string svg;
  std::string fairness;  // "", "on", "off"
  std::optional<double> tol;
  std::string out_json;
  std::vector<double> m0;
  std::vector<std::string> scenarios{"scarce", "abundant"};
  int threads = 0;
  bool serial = false;
  bool shuffle_arms = false;
  bool snap_m0 = false;
};

struct Source {
  Model model;
  std::optional<ConfigVector> m0;
  std::string label;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::optional<bool> fairness_override(const RunConfig& cfg) {
  if (cfg.fairness.empty()) return std::nullopt;
  return cfg.fairness == "on";
}

Source screening_source(const std::string& scenario, bool fairness) {
  ScreeningModel sm = build_screening_model(screening_preset(scenario, fairness));
  return {std::move(sm.model), sm.m0, "screening:" + scenario + (fairness ? ",fairness" : "")};
}

Source resolve_preset(const std::string& name, const RunConfig& cfg) {
  const auto colon = name.find(':');
  const std::string kind = name.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (kind == "counterexample") {
    std::string v = arg.rfind("b=", 0) == 0 ? arg.substr(2) : arg;
    if (v.empty()) v = "0.3";
    std::size_t used = 0;
    double b = 0.0;
    try {
      b = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size()) throw ParseError("bad counterexample budget '" + v + "'");
    Counterexample c = build_counterexample(b);
    return {std::move(c.model), c.m0, "counterexample:b=" + format_number(b)};
  }
  if (kind == "screening") {
    std::string scenario = arg;
    bool fairness = false;
    if (const auto comma = arg.find(','); comma != std::string::npos) {
      scenario = arg.substr(0, comma);
      const std::string flag = arg.substr(comma + 1);
      if (flag != "fairness") throw ParseError("unknown screening option '" + flag + "'");
      fairness = true;
    }
    if (scenario.empty()) scenario = "scarce";
    return screening_source(scenario, fairness_override(cfg).value_or(fairness));
  }
  throw ParseError("unknown preset '" + name + "' (expected counterexample:b=VALUE or screening:SCENARIO[,fairness])");
}

Source resolve_source(const RunConfig& cfg) {
  if (!cfg.preset.empty() && !cfg.model_path.empty()) throw ParseError("give either --model or --preset, not both");
  Source src;
  if (!cfg.preset.empty()) {
    src = resolve_preset(cfg.preset, cfg);
  } else if (!cfg.model_path.empty()) {
    const std::string text = read_file(cfg.model_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
      model_from_json(text);  // rethrows with line context
    }
    if (j.is_object() && j.contains("scenario")) {
      try {
        const bool fairness = fairness_override(cfg).value_or(j.value("fairness", false));
        src = screening_source(j.at("scenario").get<std::string>(), fairness);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(cfg.model_path + ": " + e.what());
      }
    } else {
      src.model = model_from_json(text);
      src.label = cfg.model_path;
      if (j.is_object() && j.contains("m0")) {
        try {
          src.m0 = ConfigVector(j.at("m0").get<std::vector<double>>());
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(cfg.model_path + ": m0: " + e.what());
        }
      }
    }
  } else {
    throw ParseError("no model: pass --model PATH or --preset NAME");
  }
  if (!cfg.m0.empty()) src.m0 = ConfigVector(cfg.m0);
  return src;
}

const ConfigVector& require_m0(const Source& src) {
  if (!src.m0) throw ParseError("no initial configuration: add \"m0\" to the model file or pass --m0");
  if (src.m0->size() != static_cast<std::size_t>(src.model.d()))
    throw ParseError("initial configuration has " + std::to_string(src.m0->size()) + " entries, model has " +
                     std::to_string(src.model.d()) + " states");
  if (!is_config(*src.m0)) throw ParseError("initial configuration is not a probability vector");
  return *src.m0;
}

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw ParseError("--seed is required for this command");
  return *cfg.seed;
}

void require_N(const RunConfig& cfg, const ConfigVector& m0) {
  if (cfg.N.empty()) throw ParseError("--N is required for this command");
  for (long N : cfg.N) {
    if (N < 1) throw ParseError("N must be positive");
    if (!cfg.snap_m0 && !is_config(m0, N))
      throw ParseError("N=" + std::to_string(N) + " does not make N*m0 integral (see --snap-m0)");
  }
}

PolicyConfig policy_config(const RunConfig& cfg) {
  PolicyConfig pc;
  pc.kind = policy_from_string(cfg.policy);
  pc.rounding = rounding_from_string(cfg.rounding);
  pc.shuffle_arms = cfg.shuffle_arms;
  return pc;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const Source src = resolve_source(cfg);
  Tolerances tol;
  if (cfg.tol) tol.stochastic = *cfg.tol;
  const auto violations = validate_model(src.model, tol);
  if (violations.empty()) {
    out << src.label << ": valid (d=" << src.model.d() << ", actions=" << src.model.action_count()
        << ", J=" << src.model.J() << ", T=" << src.model.horizon() << ")\n";
    return 0;
  }
  out << src.label << ": " << violations.size() << " violation(s)\n";
  for (const auto& v : violations) {
    out << "  [" << to_string(v.kind) << "]";
    if (v.epoch >= 0) out << " epoch " << v.epoch;
    if (v.state >= 0) out << " state " << v.state;
    if (v.action >= 0) out << " action " << v.action;
    out << ": " << v.message << '\n';
  }
  return 1;
}

int cmd_relax(const RunConfig& cfg, std::ostream& out) {
  const Source src = resolve_source(cfg);
  const RelaxedSolution sol = solve_relaxed(src.model, require_m0(src), 0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", sol.value);
  out << buf << '\n';
  if (!cfg.out_json.empty()) write_file(cfg.out_json, relaxed_to_json(sol) + "\n");
  return 0;
}

int cmd_check_degeneracy(const RunConfig& cfg, std::ostream& out) {
  const Source src = resolve_source(cfg);
  const RelaxedSolution sol = solve_relaxed(src.model, require_m0(src), 0);
  const DegeneracyReport report = is_nondegenerate(src.model, sol);
  out << format_degeneracy_table(report);
  return report.nondegenerate ? 0 : 2;
}

void emit(const RunConfig& cfg, const std::string& csv, const std::string& summary, std::ostream& out,
          std::ostream& err) {
  if (!cfg.csv.empty()) {
    write_file(cfg.csv, csv);
    out << summary;
  } else {
    out << csv;
    err << summary;
  }
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Source src = resolve_source(cfg);
  const ConfigVector& m0 = require_m0(src);
  const std::uint64_t seed = require_seed(cfg);
  require_N(cfg, m0);
  const PolicyConfig pc = policy_config(cfg);
  std::vector<CampaignResult> rows;
  for (long N : cfg.N) rows.push_back(evaluate(src.model, pc, m0, N, cfg.reps, seed, {!cfg.serial, cfg.snap_m0}));
  emit(cfg, campaign_csv(rows), "", out, err);
  return 0;
}

int cmd_rate_study(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Source src = resolve_source(cfg);
  const ConfigVector& m0 = require_m0(src);
  const std::uint64_t seed = require_seed(cfg);
  require_N(cfg, m0);
  const RateStudy study = rate_study(src.model, policy_config(cfg), m0, cfg.N, cfg.reps, seed, {!cfg.serial, cfg.snap_m0});
  if (!cfg.svg.empty()) write_file(cfg.svg, rate_study_svg(study, src.label + ", " + cfg.policy + ", " + cfg.rounding));
  emit(cfg, campaign_csv(study.rows), "slope: " + format_number(study.slope) + "\n", out, err);
  return 0;
}

int cmd_casestudy(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = require_seed(cfg);
  std::vector<std::string> scenarios = cfg.scenarios;
  if (!cfg.preset.empty() || !cfg.model_path.empty()) {
    // A screening preset or scenario file picks the scenario.
    const std::string name = !cfg.preset.empty() ? cfg.preset : "";
    if (!name.empty()) {
      if (name.rfind("screening:", 0) != 0) throw ParseError("casestudy needs a screening preset");
      const std::string arg = name.substr(10);
      scenarios = {arg.substr(0, arg.find(','))};
    } else {
      const auto j = nlohmann::json::parse(read_file(cfg.model_path), nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("scenario") || !j.at("scenario").is_string())
        throw ParseError(cfg.model_path + ": expected {\"scenario\": ..., \"fairness\": ...}");
      scenarios = {j.at("scenario").get<std::string>()};
    }
  }
  std::vector<bool> fairness_settings{false, true};
  if (const auto f = fairness_override(cfg)) fairness_settings = {*f};
  std::vector<long> Ns = cfg.N.empty() ? std::vector<long>{20, 100, 1000} : cfg.N;

  std::vector<CaseStudyRow> rows;
  std::ostringstream summary;
  std::vector<PlotPanel> panels;
  for (const auto& scenario : scenarios) {
    PlotPanel panel;
    panel.title = scenario;
    panel.reference_slopes = false;
    for (bool fairness : fairness_settings) {
      const ScreeningModel sm = build_screening_model(screening_preset(scenario, fairness));
      for (long N : Ns)
        if (!cfg.snap_m0 && !is_config(sm.m0, N)) throw ParseError("N=" + std::to_string(N) + " does not make N*m0 integral");
      for (PolicyKind kind : {PolicyKind::lp_update_selective, PolicyKind::occupation}) {
        PolicyConfig pc;
        pc.kind = kind;
        pc.shuffle_arms = cfg.shuffle_arms;
        PlotSeries series;
        series.name = to_string(kind) + (fairness ? " (fair)" : "");
        for (long N : Ns) {
          CampaignResult r = evaluate(sm.model, pc, sm.m0, N, cfg.reps, seed, {!cfg.serial, cfg.snap_m0});
          series.x.push_back(static_cast<double>(N));
          series.y.push_back(r.gap);
          series.err.push_back(r.ci95);
          rows.push_back({scenario, fairness, std::move(r)});
        }
        panel.series.push_back(std::move(series));
      }
      summary << scenario << (fairness ? " fairness=on" : " fairness=off")
              << " V_rel=" << format_number(rows.back().result.v_rel) << '\n';
    }
    panels.push_back(std::move(panel));
  }
  if (!cfg.svg.empty()) write_file(cfg.svg, loglog_svg(panels));
  emit(cfg, casestudy_csv(rows), summary.str(), out, err);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-horizon weakly coupled MDPs: relaxed LP, LP-update policies, simulation"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::uint64_t seed_value = 0;

  auto add_source = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model_path, "model JSON file or scenario file");
    sub->add_option("--preset", cfg.preset, "counterexample:b=VALUE | screening:SCENARIO[,fairness]");
    sub->add_option("--fairness", cfg.fairness, "override the fairness rows of a screening model")
        ->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--m0", cfg.m0, "initial configuration, comma separated")->delimiter(',');
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--policy", cfg.policy)
        ->check(CLI::IsMember({"lp-update-full", "lp-update-selective", "occupation", "passive"}));
    sub->add_option("--rounding", cfg.rounding)->check(CLI::IsMember({"floor", "min-distance", "randomized"}));
    sub->add_option("--N", cfg.N, "population sizes, comma separated")->delimiter(',');
    sub->add_option("--reps", cfg.reps, "replications per N")->check(CLI::Range(2L, 1000000000L));
    sub->add_option("--seed", seed_value, "master seed");
    sub->add_option("--csv", cfg.csv, "write CSV here instead of stdout");
    sub->add_option("--threads", cfg.threads, "OpenMP threads (0: runtime default)");
    sub->add_flag("--serial", cfg.serial, "run replications without OpenMP");
    sub->add_flag("--snap-m0", cfg.snap_m0, "round m0 to the nearest 1/N grid point for each N");
    sub->add_flag("--shuffle-arms", cfg.shuffle_arms, "occupation policy: random arm order");
  };

  auto* validate = app.add_subcommand("validate", "check model invariants");
  add_source(validate);
  validate->add_option("--tol", cfg.tol, "row-sum tolerance");
  auto* relax = app.add_subcommand("relax", "solve the relaxed LP and print its value");
  add_source(relax);
  relax->add_option("--out", cfg.out_json, "write the optimal trajectory as JSON");
  auto* degeneracy = app.add_subcommand("check-degeneracy", "rank test of the active constraints per epoch");
  add_source(degeneracy);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation of a policy");
  add_source(simulate);
  add_sim(simulate);
  auto* rate = app.add_subcommand("rate-study", "optimality gap against N");
  add_source(rate);
  add_sim(rate);
  rate->add_option("--svg", cfg.svg, "log-log plot of the gap");
  auto* casestudy = app.add_subcommand("casestudy", "screening comparison of LP-update and occupation policies");
  add_source(casestudy);
  add_sim(casestudy);
  casestudy->add_option("--scenario", cfg.scenarios, "scarce, abundant")->delimiter(',');
  casestudy->add_option("--svg", cfg.svg, "one panel per scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  for (auto* sub : {simulate, rate, casestudy})
    if (sub->parsed() && sub->count("--seed") > 0) cfg.seed = seed_value;
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

  try {
    if (validate->parsed()) return cmd_validate(cfg, out);
    if (relax->parsed()) return cmd_relax(cfg, out);
    if (degeneracy->parsed()) return cmd_check_degeneracy(cfg, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out, err);
    if (rate->parsed()) return cmd_rate_study(cfg, out, err);
    if (casestudy->parsed()) return cmd_casestudy(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace wcmdp
