#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "rdv/error.hpp"
#include "rdv/medial.hpp"
#include "rdv/report.hpp"

using namespace rdv;

namespace {

std::vector<double> numbers(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, std::string("bad number in ") + what + ": '" + csv + "'");
    }
  }
  return out;
}

void apply_agent(AgentConfig& a, const std::string& spec, const char* flag) {
  const auto v = numbers(spec, flag);
  if (v.size() < 2 || v.size() > 4) throw Error(ErrorCode::ParseError, std::string(flag) + " expects x,y[,label[,compass]]");
  a.start = Point(v[0], v[1]);
  if (v.size() > 2) a.label = static_cast<int>(v[2]);
  if (v.size() > 3) a.compass = v[3];
}

Scenario load_scenario(const std::string& path) {
  const Json j = load_json(path);
  if (j.contains("terrain")) return scenario_from_json(j);
  Scenario s;
  s.terrain = terrain_from_json(j);
  return s;
}

void print_report(const RunReport& r) {
  std::printf("%s  D=%.12g  P=%.12g  x=%.12g  |L|=%d\n", r.scenario.value("algorithm", std::string()).c_str(), r.D,
              r.P, r.x, r.label_bits);
  for (const auto& s : r.results) {
    if (s.report.met)
      std::printf("  %-20s met at t=%.12g  cost %.12g + %.12g = %.12g\n", s.strategy.c_str(), *s.report.meet_time,
                  s.report.cost_agent1, s.report.cost_agent2, s.report.total_cost);
    else
      std::printf("  %-20s NOT met  cost %.12g\n", s.strategy.c_str(), s.report.total_cost);
  }
  for (const auto& b : r.bound_checks)
    std::printf("  %s %-44s measured %.12g  bound %.12g\n", b.pass ? "PASS" : "FAIL", b.name.c_str(), b.measured,
                b.bound);
  std::printf("%s\n", r.passed() ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous rendezvous simulator"};
  app.require_subcommand(1);

  std::string terrain_path, gen_spec, algo, a1, a2, labels, strategy = "uniform", svg_path, report_path, medial_path;
  std::uint64_t seed = 0;
  bool coherent = false;
  auto* run = app.add_subcommand("run", "Run one scenario under a set of adversary strategies");
  auto* t_opt = run->add_option("--terrain", terrain_path, "Terrain or scenario JSON file");
  auto* g_opt = run->add_option("--gen", gen_spec, "Generator spec (square_with_center_obstacle, hexagon:Y[:ROT], "
                                                   "double_pie:D[:K], random:SEED:OUTER:OBSTACLES[:medial])");
  t_opt->excludes(g_opt);
  run->add_option("--algo", algo, "rvcm | rvm | rvmo | rvc | rv | rvo");
  run->add_option("--a1", a1, "Agent 1 as x,y[,label[,compass]]");
  run->add_option("--a2", a2, "Agent 2 as x,y[,label[,compass]]");
  run->add_option("--labels", labels, "Labels l1,l2");
  run->add_option("--strategy", strategy, "Comma-separated strategies: uniform[:S] | delay:AGENT:DUR | ratio:R | "
                                          "jitter[:SEED] | avoider[:SEED]");
  run->add_option("--svg", svg_path, "Write an SVG trace");
  run->add_option("--report", report_path, "Write the JSON report");
  run->add_option("--seed", seed, "Default seed for jitter and avoider");
  run->add_option("--dump-medial", medial_path, "Write the medial axis of the outer polygon as JSON");
  run->add_flag("--coherent", coherent, "Give agent 2 the compass of agent 1");

  std::string suite_path, batch_report;
  int jobs = 0;
  auto* batch = app.add_subcommand("batch", "Run a suite of seeds x algorithms x strategies");
  batch->add_option("--suite", suite_path, "Suite JSON file")->required();
  batch->add_option("--jobs", jobs, "Worker threads (0 = hardware)");
  batch->add_option("--report", batch_report, "Write the summary table as JSON");

  std::string svg_in, svg_out;
  auto* svg = app.add_subcommand("svg", "Render a saved report");
  svg->add_option("--report", svg_in, "Report JSON")->required();
  svg->add_option("--out", svg_out, "SVG path")->required();

  std::string gen_only, gen_out;
  auto* gen = app.add_subcommand("gen", "Write a generated scenario file");
  gen->add_option("--gen", gen_only, "Generator spec")->required();
  gen->add_option("--out", gen_out, "Scenario JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (terrain_path.empty() && gen_spec.empty()) throw Error(ErrorCode::ParseError, "run needs --terrain or --gen");
      Scenario s = terrain_path.empty() ? scenario_from_spec(gen_spec) : load_scenario(terrain_path);
      if (!algo.empty()) s.algorithm = parse_algorithm(algo);
      if (!a1.empty()) apply_agent(s.agent1, a1, "--a1");
      if (!a2.empty()) apply_agent(s.agent2, a2, "--a2");
      if (!labels.empty()) {
        const auto l = numbers(labels, "--labels");
        if (l.size() != 2) throw Error(ErrorCode::ParseError, "--labels expects l1,l2");
        s.agent1.label = static_cast<int>(l[0]);
        s.agent2.label = static_cast<int>(l[1]);
      }
      if (coherent) s.agent2.compass = s.agent1.compass;
      if (!medial_path.empty()) save_json(medial_to_json(medial_axis(s.terrain.outer())), medial_path);
      const RunReport rep = cmd_run(s, split_strategies(strategy, seed));
      print_report(rep);
      if (!report_path.empty()) save_json(report_to_json(rep), report_path);
      if (!svg_path.empty()) cmd_svg(rep, svg_path);
      return rep.passed() ? 0 : 1;
    }
    if (*batch) {
      const BatchResult b = cmd_batch(load_json(suite_path), jobs);
      std::fputs(format_batch_table(b).c_str(), stdout);
      for (const auto& f : b.failures) std::printf("FAIL %s\n", f.c_str());
      if (!batch_report.empty()) {
        Json rows = Json::array();
        for (const auto& r : b.rows)
          rows.push_back({{"algorithm", r.algorithm}, {"scenarios", r.scenarios}, {"met", r.met},
                          {"bound_failures", r.bound_failures}, {"errors", r.errors},
                          {"max_ratio", round12(r.max_ratio)}});
        save_json({{"rows", rows}, {"failures", b.failures}, {"passed", b.passed()}}, batch_report);
      }
      return b.passed() ? 0 : 1;
    }
    if (*svg) {
      cmd_svg(report_from_json(load_json(svg_in)), svg_out);
      return 0;
    }
    if (*gen) {
      save_json(scenario_to_json(scenario_from_spec(gen_only)), gen_out);
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
