#include "rdv/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "rdv/error.hpp"
#include "rdv/visibility.hpp"

namespace rdv {

namespace {

// Equality bounds (cost = D) hold up to this relative slack.
constexpr double kEqualityTol = 1e-6;
// Rounding allowance on upper bounds.
constexpr double kUpperTol = 1e-9;

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
  return s;
}

BoundCheck upper(const std::string& name, double bound, double measured) {
  return {name, bound, measured, measured <= bound * (1 + kUpperTol) + kUpperTol};
}

BoundCheck equal(const std::string& name, double bound, double measured) {
  return {name, bound, measured, std::abs(measured - bound) <= kEqualityTol * std::max(1.0, bound)};
}

Json opt_number(const std::optional<double>& v) { return v ? Json(round12(*v)) : Json(nullptr); }

Json point12(const Point& p) { return Json::array({round12(p.x()), round12(p.y())}); }

Json polyline_json(const Polyline& p) {
  Json a = Json::array();
  for (const Point& q : p) a.push_back(point12(q));
  return a;
}

Polyline polyline_from(const Json& j) {
  Polyline p;
  for (const auto& q : j) p.push_back(point_from_json(q));
  return p;
}

}  // namespace

bool RunReport::passed() const {
  if (bound_checks.empty()) return false;
  for (const auto& b : bound_checks)
    if (!b.pass) return false;
  for (const auto& r : results)
    if (!r.report.met) return false;
  return true;
}

std::vector<std::string> split_strategies(const std::string& csv, std::uint64_t default_seed) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  for (std::string tok; std::getline(ss, tok, ',');) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty()) continue;
    if (tok == "jitter" || tok == "avoider") tok += ":" + std::to_string(default_seed);
    out.push_back(tok);
  }
  return out;
}

RunReport cmd_run(const Scenario& s, const std::vector<std::string>& strategies) {
  std::vector<AdversaryStrategy> parsed;
  for (const auto& spec : strategies) parsed.push_back(parse_strategy(spec));
  const auto [r1, r2] = build_routes(s.algorithm, s.agent1, s.agent2, s.terrain);

  RunReport rep;
  rep.scenario["terrain_hash"] = terrain_hash(s.terrain);
  rep.scenario["terrain"] = terrain_to_json(s.terrain);
  rep.scenario["agents"] = Json::array({agent_to_json(s.agent1), agent_to_json(s.agent2)});
  rep.scenario["algorithm"] = to_string(s.algorithm);
  rep.D = shortest_path(s.agent1.start, s.agent2.start, s.terrain).length;
  rep.P = s.terrain.perimeter();
  rep.x = s.terrain.max_obstacle_perimeter();
  rep.label_bits = static_cast<int>(
      std::max(modified_label(s.agent1.label).size(), modified_label(s.agent2.label).size()));
  rep.routes = {r1.waypoints(), r2.waypoints()};

  const double D = rep.D, P = rep.P, x = rep.x, L = rep.label_bits;
  switch (s.algorithm) {
    case Algorithm::Rvc:
      rep.bound_checks.push_back(upper("route_length<=4P:agent1", 4 * P, r1.length()));
      rep.bound_checks.push_back(upper("route_length<=4P:agent2", 4 * P, r2.length()));
      break;
    case Algorithm::Rv:
      rep.bound_checks.push_back(upper("route_length<=3P:agent1", 3 * P, r1.length()));
      rep.bound_checks.push_back(upper("route_length<=3P:agent2", 3 * P, r2.length()));
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const StrategyRun run = run_strategy(r1, r2, parsed[i]);
    const std::string tag = ":" + strategies[i];
    const double total = run.report.total_cost;
    switch (s.algorithm) {
      case Algorithm::Rvcm:
      case Algorithm::Rvm:
        rep.bound_checks.push_back(equal("total_cost=D" + tag, D, total));
        break;
      case Algorithm::Rvc:
        rep.bound_checks.push_back(upper("total_cost<=8P" + tag, 8 * P, total));
        break;
      case Algorithm::Rv:
        rep.bound_checks.push_back(upper("total_cost<=6P" + tag, 6 * P, total));
        break;
      case Algorithm::Rvmo:
        rep.bound_checks.push_back(upper("total_cost<=4D(2(2|L|+1))+2D" + tag, 4 * D * (2 * (2 * L + 1)) + 2 * D, total));
        break;
      case Algorithm::Rvo:
        rep.bound_checks.push_back(upper("total_cost<=12P+2(x+2x(2|L|+1))" + tag, 12 * P + 2 * (x + 2 * x * (2 * L + 1)), total));
        break;
    }
    rep.bound_checks.push_back({"met" + tag, 1, run.report.met ? 1.0 : 0.0, run.report.met});
    rep.results.push_back({strategies[i], run.report});
  }
  return rep;
}

Json report_to_json(const RunReport& r) {
  Json j;
  j["scenario"] = r.scenario;
  j["D"] = round12(r.D);
  j["P"] = round12(r.P);
  j["x"] = round12(r.x);
  j["label_bits"] = r.label_bits;
  Json routes = Json::array();
  for (const auto& p : r.routes) routes.push_back(polyline_json(p));
  j["routes"] = routes;
  Json results = Json::array();
  for (const auto& s : r.results) {
    Json e;
    e["strategy"] = s.strategy;
    e["met"] = s.report.met;
    e["meet_time"] = opt_number(s.report.meet_time);
    e["meet_point"] = s.report.meet_point ? point12(*s.report.meet_point) : Json(nullptr);
    e["cost_agent1"] = round12(s.report.cost_agent1);
    e["cost_agent2"] = round12(s.report.cost_agent2);
    e["total_cost"] = round12(s.report.total_cost);
    results.push_back(e);
  }
  j["results"] = results;
  Json checks = Json::array();
  for (const auto& b : r.bound_checks) {
    Json e;
    e["name"] = b.name;
    e["bound"] = round12(b.bound);
    e["measured"] = round12(b.measured);
    e["pass"] = b.pass;
    checks.push_back(e);
  }
  j["bound_checks"] = checks;
  j["passed"] = r.passed();
  return j;
}

RunReport report_from_json(const Json& j) {
  try {
    RunReport r;
    r.scenario = j.at("scenario");
    r.D = j.at("D").get<double>();
    r.P = j.at("P").get<double>();
    r.x = j.at("x").get<double>();
    r.label_bits = j.at("label_bits").get<int>();
    for (const auto& p : j.at("routes")) r.routes.push_back(polyline_from(p));
    for (const auto& e : j.at("results")) {
      StrategyResult s;
      s.strategy = e.at("strategy").get<std::string>();
      s.report.met = e.at("met").get<bool>();
      if (!e.at("meet_time").is_null()) s.report.meet_time = e["meet_time"].get<double>();
      if (!e.at("meet_point").is_null()) s.report.meet_point = point_from_json(e["meet_point"]);
      s.report.cost_agent1 = e.at("cost_agent1").get<double>();
      s.report.cost_agent2 = e.at("cost_agent2").get<double>();
      s.report.total_cost = e.at("total_cost").get<double>();
      r.results.push_back(s);
    }
    for (const auto& e : j.at("bound_checks"))
      r.bound_checks.push_back({e.at("name").get<std::string>(), e.at("bound").get<double>(),
                                e.at("measured").get<double>(), e.at("pass").get<bool>()});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string render_svg(const RunReport& r) {
  const Json& tj = r.scenario.at("terrain");
  std::vector<Polyline> polys{polyline_from(tj.at("outer"))};
  if (tj.contains("obstacles"))
    for (const auto& o : tj["obstacles"]) polys.push_back(polyline_from(o));
  Point lo = polys[0][0], hi = polys[0][0];
  for (const Point& p : polys[0]) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double span = std::max(hi.x() - lo.x(), hi.y() - lo.y());
  const double margin = 0.05 * span;
  const double width = 800;
  const double scale = width / (span + 2 * margin);
  const double legend_h = 110;
  const double height = (hi.y() - lo.y() + 2 * margin) * scale + legend_h;
  auto X = [&](const Point& p) { return num((p.x() - lo.x() + margin) * scale); };
  auto Y = [&](const Point& p) { return num((hi.y() - p.y() + margin) * scale); };
  auto path = [&](const Polyline& line, bool closed) {
    std::string d;
    for (std::size_t i = 0; i < line.size(); ++i) d += (i ? " L" : "M") + X(line[i]) + " " + Y(line[i]);
    if (closed) d += " Z";
    return d;
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
    << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
  o << "<defs><pattern id=\"hatch\" width=\"8\" height=\"8\" patternUnits=\"userSpaceOnUse\" "
       "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#666\" "
       "stroke-width=\"2\"/></pattern></defs>\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"#f4f4f4\"/>\n";
  o << "<path d=\"" << path(polys[0], true) << "\" fill=\"#ffffff\" stroke=\"#000\" stroke-width=\"2\"/>\n";
  for (std::size_t i = 1; i < polys.size(); ++i)
    o << "<path d=\"" << path(polys[i], true) << "\" fill=\"url(#hatch)\" stroke=\"#000\" stroke-width=\"1.5\"/>\n";

  const char* colors[2] = {"#1f5fbf", "#c0392b"};
  const char* dashes[2] = {"", " stroke-dasharray=\"6 3\""};
  for (std::size_t i = 0; i < r.routes.size() && i < 2; ++i) {
    const Polyline& line = r.routes[i];
    if (line.size() >= 2)
      o << "<path d=\"" << path(line, false) << "\" fill=\"none\" stroke=\"" << colors[i]
        << "\" stroke-width=\"1.5\" stroke-opacity=\"0.7\"" << dashes[i] << "/>\n";
    if (!line.empty())
      o << "<circle cx=\"" << X(line.front()) << "\" cy=\"" << Y(line.front()) << "\" r=\"5\" fill=\"" << colors[i]
        << "\"/>\n";
  }
  const StrategyResult* shown = r.results.empty() ? nullptr : &r.results.front();
  if (shown && shown->report.meet_point) {
    const Point& m = *shown->report.meet_point;
    o << "<circle cx=\"" << X(m) << "\" cy=\"" << Y(m)
      << "\" r=\"8\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"3\"/>\n";
  }

  const double top = height - legend_h + 20;
  o << "<g font-family=\"monospace\" font-size=\"13\">\n";
  o << "<text x=\"10\" y=\"" << num(top) << "\">algorithm " << r.scenario.value("algorithm", std::string("?"))
    << "  D=" << num(r.D) << "  P=" << num(r.P) << "  x=" << num(r.x) << "  |L|=" << r.label_bits << "</text>\n";
  if (shown) {
    o << "<text x=\"10\" y=\"" << num(top + 20) << "\">strategy " << shown->strategy << ": "
      << (shown->report.met ? "met" : "not met") << "  cost1=" << num(shown->report.cost_agent1)
      << "  cost2=" << num(shown->report.cost_agent2) << "  total=" << num(shown->report.total_cost) << "</text>\n";
  }
  o << "<line x1=\"10\" y1=\"" << num(top + 40) << "\" x2=\"40\" y2=\"" << num(top + 40) << "\" stroke=\"" << colors[0]
    << "\" stroke-width=\"2\"/><text x=\"48\" y=\"" << num(top + 44) << "\">agent 1</text>\n";
  o << "<line x1=\"130\" y1=\"" << num(top + 40) << "\" x2=\"160\" y2=\"" << num(top + 40) << "\" stroke=\""
    << colors[1] << "\" stroke-width=\"2\"" << dashes[1] << "/><text x=\"168\" y=\"" << num(top + 44)
    << "\">agent 2</text>\n";
  o << "<circle cx=\"265\" cy=\"" << num(top + 40)
    << "\" r=\"6\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"3\"/><text x=\"278\" y=\"" << num(top + 44)
    << "\">meeting point</text>\n";
  o << "</g>\n</svg>\n";
  return o.str();
}

void cmd_svg(const RunReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << render_svg(r);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

// ---------------------------------------------------------------------------
// Batch

bool BatchResult::passed() const {
  for (const auto& row : rows)
    if (row.met != row.scenarios || row.bound_failures > 0 || row.errors > 0) return false;
  return true;
}

BatchResult cmd_batch(const Json& suite, int jobs) {
  struct Job {
    std::string gen;
    std::string algorithm;
    std::vector<std::string> strategies;
    bool coherent;
  };
  std::vector<Job> work;
  std::vector<std::string> algorithms;
  try {
    const bool coherent = suite.value("coherent_compasses", false);
    for (const auto& a : suite.value("algorithms", Json::array())) algorithms.push_back(a.get<std::string>());
    std::vector<std::string> strategies;
    for (const auto& s : suite.value("strategies", Json::array({"uniform"}))) strategies.push_back(s.get<std::string>());
    for (const auto& entry : suite.value("scenarios", Json::array())) {
      const std::string gen = entry.at("gen").get<std::string>();
      std::vector<std::uint64_t> seeds;
      if (entry.contains("seeds"))
        for (const auto& s : entry["seeds"]) seeds.push_back(s.get<std::uint64_t>());
      if (entry.contains("count")) {
        const std::uint64_t from = entry.value("from", std::uint64_t{0});
        for (std::uint64_t k = 0; k < entry["count"].get<std::uint64_t>(); ++k) seeds.push_back(from + k);
      }
      if (seeds.empty()) seeds.push_back(0);
      for (const auto seed : seeds)
        for (const auto& algo : algorithms) {
          parse_algorithm(algo);
          Job job{replace_all(gen, "{seed}", std::to_string(seed)), algo, {}, coherent};
          for (const auto& s : strategies) job.strategies.push_back(replace_all(s, "{seed}", std::to_string(seed)));
          work.push_back(job);
        }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("suite: ") + e.what());
  }

  struct Outcome {
    bool ok = false;
    bool met = false;
    int bound_failures = 0;
    double ratio = 0;
    std::string error;
  };
  std::vector<Outcome> outcomes(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < work.size();) {
      const Job& job = work[i];
      Outcome& out = outcomes[i];
      try {
        Scenario s = scenario_from_spec(job.gen);
        s.algorithm = parse_algorithm(job.algorithm);
        if (job.coherent) s.agent2.compass = s.agent1.compass;
        const RunReport rep = cmd_run(s, job.strategies);
        out.ok = true;
        out.met = std::all_of(rep.results.begin(), rep.results.end(), [](const auto& r) { return r.report.met; });
        for (const auto& b : rep.bound_checks) {
          if (!b.pass) ++out.bound_failures;
          if (b.name.rfind("met", 0) != 0 && b.bound > 0) out.ratio = std::max(out.ratio, b.measured / b.bound);
        }
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  if (jobs <= 0) jobs = static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
  std::vector<std::thread> pool;
  for (int k = 0; k < std::min<int>(jobs, static_cast<int>(work.size())); ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  BatchResult result;
  std::map<std::string, std::size_t> row_of;
  for (const auto& a : algorithms) {
    if (row_of.count(a)) continue;
    row_of[a] = result.rows.size();
    result.rows.push_back({a});
  }
  for (std::size_t i = 0; i < work.size(); ++i) {
    BatchRow& row = result.rows[row_of[work[i].algorithm]];
    const Outcome& o = outcomes[i];
    ++row.scenarios;
    if (!o.ok) {
      ++row.errors;
      result.failures.push_back(work[i].algorithm + " on " + work[i].gen + ": " + o.error);
      continue;
    }
    if (o.met) ++row.met;
    row.bound_failures += o.bound_failures;
    row.max_ratio = std::max(row.max_ratio, o.ratio);
    if (!o.met || o.bound_failures > 0)
      result.failures.push_back(work[i].algorithm + " on " + work[i].gen + ": " +
                                (o.met ? "bound check failed" : "no meeting"));
  }
  return result;
}

std::string format_batch_table(const BatchResult& b) {
  std::ostringstream o;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %10s %6s %10s %7s %12s\n", "algorithm", "scenarios", "met", "bound_fail",
                "errors", "max_ratio");
  o << line;
  for (const auto& r : b.rows) {
    std::snprintf(line, sizeof line, "%-10s %10d %6d %10d %7d %12.6f\n", r.algorithm.c_str(), r.scenarios, r.met,
                  r.bound_failures, r.errors, r.max_ratio);
    o << line;
  }
  return o.str();
}

}  // namespace rdv
