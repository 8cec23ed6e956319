#pragma once

#include <string>
#include <vector>

#include "rdv/scenarios.hpp"
#include "rdv/scheduler.hpp"

namespace rdv {

struct BoundCheck {
  std::string name;
  double bound;
  double measured;
  bool pass;
};

struct StrategyResult {
  std::string strategy;
  MeetReport report;
};

/// Outcome of one scenario: its digest, the cost parameters, both routes,
/// one MeetReport per strategy and the bound checks.
struct RunReport {
  Json scenario;  // terrain_hash, terrain, agents, algorithm
  double D = 0;
  double P = 0;
  double x = 0;
  int label_bits = 0;  // |L|, the longer modified label
  std::vector<Polyline> routes;
  std::vector<StrategyResult> results;
  std::vector<BoundCheck> bound_checks;

  bool passed() const;
};

/// Builds the routes, runs every strategy and fills the bound checks. Throws
/// PreconditionViolation when the algorithm does not apply.
RunReport cmd_run(const Scenario& scenario, const std::vector<std::string>& strategies);

/// Comma-separated strategy list; bare "jitter"/"avoider" take default_seed.
std::vector<std::string> split_strategies(const std::string& csv, std::uint64_t default_seed);

/// Fixed field order, numbers at 12 significant digits.
Json report_to_json(const RunReport& r);
RunReport report_from_json(const Json& j);

std::string render_svg(const RunReport& r);
void cmd_svg(const RunReport& r, const std::string& path);

/// Suite: {"scenarios": [{"gen": "random:{seed}:12:0", "seeds": [1, 2]} |
/// {"gen": SPEC} | {"from": SEED, "count": N, "gen": ...}], "algorithms":
/// [...], "strategies": [...], "coherent_compasses": bool}. "{seed}" is
/// substituted in generator and strategy specs.
struct BatchRow {
  std::string algorithm;
  int scenarios = 0;
  int met = 0;
  int bound_failures = 0;
  int errors = 0;
  double max_ratio = 0;  // largest measured/bound over upper-bound checks
};

struct BatchResult {
  std::vector<BatchRow> rows;
  std::vector<std::string> failures;
  bool passed() const;
};

BatchResult cmd_batch(const Json& suite, int jobs = 0);
std::string format_batch_table(const BatchResult& b);

}  // namespace rdv
