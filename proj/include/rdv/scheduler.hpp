#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rdv/geometry.hpp"
#include "rdv/protocols.hpp"

namespace rdv {

/// Absolute distance at which two agents count as co-located.
inline constexpr double kEpsMeet = 1e-9;

/// (time, fraction along the segment) breakpoint; the walk is linear in
/// between.
struct Breakpoint {
  double time;
  double fraction;
};

/// Adversarial time-parameterization of a route. segments[i] covers route
/// segment i from fraction 0 to fraction 1; segment i+1 starts when segment
/// i ends. After the last breakpoint the agent rests at the route end.
struct WalkSchedule {
  std::vector<std::vector<Breakpoint>> segments;

  double end_time() const;
};

struct Uniform {
  double speed = 1;
};
/// Agent `agent` (1 or 2) rests at its start for `duration`, then moves at
/// `speed`; the other agent moves at unit speed.
struct Delay {
  int agent = 1;
  double duration = 0;
  double speed = 1;
};
/// Agent 1 at unit speed, agent 2 at `ratio`.
struct SpeedRatio {
  double ratio = 1;
};
/// Random speeds with up to `max_reversals` in-segment reversals.
struct JitterBackForth {
  std::uint64_t seed = 0;
  int max_reversals = 2;
};
/// Greedy distance-maximizing co-simulation; step <= 0 picks a default.
struct GreedyAvoider {
  std::uint64_t seed = 0;
  double step = 0;
};

using AdversaryStrategy = std::variant<Uniform, Delay, SpeedRatio, JitterBackForth, GreedyAvoider>;

/// uniform | uniform:S | delay:AGENT:DUR | ratio:R | jitter:SEED | avoider:SEED
AdversaryStrategy parse_strategy(const std::string& spec);
std::string describe(const AdversaryStrategy& s);

/// Schedule for agent 1 or 2. Throws InvalidStrategyParams for bad
/// parameters and for GreedyAvoider, which needs the peer (simulate_avoider).
WalkSchedule make_schedule(const Route& route, const AdversaryStrategy& strategy, int agent);

/// Throws ScheduleMismatch when the schedule violates the walk contract.
void validate_schedule(const Route& route, const WalkSchedule& s);

Point position_at(const Route& route, const WalkSchedule& s, double t);

struct MeetReport {
  bool met = false;
  std::optional<double> meet_time;
  std::optional<Point> meet_point;
  double cost_agent1 = 0;
  double cost_agent2 = 0;
  double total_cost = 0;
};

/// Earliest co-location, exact per cell of the merged breakpoint timeline.
MeetReport simulate(const Route& r1, const Route& r2, const WalkSchedule& s1, const WalkSchedule& s2);

struct AvoiderRun {
  WalkSchedule s1;
  WalkSchedule s2;
  MeetReport report;
};

AvoiderRun run_avoider(const Route& r1, const Route& r2, std::uint64_t seed, double step);
MeetReport simulate_avoider(const Route& r1, const Route& r2, std::uint64_t seed, double step);

/// Builds both schedules for a strategy and simulates.
struct StrategyRun {
  WalkSchedule s1;
  WalkSchedule s2;
  MeetReport report;
};
StrategyRun run_strategy(const Route& r1, const Route& r2, const AdversaryStrategy& strategy);

/// True iff some window has one agent completing a tour of the cycle from a
/// vertex v while the other does not traverse v, or first traverses it in
/// the opposite sense. Both routes must lie on the closed polyline `cycle`
/// (WalkOffCycle otherwise).
bool tour_meeting_predicate(const Polyline& cycle, const Route& r1, const WalkSchedule& s1, const Route& r2,
                            const WalkSchedule& s2);

}  // namespace rdv
