#include "rdv/scheduler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

namespace rdv {

namespace {

// Uniform double in [0, 1) from the top 53 bits; std distributions are
// implementation-defined and would break cross-platform reproducibility.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Error bad_params(const std::string& what) { return Error(ErrorCode::InvalidStrategyParams, what); }

// Flattened view of a schedule. Segment boundaries appear twice, as
// (T, i, 1) and (T, i+1, 0).
struct Knot {
  double time;
  std::size_t segment;
  double fraction;
};

std::vector<Knot> flatten(const WalkSchedule& s) {
  std::vector<Knot> out;
  for (std::size_t i = 0; i < s.segments.size(); ++i)
    for (const auto& b : s.segments[i]) out.push_back({b.time, i, b.fraction});
  return out;
}

struct Track {
  const Route* route;
  std::vector<Knot> knots;

  Point at_knot(const Knot& k) const { return route->segment(k.segment).at(k.fraction); }

  Point at(double t) const {
    if (knots.empty()) return route->start();
    if (t <= knots.front().time) return at_knot(knots.front());
    if (t >= knots.back().time) return route->end();
    const auto it = std::upper_bound(knots.begin(), knots.end(), t,
                                     [](double v, const Knot& k) { return v < k.time; });
    const Knot& a = *(it - 1);
    const Knot& b = *it;
    const double s = (t - a.time) / (b.time - a.time);
    return route->segment(a.segment).at(a.fraction + s * (b.fraction - a.fraction));
  }

  // Arc length covered by time t: completed segments plus the farthest
  // fraction reached on the current one.
  double cost(double t) const {
    if (knots.empty()) return 0;
    std::size_t seg = 0;
    double best = 0;
    std::size_t k = 0;
    for (; k < knots.size() && knots[k].time <= t; ++k) {
      if (knots[k].segment != seg) {
        seg = knots[k].segment;
        best = 0;
      }
      best = std::max(best, knots[k].fraction);
    }
    if (k > 0 && k < knots.size() && knots[k].segment == seg) {
      const Knot& a = knots[k - 1];
      const Knot& b = knots[k];
      best = std::max(best, a.fraction + (t - a.time) / (b.time - a.time) * (b.fraction - a.fraction));
    }
    double sum = 0;
    for (std::size_t i = 0; i < seg; ++i) sum += route->segment(i).length();
    return sum + best * route->segment(seg).length();
  }
};

// Earliest s in [0, 1] with |d0 + s (d1 - d0)| <= eps, if any.
std::optional<double> first_contact(const Vec2& d0, const Vec2& d1, double eps) {
  if (d0.norm() <= eps) return 0.0;
  const Vec2 g = d1 - d0;
  const double a = g.squaredNorm();
  if (a == 0) return std::nullopt;
  const double smin = std::clamp(-d0.dot(g) / a, 0.0, 1.0);
  if ((d0 + smin * g).norm() > eps) return std::nullopt;
  const double b = 2 * d0.dot(g);
  const double c = d0.squaredNorm() - eps * eps;
  const double disc = std::max(0.0, b * b - 4 * a * c);
  double s = (-b - std::sqrt(disc)) / (2 * a);
  s = std::clamp(s, 0.0, smin);
  // Rounding may leave the root a hair outside the disc; walk toward smin.
  for (int it = 0; it < 60 && (d0 + s * g).norm() > eps; ++it) s = 0.5 * (s + smin);
  return s;
}

std::mt19937_64 agent_rng(std::uint64_t seed, int agent) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(agent)};
  return std::mt19937_64(seq);
}

WalkSchedule uniform_schedule(const Route& route, double speed, double delay) {
  WalkSchedule s;
  double t = 0;
  for (std::size_t i = 0; i < route.segment_count(); ++i) {
    std::vector<Breakpoint> b{{t, 0}};
    if (i == 0 && delay > 0) {
      t += delay;
      b.push_back({t, 0});
    }
    t += route.segment(i).length() / speed;
    b.push_back({t, 1});
    s.segments.push_back(std::move(b));
  }
  return s;
}

WalkSchedule jitter_schedule(const Route& route, const JitterBackForth& j, int agent) {
  std::mt19937_64 rng = agent_rng(j.seed, agent);
  WalkSchedule s;
  double t = 0;
  for (std::size_t i = 0; i < route.segment_count(); ++i) {
    const double len = route.segment(i).length();
    const int reversals = static_cast<int>(unit(rng) * (j.max_reversals + 1));
    std::vector<Breakpoint> b{{t, 0}};
    double f = 0;
    auto move_to = [&](double g) {
      const double speed = 0.25 + 1.75 * unit(rng);
      t += std::max(len * std::abs(g - f) / speed, 1e-12);
      f = g;
      b.push_back({t, f});
    };
    if (unit(rng) < 0.2) {
      t += len * unit(rng);  // pause at the segment start
      b.push_back({t, 0});
    }
    for (int r = 0; r < reversals; ++r) {
      move_to(f + (1 - f) * (0.2 + 0.7 * unit(rng)));
      move_to(f * (0.2 + 0.6 * unit(rng)));
    }
    move_to(1);
    s.segments.push_back(std::move(b));
  }
  return s;
}

}  // namespace

double WalkSchedule::end_time() const {
  if (segments.empty()) return 0;
  return segments.back().back().time;
}

AdversaryStrategy parse_strategy(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.empty()) throw Error(ErrorCode::ParseError, "empty strategy");
  auto num = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      const double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad number in strategy '" + spec + "'");
    }
  };
  auto seed = [&](std::size_t i) -> std::uint64_t {
    try {
      return std::stoull(parts.at(i));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad seed in strategy '" + spec + "'");
    }
  };
  const std::string& kind = parts[0];
  if (kind == "uniform") return Uniform{parts.size() > 1 ? num(1) : 1.0};
  if (kind == "delay") {
    if (parts.size() < 3) throw Error(ErrorCode::ParseError, "delay needs AGENT:DUR");
    const double speed = parts.size() > 3 ? num(3) : 1.0;
    return Delay{static_cast<int>(num(1)), num(2), speed};
  }
  if (kind == "ratio") {
    if (parts.size() < 2) throw Error(ErrorCode::ParseError, "ratio needs R");
    return SpeedRatio{num(1)};
  }
  if (kind == "jitter") {
    JitterBackForth j{parts.size() > 1 ? seed(1) : 0, 2};
    if (parts.size() > 2) j.max_reversals = static_cast<int>(num(2));
    return j;
  }
  if (kind == "avoider") {
    GreedyAvoider g{parts.size() > 1 ? seed(1) : 0, 0};
    if (parts.size() > 2) g.step = num(2);
    return g;
  }
  throw Error(ErrorCode::ParseError, "unknown strategy '" + spec + "'");
}

std::string describe(const AdversaryStrategy& s) {
  std::ostringstream o;
  o.precision(12);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Uniform>) o << "uniform:" << v.speed;
        else if constexpr (std::is_same_v<T, Delay>) o << "delay:" << v.agent << ":" << v.duration << ":" << v.speed;
        else if constexpr (std::is_same_v<T, SpeedRatio>) o << "ratio:" << v.ratio;
        else if constexpr (std::is_same_v<T, JitterBackForth>) o << "jitter:" << v.seed << ":" << v.max_reversals;
        else o << "avoider:" << v.seed << ":" << v.step;
      },
      s);
  return o.str();
}

WalkSchedule make_schedule(const Route& route, const AdversaryStrategy& strategy, int agent) {
  if (agent != 1 && agent != 2) throw bad_params("agent must be 1 or 2");
  return std::visit(
      [&](const auto& v) -> WalkSchedule {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          if (!(v.speed > 0) || !std::isfinite(v.speed)) throw bad_params("uniform speed must be positive");
          return uniform_schedule(route, v.speed, 0);
        } else if constexpr (std::is_same_v<T, Delay>) {
          if (v.agent != 1 && v.agent != 2) throw bad_params("delay agent must be 1 or 2");
          if (!(v.duration >= 0) || !std::isfinite(v.duration)) throw bad_params("delay must be non-negative");
          if (!(v.speed > 0) || !std::isfinite(v.speed)) throw bad_params("delay speed must be positive");
          return v.agent == agent ? uniform_schedule(route, v.speed, v.duration) : uniform_schedule(route, 1, 0);
        } else if constexpr (std::is_same_v<T, SpeedRatio>) {
          if (!(v.ratio > 0) || !std::isfinite(v.ratio)) throw bad_params("speed ratio must be positive");
          return uniform_schedule(route, agent == 1 ? 1.0 : v.ratio, 0);
        } else if constexpr (std::is_same_v<T, JitterBackForth>) {
          if (v.max_reversals < 0) throw bad_params("max reversals must be non-negative");
          return jitter_schedule(route, v, agent);
        } else {
          throw bad_params("the greedy avoider needs both routes; use simulate_avoider");
        }
      },
      strategy);
}

void validate_schedule(const Route& route, const WalkSchedule& s) {
  auto fail = [](const std::string& w) { return Error(ErrorCode::ScheduleMismatch, w); };
  if (s.segments.size() != route.segment_count())
    throw fail("schedule has " + std::to_string(s.segments.size()) + " segments, route has " +
               std::to_string(route.segment_count()));
  double prev_end = 0;
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const auto& b = s.segments[i];
    if (b.size() < 2) throw fail("segment " + std::to_string(i) + " needs at least two breakpoints");
    if (b.front().fraction != 0 || b.back().fraction != 1)
      throw fail("segment " + std::to_string(i) + " must run from its start to its end");
    if (b.front().time != prev_end) throw fail("segment " + std::to_string(i) + " is not continuous in time");
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (!(b[k].fraction >= 0 && b[k].fraction <= 1)) throw fail("breakpoint leaves segment " + std::to_string(i));
      if (k > 0 && !(b[k].time > b[k - 1].time)) throw fail("breakpoint times must increase");
    }
    prev_end = b.back().time;
  }
}

Point position_at(const Route& route, const WalkSchedule& s, double t) {
  return Track{&route, flatten(s)}.at(t);
}

MeetReport simulate(const Route& r1, const Route& r2, const WalkSchedule& s1, const WalkSchedule& s2) {
  validate_schedule(r1, s1);
  validate_schedule(r2, s2);
  const Track a{&r1, flatten(s1)};
  const Track b{&r2, flatten(s2)};
  std::vector<double> times{0};
  for (const auto& k : a.knots) times.push_back(k.time);
  for (const auto& k : b.knots) times.push_back(k.time);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  MeetReport rep;
  auto finish = [&](double t) {
    rep.met = true;
    rep.meet_time = t;
    rep.meet_point = a.at(t);
    rep.cost_agent1 = a.cost(t);
    rep.cost_agent2 = b.cost(t);
    rep.total_cost = rep.cost_agent1 + rep.cost_agent2;
    return rep;
  };
  Vec2 d_prev = a.at(times[0]) - b.at(times[0]);
  if (d_prev.norm() <= kEpsMeet) return finish(times[0]);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const Vec2 d = a.at(times[i]) - b.at(times[i]);
    if (const auto s = first_contact(d_prev, d, kEpsMeet)) {
      double t = times[i - 1] + *s * (times[i] - times[i - 1]);
      // Re-evaluate through the public position path (soundness guard).
      for (int it = 0; it < 60 && (a.at(t) - b.at(t)).norm() > kEpsMeet; ++it) t = 0.5 * (t + times[i]);
      if ((a.at(t) - b.at(t)).norm() <= kEpsMeet) return finish(t);
    }
    d_prev = d;
  }
  rep.cost_agent1 = r1.length();
  rep.cost_agent2 = r2.length();
  rep.total_cost = rep.cost_agent1 + rep.cost_agent2;
  return rep;
}

StrategyRun run_strategy(const Route& r1, const Route& r2, const AdversaryStrategy& strategy) {
  if (const auto* g = std::get_if<GreedyAvoider>(&strategy)) {
    AvoiderRun a = run_avoider(r1, r2, g->seed, g->step);
    return {std::move(a.s1), std::move(a.s2), a.report};
  }
  StrategyRun run;
  run.s1 = make_schedule(r1, strategy, 1);
  run.s2 = make_schedule(r2, strategy, 2);
  run.report = simulate(r1, r2, run.s1, run.s2);
  return run;
}

// ---------------------------------------------------------------------------
// Greedy avoider

namespace {

constexpr double kSpeeds[] = {0, 0.5, 1, 2};
// Segments must finish within this multiple of their length (unit speed).
constexpr double kDeadline = 16;

struct WalkerState {
  std::size_t seg = 0;
  double frac = 0;
  double elapsed = 0;  // time spent on the current segment
  int reversals = 0;
};

struct Walker {
  const Route* route;
  WalkSchedule sched;
  WalkerState st;
  double time = 0;

  bool done() const { return st.seg >= route->segment_count(); }
  Point pos(const WalkerState& s) const {
    if (s.seg >= route->segment_count()) return route->end();
    return route->segment(s.seg).at(s.frac);
  }
};

struct Action {
  double speed;
  bool backward;
};

// Advances a copy of the state by dt; when `emit` is set, breakpoints are
// appended to the schedule (starting at time t0).
WalkerState advance(const Walker& w, WalkerState s, const Action& act, double dt, double t0,
                    WalkSchedule* emit) {
  double t = t0;
  double left = dt;
  while (left > 0 && s.seg < w.route->segment_count()) {
    const double len = w.route->segment(s.seg).length();
    if (act.backward || act.speed == 0) {
      // Reversals stop at the segment start and wait there.
      const double sign = act.backward ? -1 : 0;
      s.frac = std::max(0.0, s.frac + sign * act.speed * left / len);
      s.elapsed += left;
      if (emit) emit->segments[s.seg].push_back({t0 + dt, s.frac});
      break;
    }
    const double need = (1 - s.frac) * len / act.speed;
    if (need > left) {
      s.frac += act.speed * left / len;
      s.elapsed += left;
      if (emit) emit->segments[s.seg].push_back({t0 + dt, s.frac});
      break;
    }
    t += need;
    left -= need;
    if (emit) {
      emit->segments[s.seg].push_back({t, 1.0});
      if (s.seg + 1 < w.route->segment_count()) emit->segments[s.seg + 1].push_back({t, 0.0});
    }
    s = WalkerState{s.seg + 1, 0, 0, 0};
  }
  return s;
}

bool must_hurry(const Walker& w, double step) {
  if (w.done()) return false;
  const double len = w.route->segment(w.st.seg).length();
  return w.st.elapsed + step + (1 - w.st.frac) * len / 2 > 0.5 * kDeadline * len;
}

std::vector<Action> actions(const Walker& w, double step) {
  if (w.done()) return {{0, false}};
  if (must_hurry(w, step)) return {{2, false}};
  std::vector<Action> out;
  for (double v : kSpeeds) out.push_back({v, false});
  if (w.st.frac > 0 && w.st.reversals < 2)
    for (double v : {0.5, 1.0, 2.0}) out.push_back({v, true});
  return out;
}

// Merges float-identical consecutive breakpoints produced by zero-length
// moves and drops non-increasing times.
void tidy(WalkSchedule& s) {
  for (auto& seg : s.segments) {
    std::vector<Breakpoint> out;
    for (const auto& b : seg) {
      if (!out.empty() && !(b.time > out.back().time)) {
        if (out.size() > 1) out.back().fraction = b.fraction;  // the start stays at 0
        continue;
      }
      out.push_back(b);
    }
    seg = std::move(out);
  }
}

}  // namespace

AvoiderRun run_avoider(const Route& r1, const Route& r2, std::uint64_t seed, double step) {
  if (step <= 0) step = std::max(1e-6, std::max(r1.length(), r2.length()) / 1000);
  if (!std::isfinite(step)) throw bad_params("avoider step must be finite");
  std::mt19937_64 rng = agent_rng(seed, 0);
  std::array<Walker, 2> w{Walker{&r1, {}, {}, 0}, Walker{&r2, {}, {}, 0}};
  for (auto& x : w) {
    x.sched.segments.assign(x.route->segment_count(), {});
    if (x.route->segment_count() > 0) x.sched.segments[0].push_back({0, 0});
  }
  double t = 0;
  const double horizon =
      kDeadline * (r1.length() + r2.length()) + step * (r1.segment_count() + r2.segment_count() + 4);
  constexpr int kSamples = 4;
  while (!(w[0].done() && w[1].done())) {
    if (t > horizon) throw Error(ErrorCode::NumericFailure, "avoider exceeded its horizon");
    const auto a0 = actions(w[0], step);
    const auto a1 = actions(w[1], step);
    double best = -1;
    std::pair<Action, Action> choice{a0[0], a1[0]};
    // Seeded tie-break: visit candidate pairs from a random offset.
    const std::size_t total = a0.size() * a1.size();
    const std::size_t offset = static_cast<std::size_t>(unit(rng) * total);
    for (std::size_t k = 0; k < total; ++k) {
      const std::size_t idx = (k + offset) % total;
      const Action& x = a0[idx / a1.size()];
      const Action& y = a1[idx % a1.size()];
      double worst = std::numeric_limits<double>::infinity();
      for (int s = 1; s <= kSamples; ++s) {
        const double dt = step * s / kSamples;
        const Point p = w[0].pos(advance(w[0], w[0].st, x, dt, t, nullptr));
        const Point q = w[1].pos(advance(w[1], w[1].st, y, dt, t, nullptr));
        worst = std::min(worst, (p - q).norm());
      }
      if (worst > best) {
        best = worst;
        choice = {x, y};
      }
    }
    const Action acts[2] = {choice.first, choice.second};
    for (int i = 0; i < 2; ++i) {
      if (w[i].done()) continue;
      WalkerState before = w[i].st;
      WalkerState after = advance(w[i], before, acts[i], step, t, &w[i].sched);
      if (acts[i].backward && after.seg == before.seg) after.reversals = before.reversals + 1;
      w[i].st = after;
    }
    t += step;
  }
  for (auto& x : w) tidy(x.sched);
  AvoiderRun run{w[0].sched, w[1].sched, {}};
  run.report = simulate(r1, r2, run.s1, run.s2);
  return run;
}

MeetReport simulate_avoider(const Route& r1, const Route& r2, std::uint64_t seed, double step) {
  return run_avoider(r1, r2, seed, step).report;
}

// ---------------------------------------------------------------------------
// Tour certificate

namespace {

struct CycleGeom {
  Polyline v;  // vertices, not closed
  std::vector<double> arc;
  double length = 0;
};

CycleGeom make_cycle(const Polyline& cycle) {
  CycleGeom c;
  c.v = cycle;
  if (c.v.size() > 1 && (c.v.front() - c.v.back()).norm() <= kEpsGeom) c.v.pop_back();
  if (c.v.size() < 2) throw Error(ErrorCode::WalkOffCycle, "cycle needs at least two vertices");
  for (std::size_t i = 0; i < c.v.size(); ++i) {
    c.arc.push_back(c.length);
    c.length += (c.v[(i + 1) % c.v.size()] - c.v[i]).norm();
  }
  return c;
}

// Lifted (unwrapped) arc coordinate of a walk, piecewise linear in time.
struct Lift {
  std::vector<double> t;
  std::vector<double> x;
};

// Fraction of p along cycle edge e, or nullopt if p is off it.
std::optional<double> on_edge(const CycleGeom& c, std::size_t e, const Point& p) {
  const Point& a = c.v[e];
  const Point& b = c.v[(e + 1) % c.v.size()];
  if (distance_to_segment(p, a, b) > 1e-9) return std::nullopt;
  return std::clamp((p - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
}

Lift lift_walk(const CycleGeom& c, const Route& r, const WalkSchedule& s) {
  validate_schedule(r, s);
  const std::size_t m = c.v.size();
  Lift L;
  if (r.segment_count() == 0) {
    for (std::size_t e = 0; e < m; ++e) {
      if (const auto f = on_edge(c, e, r.start())) {
        L.t.push_back(0);
        L.x.push_back(c.arc[e] + *f * (c.v[(e + 1) % m] - c.v[e]).norm());
        return L;
      }
    }
    throw Error(ErrorCode::WalkOffCycle, "route start is off the cycle");
  }
  double x_prev = 0;
  bool first = true;
  for (std::size_t i = 0; i < r.segment_count(); ++i) {
    const Segment seg = r.segment(i);
    // Candidate edges holding the whole segment; prefer continuity.
    std::optional<std::pair<double, double>> best;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < m; ++e) {
      const auto fa = on_edge(c, e, seg.a);
      const auto fb = on_edge(c, e, seg.b);
      if (!fa || !fb) continue;
      const double len = (c.v[(e + 1) % m] - c.v[e]).norm();
      const double xa0 = c.arc[e] + *fa * len;
      const double xb0 = c.arc[e] + *fb * len;
      // Shift by whole turns to sit next to the previous lifted value.
      double shift = 0;
      if (!first) shift = std::round((x_prev - xa0) / c.length) * c.length;
      const double gap = first ? 0 : std::abs(xa0 + shift - x_prev);
      if (gap < best_gap) {
        best_gap = gap;
        best = {xa0 + shift, xb0 + shift};
      }
    }
    if (!best || best_gap > 1e-6)
      throw Error(ErrorCode::WalkOffCycle, "route segment " + std::to_string(i) + " is off the cycle");
    const auto [xa, xb] = *best;
    for (const auto& b : s.segments[i]) {
      const double x = xa + b.fraction * (xb - xa);
      if (!L.t.empty() && b.time == L.t.back()) {
        L.x.back() = x;
        continue;
      }
      L.t.push_back(b.time);
      L.x.push_back(x);
    }
    x_prev = xb;
    first = false;
  }
  return L;
}

// Maximal touches of a level set {V + kC}: [t_first, t_last] at one level,
// with the side of the walk just before and just after (0 at the ends).
struct Touch {
  double level;
  double t_first;
  double t_last;
  int before;
  int after;
};

std::vector<Touch> touches(const Lift& L, double V, double C) {
  constexpr double tol = 1e-9;
  std::vector<Touch> out;
  auto level_near = [&](double x) {
    const double k = std::round((x - V) / C);
    const double lv = V + k * C;
    return std::abs(x - lv) <= tol ? std::optional<double>(lv) : std::nullopt;
  };
  auto side = [&](double x, double lv) { return x > lv + tol ? 1 : (x < lv - tol ? -1 : 0); };
  auto push = [&](double lv, double t, int before) {
    if (!out.empty() && out.back().level == lv && out.back().after == 0) {
      out.back().t_last = t;
      return;
    }
    out.push_back({lv, t, t, before, 0});
  };
  if (const auto lv = level_near(L.x[0])) push(*lv, L.t[0], 0);
  for (std::size_t i = 1; i < L.t.size(); ++i) {
    const double x0 = L.x[i - 1], x1 = L.x[i];
    const double t0 = L.t[i - 1], t1 = L.t[i];
    if (!out.empty() && out.back().after == 0) {
      // Leaving a touched level?
      const int s1 = side(x1, out.back().level);
      if (s1 != 0) {
        out.back().after = s1;
        // Crossing further levels within this piece handled below.
      } else {
        out.back().t_last = t1;
        continue;
      }
    }
    // Interior crossings of levels strictly between x0 and x1.
    const double lo = std::min(x0, x1), hi = std::max(x0, x1);
    const double k0 = std::ceil((lo - V - tol) / C), k1 = std::floor((hi - V + tol) / C);
    std::vector<double> levels;
    for (double k = k0; k <= k1; ++k) levels.push_back(V + k * C);
    if (x1 < x0) std::reverse(levels.begin(), levels.end());
    for (double lv : levels) {
      const int s0 = side(x0, lv);
      if (s0 == 0) continue;  // the level we just left
      const double tc = t0 + (lv - x0) / (x1 - x0) * (t1 - t0);
      const int s1 = side(x1, lv);
      out.push_back({lv, tc, tc, s0, s1});
      if (s1 == 0) break;  // piece ends on this level
    }
  }
  return out;
}

bool window_certifies(const Lift& tourer, const Lift& other, double V, double C) {
  const auto mine = touches(tourer, V, C);
  const auto theirs = touches(other, V, C);
  for (std::size_t i = 0; i + 1 < mine.size(); ++i) {
    const double dl = mine[i + 1].level - mine[i].level;
    if (std::abs(std::abs(dl) - C) > 1e-6) continue;
    const int sense = dl > 0 ? 1 : -1;
    const double t0 = mine[i].t_last, t1 = mine[i + 1].t_first;
    bool certified = true;
    for (const auto& th : theirs) {
      if (th.t_last < t0 || th.t_first > t1) continue;
      if (th.before == 0 || th.after == 0 || th.before == th.after) continue;  // touch, not traversal
      const int their_sense = th.after > th.before ? 1 : -1;
      certified = their_sense != sense;
      break;
    }
    if (certified) return true;
  }
  return false;
}

}  // namespace

bool tour_meeting_predicate(const Polyline& cycle, const Route& r1, const WalkSchedule& s1, const Route& r2,
                            const WalkSchedule& s2) {
  const CycleGeom c = make_cycle(cycle);
  const Lift l1 = lift_walk(c, r1, s1);
  const Lift l2 = lift_walk(c, r2, s2);
  for (double V : c.arc) {
    if (window_certifies(l1, l2, V, c.length) || window_certifies(l2, l1, V, c.length)) return true;
  }
  return false;
}

}  // namespace rdv
