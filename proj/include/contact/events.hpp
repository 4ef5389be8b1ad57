#ifndef CONTACT_EVENTS_HPP
#define CONTACT_EVENTS_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "contact/lattice.hpp"
#include "contact/rng.hpp"

namespace contact {

enum class EventKind : std::uint8_t { kDeath = 0, kArrow = 1 };

/// One graphical-construction mark: a death at `site`, or an arrow
/// `site -> site + dir` with dir in {-1, +1}.
struct Event {
  double time = 0.0;
  std::int32_t site = 0;
  std::int8_t dir = 0;
  EventKind kind = EventKind::kDeath;

  std::int32_t target() const { return site + dir; }
};

/// A realized graphical construction on window x span: death marks of
/// intensity 1 per site and arrows of intensity `birth_rate` per directed
/// nearest-neighbour edge, stored in one strictly time-ordered sequence.
/// Immutable once sampled; safe to share across threads.
struct EventLog {
  SiteInterval window;
  TimeInterval span;
  double birth_rate = 0.0;
  std::vector<Event> events;
};

/// Realized barrier jump attempts with uniform marks on the right attempts.
struct FlightPlan {
  TimeInterval span;
  double r_left = 0.0;
  double r0 = 0.0;
  double r1 = 0.0;
  std::vector<double> left_attempts;
  std::vector<std::pair<double, double>> right_attempts;  // (time, mark)

  double r_right() const { return std::max(r0, r1); }
};

/// Cadlag nearest-neighbour lattice path on a closed time interval.
struct LatticePath {
  TimeInterval domain;
  std::int32_t start_site = 0;
  std::vector<std::pair<double, std::int32_t>> jumps;  // (time, new site)

  /// Value at t (cadlag: includes a jump exactly at t).
  std::int32_t at(double t) const {
    auto it = std::upper_bound(
        jumps.begin(), jumps.end(), t,
        [](double v, const std::pair<double, std::int32_t>& j) { return v < j.first; });
    return it == jumps.begin() ? start_site : std::prev(it)->second;
  }

  /// Left limit at t.
  std::int32_t before(double t) const {
    auto it = std::lower_bound(
        jumps.begin(), jumps.end(), t,
        [](const std::pair<double, std::int32_t>& j, double v) { return j.first < v; });
    return it == jumps.begin() ? start_site : std::prev(it)->second;
  }

  std::int32_t end_site() const { return jumps.empty() ? start_site : jumps.back().second; }
};

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Emits the events of a fresh graphical construction in time order, as the
/// superposition of the per-stream Poisson processes. The sequence is a pure
/// function of the RngStream state. `visit` returns false to stop early.
template <class F>
inline void stream_events(SiteInterval window, TimeInterval span, double birth_rate,
                          RngStream& rng, F&& visit) {
  const std::int64_t n_sites = window.size();
  const std::int64_t n_edges = n_sites > 1 ? 2 * (n_sites - 1) : 0;
  const double death_total = static_cast<double>(n_sites);
  const double total = death_total + birth_rate * static_cast<double>(n_edges);
  if (!(total > 0.0) || !(span.length() > 0.0)) return;
  double t = span.lo;
  for (;;) {
    const double prev = t;
    t += rng.next_exp(total);
    if (t <= prev) t = std::nextafter(prev, span.hi + 1.0);  // keep strict order
    if (!(t < span.hi)) break;
    const double u = rng.next_unit() * total;
    Event e;
    e.time = t;
    if (u < death_total) {
      std::int64_t k = static_cast<std::int64_t>(u);
      if (k >= n_sites) k = n_sites - 1;
      e.kind = EventKind::kDeath;
      e.site = window.lo + static_cast<std::int32_t>(k);
      e.dir = 0;
    } else {
      std::int64_t ei = static_cast<std::int64_t>((u - death_total) / birth_rate);
      if (ei >= n_edges) ei = n_edges - 1;
      const std::int64_t k = ei >> 1;
      e.kind = EventKind::kArrow;
      if ((ei & 1) == 0) {
        e.site = window.lo + static_cast<std::int32_t>(k);
        e.dir = +1;
      } else {
        e.site = window.lo + static_cast<std::int32_t>(k + 1);
        e.dir = -1;
      }
    }
    if (!visit(e)) break;
  }
}

inline EventLog sample_event_log(SiteInterval window, TimeInterval span,
                                 double birth_rate, std::uint64_t seed,
                                 std::uint64_t stream) {
  require(window.valid(), "sample_event_log: inverted window");
  require(span.valid(), "sample_event_log: inverted span");
  require(birth_rate >= 0.0, "sample_event_log: negative birth rate");
  EventLog log;
  log.window = window;
  log.span = span;
  log.birth_rate = birth_rate;
  RngStream rng(seed, stream);
  stream_events(window, span, birth_rate, rng, [&](const Event& e) {
    log.events.push_back(e);
    return true;
  });
  return log;
}

inline FlightPlan sample_flight_plan(double r_left, double r0, double r1,
                                     TimeInterval span, std::uint64_t seed,
                                     std::uint64_t stream) {
  require(r_left >= 0.0 && r0 >= 0.0 && r1 >= 0.0,
          "sample_flight_plan: negative rate");
  require(span.valid(), "sample_flight_plan: inverted span");
  FlightPlan plan;
  plan.span = span;
  plan.r_left = r_left;
  plan.r0 = r0;
  plan.r1 = r1;
  RngStream rng(seed, stream);
  if (r_left > 0.0 && span.length() > 0.0) {
    for (double t = span.lo + rng.next_exp(r_left); t < span.hi;
         t += rng.next_exp(r_left))
      plan.left_attempts.push_back(t);
  }
  const double rr = plan.r_right();
  if (rr > 0.0 && span.length() > 0.0) {
    for (double t = span.lo + rng.next_exp(rr); t < span.hi; t += rng.next_exp(rr))
      plan.right_attempts.emplace_back(t, rng.next_unit());
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Reachability by infection paths
// ---------------------------------------------------------------------------

/// True iff an infection path of `log` connects src to dst: the path avoids
/// death marks on its current site and jumps exactly at traversed arrows.
inline bool reachable(const EventLog& log, SpaceTimePoint src, SpaceTimePoint dst) {
  require(src.time <= dst.time, "reachable: src.time > dst.time");
  require(log.window.contains(src.site) && log.window.contains(dst.site),
          "reachable: point outside window");
  require(log.span.contains(src.time) && log.span.contains(dst.time),
          "reachable: time outside span");
  SiteBits live(log.window);
  live.set(src.site);
  for (const Event& e : log.events) {
    if (e.time < src.time) continue;
    if (e.time > dst.time) break;
    if (e.kind == EventKind::kDeath) {
      live.unset(e.site);
    } else if (e.time > src.time) {
      if (live.test(e.site)) live.set(e.target());
    }
  }
  return live.test(dst.site);
}

/// Forward closure: all sites y with some source ~> (y, t).
inline std::vector<std::int32_t> descendants(const EventLog& log,
                                             const std::vector<SpaceTimePoint>& sources,
                                             double t) {
  require(log.span.contains(t), "descendants: t outside span");
  for (const auto& s : sources) {
    require(s.time <= t, "descendants: source after t");
    require(log.window.contains(s.site), "descendants: source outside window");
  }
  std::vector<SpaceTimePoint> srcs = sources;
  std::sort(srcs.begin(), srcs.end(),
            [](const SpaceTimePoint& a, const SpaceTimePoint& b) {
              return a.time < b.time;
            });
  SiteBits live(log.window);
  std::size_t next_src = 0;
  auto admit = [&](double up_to) {
    while (next_src < srcs.size() && srcs[next_src].time <= up_to)
      live.set(srcs[next_src++].site);
  };
  for (const Event& e : log.events) {
    if (e.time > t) break;
    if (e.kind == EventKind::kDeath) {
      admit(e.time);  // a source exactly at a death instant is killed with it
      live.unset(e.site);
    } else {
      admit(std::nextafter(e.time, -1e300));  // sources strictly before can ride
      if (live.test(e.site)) live.set(e.target());
    }
  }
  admit(t);
  return live.to_sites();
}

// ---------------------------------------------------------------------------
// Extremal infection paths
// ---------------------------------------------------------------------------

enum class PathSide { kLeftmost, kRightmost };

namespace detail {

// Survivor snapshots for paths on (a, b]: snap[k] holds the sites from which
// the remaining time can still be completed, valid on the open interval
// between event k and event k+1. Built backward from `init` at time b.
struct SurvSnapshots {
  std::vector<const Event*> events;  // ascending, times in (a, b]
  std::vector<SiteBits> snap;        // size events.size() + 1

  void build(const EventLog& log, double a, double b, const SiteBits& init) {
    events.clear();
    for (const Event& e : log.events)
      if (e.time > a && e.time <= b) events.push_back(&e);
    const std::size_t k_max = events.size();
    snap.assign(k_max + 1, SiteBits{});
    snap[k_max] = init;
    for (std::size_t k = k_max; k >= 1; --k) {
      SiteBits s = snap[k];
      const Event& e = *events[k - 1];
      if (e.kind == EventKind::kDeath) {
        s.unset(e.site);
      } else if (s.test(e.target()) && log.window.contains(e.site)) {
        s.set(e.site);
      }
      snap[k - 1] = std::move(s);
    }
  }
};

inline std::optional<LatticePath> extremal_path_impl(
    const EventLog& log, const std::vector<std::int32_t>& sources, double a,
    double b, std::optional<std::int32_t> target_site, PathSide side) {
  require(!sources.empty(), "extremal_path: empty sources");
  require(a < b, "extremal_path: need a < b");
  require(log.span.lo <= a && b <= log.span.hi, "extremal_path: outside span");

  SiteBits init(log.window);
  if (target_site) {
    init.set(*target_site);
  } else {
    for (std::int32_t x = log.window.lo; x <= log.window.hi; ++x) init.set(x);
  }
  SurvSnapshots sv;
  sv.build(log, a, b, init);

  const bool leftmost = side == PathSide::kLeftmost;
  std::int32_t cur = leftmost ? kNoSiteHigh : kNoSiteLow;
  for (std::int32_t s : sources) {
    require(log.window.contains(s), "extremal_path: source outside window");
    if (!sv.snap[0].test(s)) continue;
    cur = leftmost ? std::min(cur, s) : std::max(cur, s);
  }
  if (cur == kNoSiteHigh || cur == kNoSiteLow) return std::nullopt;

  LatticePath path;
  path.domain = {a, b};
  path.start_site = cur;
  for (std::size_t k = 1; k <= sv.events.size(); ++k) {
    const Event& e = *sv.events[k - 1];
    if (e.kind != EventKind::kArrow || e.site != cur) continue;
    const std::int32_t y = e.target();
    const bool y_ok = log.window.contains(y) && sv.snap[k].test(y);
    const bool toward_extreme = leftmost ? (y < cur) : (y > cur);
    if ((toward_extreme && y_ok) || (!sv.snap[k].test(cur) && y_ok)) {
      cur = y;
      path.jumps.emplace_back(e.time, cur);
    }
  }
  return path;
}

}  // namespace detail

/// The a.s.-unique extremal infection path from sources x {a} reaching time b
/// (ties broken at the first divergence time), or nullopt if none survives.
inline std::optional<LatticePath> extremal_path(const EventLog& log,
                                                const std::vector<std::int32_t>& sources,
                                                double a, double b, PathSide side) {
  return detail::extremal_path_impl(log, sources, a, b, std::nullopt, side);
}

/// Extremal infection path from sources x {a} to a fixed endpoint (site, b).
inline std::optional<LatticePath> extremal_path_to(const EventLog& log,
                                                   const std::vector<std::int32_t>& sources,
                                                   double a, SpaceTimePoint dst,
                                                   PathSide side) {
  return detail::extremal_path_impl(log, sources, a, dst.time, dst.site, side);
}

// ---------------------------------------------------------------------------
// Left/Right decompositions along a path
// ---------------------------------------------------------------------------

enum class SplitMode { kLeft, kRightPlus, kRight, kLeftPlus };

/// Splits the span-restricted log along `path`. With m(s) = max of the path's
/// left limit and value at s: `left` keeps deaths at sites <= m(s) and arrows
/// with both endpoints <= m(s); `right_plus` keeps exactly the complement.
/// `right`/`left_plus` mirror this with sites >= m(s).
inline EventLog split(const EventLog& log, const LatticePath& path, SplitMode mode) {
  require(log.span.lo <= path.domain.lo && path.domain.hi <= log.span.hi,
          "split: path domain outside span");
  EventLog out;
  out.window = log.window;
  out.span = path.domain;
  out.birth_rate = log.birth_rate;
  for (const Event& e : log.events) {
    if (e.time < path.domain.lo || e.time > path.domain.hi) continue;
    const std::int32_t m = std::max(path.before(e.time), path.at(e.time));
    bool in_left, in_right;
    if (e.kind == EventKind::kDeath) {
      in_left = e.site <= m;
      in_right = e.site >= m;
    } else {
      in_left = std::max(e.site, e.target()) <= m;
      in_right = std::min(e.site, e.target()) >= m;
    }
    bool keep = false;
    switch (mode) {
      case SplitMode::kLeft: keep = in_left; break;
      case SplitMode::kRightPlus: keep = !in_left; break;
      case SplitMode::kRight: keep = in_right; break;
      case SplitMode::kLeftPlus: keep = !in_right; break;
    }
    if (keep) out.events.push_back(e);
  }
  return out;
}

/// Glues Left_path(log) to Right+_path(fresh): the lawful resampling of the
/// right part when `path` is right-preserving (fresh must be an independent
/// log with identical window, span and rate).
inline EventLog resample_side(const EventLog& log, const LatticePath& path,
                              const EventLog& fresh) {
  require(log.window.lo == fresh.window.lo && log.window.hi == fresh.window.hi &&
              log.span.lo == fresh.span.lo && log.span.hi == fresh.span.hi &&
              log.birth_rate == fresh.birth_rate,
          "resample_side: mismatched window/span/rate");
  EventLog left = split(log, path, SplitMode::kLeft);
  EventLog rightp = split(fresh, path, SplitMode::kRightPlus);
  EventLog out;
  out.window = log.window;
  out.span = path.domain;
  out.birth_rate = log.birth_rate;
  out.events.resize(left.events.size() + rightp.events.size());
  std::merge(left.events.begin(), left.events.end(), rightp.events.begin(),
             rightp.events.end(), out.events.begin(),
             [](const Event& a, const Event& b) { return a.time < b.time; });
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// Line-oriented debug dump: `D <site> <time>` or `A <from> <to> <time>`,
/// in time order. Used by golden tests.
inline void dump_event_log(const EventLog& log, std::ostream& os) {
  char buf[96];
  for (const Event& e : log.events) {
    if (e.kind == EventKind::kDeath)
      std::snprintf(buf, sizeof buf, "D %d %.17g\n", e.site, e.time);
    else
      std::snprintf(buf, sizeof buf, "A %d %d %.17g\n", e.site, e.target(), e.time);
    os << buf;
  }
}

/// Structural invariants: strictly increasing times, everything in range.
inline bool validate_event_log(const EventLog& log) {
  double prev = -1e300;
  for (const Event& e : log.events) {
    if (!(e.time > prev)) return false;
    prev = e.time;
    if (!(e.time >= log.span.lo && e.time <= log.span.hi)) return false;
    if (!log.window.contains(e.site)) return false;
    if (e.kind == EventKind::kArrow && !log.window.contains(e.target())) return false;
    if (e.kind == EventKind::kArrow && e.dir != 1 && e.dir != -1) return false;
  }
  return true;
}

}  // namespace contact

#endif  // CONTACT_EVENTS_HPP
