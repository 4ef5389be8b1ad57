#ifndef CONTACT_DYNAMICS_HPP
#define CONTACT_DYNAMICS_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "contact/events.hpp"
#include "contact/lattice.hpp"

namespace contact {

enum class Model : std::uint8_t { kCp, kCbp, kMcp };

struct CbpParams {
  double lambda = 0.0;
  double r_left = 0.0;
  double r0 = 0.0;
  double r1 = 0.0;

  double r_right() const { return std::max(r0, r1); }
  bool valid() const {
    return lambda >= 0 && r_left >= 0 && r0 >= 0 && r1 >= 0;
  }
};

struct McpParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  bool valid() const { return lambda1 >= 0 && lambda2 >= 0; }
};

/// Configuration in the barrier space: one barrier site, everything to its
/// left empty, occupancy only to its right.
struct CbpConfiguration {
  std::int32_t barrier = 0;
  std::vector<std::int32_t> occupied;  // sorted, all > barrier

  static CbpConfiguration heaviside(SiteInterval w) {
    CbpConfiguration c;
    c.barrier = 0;
    for (std::int32_t x = 1; x <= w.hi; ++x) c.occupied.push_back(x);
    return c;
  }

  bool valid(SiteInterval w) const {
    if (!w.contains(barrier)) return false;
    std::int32_t prev = barrier;
    for (std::int32_t x : occupied) {
      if (x <= prev || !w.contains(x)) return false;
      prev = x;
    }
    return true;
  }
};

/// Configuration in the two-species space: type 1 entirely left of type 2.
struct McpConfiguration {
  std::vector<std::int32_t> type1;  // sorted
  std::vector<std::int32_t> type2;  // sorted

  static McpConfiguration heaviside(SiteInterval w) {
    McpConfiguration c;
    for (std::int32_t x = w.lo; x <= 0; ++x) c.type1.push_back(x);
    for (std::int32_t x = 1; x <= w.hi; ++x) c.type2.push_back(x);
    return c;
  }

  bool valid(SiteInterval w) const {
    for (std::int32_t x : type1)
      if (!w.contains(x)) return false;
    for (std::int32_t x : type2)
      if (!w.contains(x)) return false;
    if (!type1.empty() && !type2.empty() && type1.back() >= type2.front())
      return false;
    return true;
  }
};

/// One state change at a site (occupancy 0/1, or type 0/1/2 for MCP).
struct Delta {
  double time = 0.0;
  std::int32_t site = 0;
  std::int8_t before = 0;
  std::int8_t after = 0;
};

/// A realized run: initial state plus the journal of all state changes and
/// barrier moves. States at intermediate times are recovered by replay.
struct Trajectory {
  Model model = Model::kCp;
  SiteInterval window;
  TimeInterval span;
  std::int32_t barrier0 = 0;              // CBP only
  std::vector<std::int8_t> state0;        // indexed by site - window.lo
  std::vector<Delta> deltas;
  std::vector<std::pair<double, std::int32_t>> barrier_moves;  // (time, new site)
  bool tainted = false;
  bool sentinel_seen = false;  // some interface component ran off the window

  std::int8_t initial_state(std::int32_t x) const {
    return state0[static_cast<std::size_t>(x - window.lo)];
  }

  std::int8_t state_at(std::int32_t x, double t) const {
    std::int8_t s = initial_state(x);
    for (const Delta& d : deltas) {
      if (d.time > t) break;
      if (d.site == x) s = d.after;
    }
    return s;
  }

  std::int32_t barrier_at(double t) const {
    std::int32_t b = barrier0;
    for (const auto& m : barrier_moves) {
      if (m.first > t) break;
      b = m.second;
    }
    return b;
  }
};

/// Piecewise-constant record of the interface pair: (B, ell) for CBP,
/// (r, ell) for MCP. `b == kNoSiteHigh` / `a == kNoSiteLow` encode a missing
/// population; statistics drop such samples and report the frequency.
struct InterfacePoint {
  double time = 0.0;
  std::int32_t a = 0;
  std::int32_t b = 0;
};

struct InterfaceTrajectory {
  Model model = Model::kCbp;
  TimeInterval span;
  InterfacePoint init;                  // value at span.lo
  std::vector<InterfacePoint> changes;  // strictly increasing times

  InterfacePoint at(double t) const {
    InterfacePoint cur = init;
    for (const auto& c : changes) {
      if (c.time > t) break;
      cur = c;
    }
    cur.time = t;
    return cur;
  }

  /// Interface position (midpoint); NaN when a side is missing.
  double midpoint_at(double t) const {
    const InterfacePoint p = at(t);
    if (p.a == kNoSiteLow || p.b == kNoSiteHigh)
      return std::numeric_limits<double>::quiet_NaN();
    return 0.5 * (static_cast<double>(p.a) + static_cast<double>(p.b));
  }

  double duration() const { return span.length(); }
};

// ---------------------------------------------------------------------------
// Engines. One source of truth for the transition rules; evolve_* wrappers
// journal into a Trajectory, harness runners drive the same engines directly.
// ---------------------------------------------------------------------------

struct CpEngine {
  SiteInterval window;
  SiteBits occ;
  std::int32_t rmax = kNoSiteLow;
  std::int32_t front_left = 0;   // rightmost site influenced from the left edge
  std::int32_t front_right = 0;  // leftmost site influenced from the right edge
  bool tainted = false;
  Trajectory* journal = nullptr;

  void init(const std::vector<std::int32_t>& sites, SiteInterval w) {
    window = w;
    occ.reset(w);
    rmax = kNoSiteLow;
    front_left = w.lo;
    front_right = w.hi;
    tainted = false;
    for (std::int32_t x : sites) {
      require(w.contains(x), "evolve_cp: init outside window");
      occ.set(x);
      rmax = std::max(rmax, x);
    }
  }

  void check() {
    if (rmax != kNoSiteLow && (rmax >= front_right || rmax <= front_left))
      tainted = true;
  }

  void death(double t, std::int32_t x) {
    if (!occ.test(x)) return;
    occ.unset(x);
    if (journal) journal->deltas.push_back({t, x, 1, 0});
    if (x == rmax) rmax = occ.prev_set(x - 1);
  }

  void arrow(double t, std::int32_t x, std::int32_t y) {
    if (x == front_right && y == x - 1) front_right = y;
    if (x == front_left && y == x + 1) front_left = y;
    if (occ.test(x) && !occ.test(y)) {
      occ.set(y);
      if (journal) journal->deltas.push_back({t, y, 0, 1});
      if (y > rmax) rmax = y;
    }
    check();
  }
};

struct CbpEngine {
  SiteInterval window;
  CbpParams params;
  SiteBits occ;  // only sites > barrier
  std::int32_t barrier = 0;
  std::int32_t ell = kNoSiteHigh;  // min occupied
  std::int32_t front_right = 0;
  bool tainted = false;
  bool sentinel_seen = false;
  Trajectory* journal = nullptr;
  double thr0 = 0.0, thr1 = 0.0;

  void init(const CbpConfiguration& c, SiteInterval w, const CbpParams& p) {
    require(c.valid(w), "evolve_cbp: invalid initial configuration");
    require(p.valid(), "evolve_cbp: negative rate");
    window = w;
    params = p;
    occ.reset(w);
    barrier = c.barrier;
    ell = kNoSiteHigh;
    front_right = w.hi;
    tainted = false;
    sentinel_seen = false;
    const double rr = p.r_right();
    thr0 = rr > 0 ? p.r0 / rr : 0.0;
    thr1 = rr > 0 ? p.r1 / rr : 0.0;
    for (std::int32_t x : c.occupied) {
      occ.set(x);
      ell = std::min(ell, x);
    }
    if (ell == kNoSiteHigh) sentinel_seen = true;
  }

  void refresh_ell(std::int32_t from) {
    ell = occ.next_set(from);
    if (ell == kNoSiteHigh) sentinel_seen = true;
  }

  void check() {
    if (ell != kNoSiteHigh && ell >= front_right) tainted = true;
    if (barrier < window.lo) tainted = true;
  }

  void death(double t, std::int32_t x) {
    if (x <= barrier || !occ.test(x)) return;
    occ.unset(x);
    if (journal) journal->deltas.push_back({t, x, 1, 0});
    if (x == ell) refresh_ell(x + 1);
  }

  void arrow(double t, std::int32_t x, std::int32_t y) {
    if (x == front_right && y == x - 1) front_right = y;
    if (occ.test(x) && y > barrier && !occ.test(y)) {
      occ.set(y);
      if (journal) journal->deltas.push_back({t, y, 0, 1});
      if (y < ell) ell = y;
    }
    check();
  }

  void attempt_left(double t) {
    if (barrier - 1 < window.lo) {
      tainted = true;
      return;
    }
    barrier -= 1;
    if (journal) journal->barrier_moves.emplace_back(t, barrier);
    check();
  }

  void attempt_right(double t, double mark) {
    const std::int32_t dest = barrier + 1;
    if (dest > window.hi) {
      tainted = true;
      return;
    }
    const bool dest_occupied = occ.test(dest);
    const bool accept = mark <= (dest_occupied ? thr1 : thr0);
    if (!accept) return;
    if (dest_occupied) {
      occ.unset(dest);
      if (journal) journal->deltas.push_back({t, dest, 1, 0});
    }
    barrier = dest;
    if (dest == ell) refresh_ell(dest + 1);
    if (journal) journal->barrier_moves.emplace_back(t, barrier);
    check();
  }
};

struct McpEngine {
  SiteInterval window;
  SiteBits b1, b2;
  std::int32_t r1max = kNoSiteLow;   // rightmost type 1
  std::int32_t l2min = kNoSiteHigh;  // leftmost type 2
  std::int32_t front_left = 0, front_right = 0;
  bool tainted = false;
  bool sentinel_seen = false;
  Trajectory* journal = nullptr;

  void init(const McpConfiguration& c, SiteInterval w) {
    require(c.valid(w), "evolve_mcp: invalid initial configuration");
    window = w;
    b1.reset(w);
    b2.reset(w);
    r1max = kNoSiteLow;
    l2min = kNoSiteHigh;
    front_left = w.lo;
    front_right = w.hi;
    tainted = false;
    sentinel_seen = false;
    for (std::int32_t x : c.type1) {
      b1.set(x);
      r1max = std::max(r1max, x);
    }
    for (std::int32_t x : c.type2) {
      b2.set(x);
      l2min = std::min(l2min, x);
    }
    if (r1max == kNoSiteLow || l2min == kNoSiteHigh) sentinel_seen = true;
  }

  std::int8_t state(std::int32_t x) const {
    return b1.test(x) ? 1 : (b2.test(x) ? 2 : 0);
  }

  void check() {
    if (r1max != kNoSiteLow && (r1max <= front_left || r1max >= front_right))
      tainted = true;
    if (l2min != kNoSiteHigh && (l2min <= front_left || l2min >= front_right))
      tainted = true;
  }

  void death(double t, std::int32_t x, int type) {
    SiteBits& b = type == 1 ? b1 : b2;
    if (!b.test(x)) return;
    b.unset(x);
    if (journal) journal->deltas.push_back({t, x, static_cast<std::int8_t>(type), 0});
    if (type == 1 && x == r1max) {
      r1max = b1.prev_set(x - 1);
      if (r1max == kNoSiteLow) sentinel_seen = true;
    } else if (type == 2 && x == l2min) {
      l2min = b2.next_set(x + 1);
      if (l2min == kNoSiteHigh) sentinel_seen = true;
    }
  }

  void arrow(double t, std::int32_t x, std::int32_t y, int type) {
    if (x == front_right && y == x - 1) front_right = y;
    if (x == front_left && y == x + 1) front_left = y;
    SiteBits& b = type == 1 ? b1 : b2;
    // births onto sites held by the opposite type are prohibited
    if (b.test(x) && !b1.test(y) && !b2.test(y)) {
      b.set(y);
      if (journal) journal->deltas.push_back({t, y, 0, static_cast<std::int8_t>(type)});
      if (type == 1 && y > r1max) r1max = y;
      if (type == 2 && y < l2min) l2min = y;
    }
    check();
  }
};

// ---------------------------------------------------------------------------
// Lazy event generation (identical sequence to sample_event_log)
// ---------------------------------------------------------------------------

class EventStream {
 public:
  EventStream(SiteInterval window, TimeInterval span, double birth_rate,
              std::uint64_t seed, std::uint64_t stream)
      : window_(window), span_(span), rate_(birth_rate), rng_(seed, stream) {
    const std::int64_t n = window.size();
    n_edges_ = n > 1 ? 2 * (n - 1) : 0;
    total_ = static_cast<double>(n) + rate_ * static_cast<double>(n_edges_);
    t_ = span.lo;
    done_ = !(total_ > 0.0) || !(span.length() > 0.0);
    advance();
  }

  const Event* peek() const { return done_ ? nullptr : &cur_; }

  void advance() {
    if (done_) return;
    const double prev = t_;
    t_ += rng_.next_exp(total_);
    if (t_ <= prev) t_ = std::nextafter(prev, span_.hi + 1.0);
    if (!(t_ < span_.hi)) {
      done_ = true;
      return;
    }
    const double n_sites = static_cast<double>(window_.size());
    const double u = rng_.next_unit() * total_;
    cur_.time = t_;
    if (u < n_sites) {
      std::int64_t k = static_cast<std::int64_t>(u);
      if (k >= window_.size()) k = window_.size() - 1;
      cur_.kind = EventKind::kDeath;
      cur_.site = window_.lo + static_cast<std::int32_t>(k);
      cur_.dir = 0;
    } else {
      std::int64_t ei = static_cast<std::int64_t>((u - n_sites) / rate_);
      if (ei >= n_edges_) ei = n_edges_ - 1;
      const std::int64_t k = ei >> 1;
      cur_.kind = EventKind::kArrow;
      if ((ei & 1) == 0) {
        cur_.site = window_.lo + static_cast<std::int32_t>(k);
        cur_.dir = +1;
      } else {
        cur_.site = window_.lo + static_cast<std::int32_t>(k + 1);
        cur_.dir = -1;
      }
    }
  }

 private:
  SiteInterval window_;
  TimeInterval span_;
  double rate_;
  RngStream rng_;
  std::int64_t n_edges_ = 0;
  double total_ = 0.0;
  double t_ = 0.0;
  bool done_ = false;
  Event cur_;
};

// ---------------------------------------------------------------------------
// Evolution (materialized-log module API)
// ---------------------------------------------------------------------------

inline Trajectory evolve_cp(const std::vector<std::int32_t>& init,
                            const EventLog& log, TimeInterval span) {
  require(span.valid() && log.span.lo <= span.lo && span.hi <= log.span.hi,
          "evolve_cp: span exceeds log span");
  Trajectory traj;
  traj.model = Model::kCp;
  traj.window = log.window;
  traj.span = span;
  traj.state0.assign(static_cast<std::size_t>(log.window.size()), 0);
  for (std::int32_t x : init) {
    require(log.window.contains(x), "evolve_cp: init outside window");
    traj.state0[static_cast<std::size_t>(x - log.window.lo)] = 1;
  }
  CpEngine eng;
  eng.init(init, log.window);
  eng.journal = &traj;
  for (const Event& e : log.events) {
    if (e.time <= span.lo) continue;
    if (e.time > span.hi) break;
    if (e.kind == EventKind::kDeath)
      eng.death(e.time, e.site);
    else
      eng.arrow(e.time, e.site, e.target());
  }
  traj.tainted = eng.tainted;
  return traj;
}

inline Trajectory evolve_cbp(const CbpConfiguration& init, const EventLog& log,
                             const FlightPlan& plan, const CbpParams& params,
                             TimeInterval span) {
  require(span.valid() && log.span.lo <= span.lo && span.hi <= log.span.hi,
          "evolve_cbp: span exceeds log span");
  require(plan.span.lo <= span.lo && span.hi <= plan.span.hi,
          "evolve_cbp: span exceeds plan span");
  Trajectory traj;
  traj.model = Model::kCbp;
  traj.window = log.window;
  traj.span = span;
  traj.barrier0 = init.barrier;
  traj.state0.assign(static_cast<std::size_t>(log.window.size()), 0);
  for (std::int32_t x : init.occupied)
    traj.state0[static_cast<std::size_t>(x - log.window.lo)] = 1;

  CbpEngine eng;
  eng.init(init, log.window, params);
  eng.journal = &traj;

  std::size_t ei = 0, li = 0, ri = 0;
  const auto& ev = log.events;
  while (ei < ev.size() && ev[ei].time <= span.lo) ++ei;
  while (li < plan.left_attempts.size() && plan.left_attempts[li] <= span.lo) ++li;
  while (ri < plan.right_attempts.size() && plan.right_attempts[ri].first <= span.lo)
    ++ri;
  for (;;) {
    double te = ei < ev.size() ? ev[ei].time : 1e300;
    double tl = li < plan.left_attempts.size() ? plan.left_attempts[li] : 1e300;
    double tr = ri < plan.right_attempts.size() ? plan.right_attempts[ri].first : 1e300;
    const double t = std::min({te, tl, tr});
    if (t > span.hi || t >= 1e300) break;
    if (te <= tl && te <= tr) {
      const Event& e = ev[ei++];
      if (e.kind == EventKind::kDeath)
        eng.death(e.time, e.site);
      else
        eng.arrow(e.time, e.site, e.target());
    } else if (tl <= tr) {
      eng.attempt_left(tl);
      ++li;
    } else {
      eng.attempt_right(plan.right_attempts[ri].first, plan.right_attempts[ri].second);
      ++ri;
    }
  }
  traj.tainted = eng.tainted;
  traj.sentinel_seen = eng.sentinel_seen;
  return traj;
}

/// Evolves the two-species process on the finite window. The initial
/// configuration is restricted to [-truncation_radius, truncation_radius];
/// the taint flag certifies that the window never interacted with its
/// boundary, which is what makes the finite run agree with the nested-box
/// limit construction.
inline Trajectory evolve_mcp(const McpConfiguration& init, const EventLog& log1,
                             const EventLog& log2, TimeInterval span,
                             std::int32_t truncation_radius) {
  require(span.valid() && log1.span.lo <= span.lo && span.hi <= log1.span.hi,
          "evolve_mcp: span exceeds log span");
  require(log2.span.lo <= span.lo && span.hi <= log2.span.hi,
          "evolve_mcp: span exceeds log span");
  require(log1.window.lo == log2.window.lo && log1.window.hi == log2.window.hi,
          "evolve_mcp: mismatched windows");
  McpConfiguration restricted;
  for (std::int32_t x : init.type1)
    if (x >= -truncation_radius && x <= truncation_radius)
      restricted.type1.push_back(x);
  for (std::int32_t x : init.type2)
    if (x >= -truncation_radius && x <= truncation_radius)
      restricted.type2.push_back(x);

  Trajectory traj;
  traj.model = Model::kMcp;
  traj.window = log1.window;
  traj.span = span;
  traj.state0.assign(static_cast<std::size_t>(traj.window.size()), 0);
  for (std::int32_t x : restricted.type1)
    traj.state0[static_cast<std::size_t>(x - traj.window.lo)] = 1;
  for (std::int32_t x : restricted.type2)
    traj.state0[static_cast<std::size_t>(x - traj.window.lo)] = 2;

  McpEngine eng;
  eng.init(restricted, traj.window);
  eng.journal = &traj;
  if (truncation_radius + 1 > std::min<std::int64_t>(-traj.window.lo, traj.window.hi))
    eng.tainted = true;

  std::size_t i1 = 0, i2 = 0;
  const auto& e1 = log1.events;
  const auto& e2 = log2.events;
  while (i1 < e1.size() && e1[i1].time <= span.lo) ++i1;
  while (i2 < e2.size() && e2[i2].time <= span.lo) ++i2;
  for (;;) {
    const double t1 = i1 < e1.size() ? e1[i1].time : 1e300;
    const double t2 = i2 < e2.size() ? e2[i2].time : 1e300;
    const double t = std::min(t1, t2);
    if (t > span.hi || t >= 1e300) break;
    const int type = t1 <= t2 ? 1 : 2;
    const Event& e = type == 1 ? e1[i1++] : e2[i2++];
    if (e.kind == EventKind::kDeath)
      eng.death(e.time, e.site, type);
    else
      eng.arrow(e.time, e.site, e.target(), type);
  }
  traj.tainted = traj.tainted || eng.tainted;
  traj.sentinel_seen = eng.sentinel_seen;
  return traj;
}

// ---------------------------------------------------------------------------
// Interface extraction
// ---------------------------------------------------------------------------

/// Reads the interface pair off a trajectory by journal replay: (B, ell) for
/// CBP, (r, ell) for MCP, change points exactly where the pair changes.
inline InterfaceTrajectory extract_interface(const Trajectory& traj) {
  require(traj.model != Model::kCp, "extract_interface: needs CBP or MCP run");
  InterfaceTrajectory out;
  out.model = traj.model;
  out.span = traj.span;

  SiteBits lowbits(traj.window), highbits(traj.window);
  for (std::int32_t x = traj.window.lo; x <= traj.window.hi; ++x) {
    const std::int8_t s = traj.initial_state(x);
    if (traj.model == Model::kCbp) {
      if (s == 1) highbits.set(x);
    } else {
      if (s == 1) lowbits.set(x);
      if (s == 2) highbits.set(x);
    }
  }
  std::int32_t a, b;
  if (traj.model == Model::kCbp) {
    a = traj.barrier0;
    b = highbits.next_set(traj.window.lo);
  } else {
    a = lowbits.prev_set(traj.window.hi);
    b = highbits.next_set(traj.window.lo);
  }
  out.init = {traj.span.lo, a, b};

  std::size_t di = 0, bi = 0;
  const auto emit = [&](double t) {
    if (out.changes.empty()) {
      if (a != out.init.a || b != out.init.b) out.changes.push_back({t, a, b});
    } else if (a != out.changes.back().a || b != out.changes.back().b) {
      out.changes.push_back({t, a, b});
    }
  };
  while (di < traj.deltas.size() || bi < traj.barrier_moves.size()) {
    const double td = di < traj.deltas.size() ? traj.deltas[di].time : 1e300;
    const double tb =
        bi < traj.barrier_moves.size() ? traj.barrier_moves[bi].first : 1e300;
    if (td <= tb) {
      const Delta& d = traj.deltas[di++];
      if (traj.model == Model::kCbp) {
        if (d.after == 1) {
          highbits.set(d.site);
          b = std::min(b, d.site);
        } else {
          highbits.unset(d.site);
          if (d.site == b) b = highbits.next_set(d.site + 1);
        }
      } else {
        SiteBits& bits = (d.after == 1 || d.before == 1) ? lowbits : highbits;
        if (d.after != 0) {
          bits.set(d.site);
          if (d.after == 1) a = std::max(a, d.site);
          if (d.after == 2) b = std::min(b, d.site);
        } else {
          bits.unset(d.site);
          if (d.before == 1 && d.site == a) a = lowbits.prev_set(d.site - 1);
          if (d.before == 2 && d.site == b) b = highbits.next_set(d.site + 1);
        }
      }
      emit(d.time);
    } else {
      a = traj.barrier_moves[bi].second;
      emit(traj.barrier_moves[bi].first);
      ++bi;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constrained reachability
// ---------------------------------------------------------------------------

enum class PathMode : std::uint8_t { kBarrierFree, kActive1, kActive2 };

/// All sites reachable from `sources` by paths that stay strictly right of
/// the realized barrier of `traj` at every time.
inline SiteBits barrier_free_closure(const Trajectory& traj, const EventLog& log,
                                     const std::vector<SpaceTimePoint>& sources,
                                     double t_end) {
  require(traj.model == Model::kCbp, "barrier_free_closure: CBP run required");
  SiteBits live(log.window);
  std::vector<SpaceTimePoint> srcs = sources;
  std::sort(srcs.begin(), srcs.end(),
            [](const SpaceTimePoint& x, const SpaceTimePoint& y) {
              return x.time < y.time;
            });
  std::int32_t barrier = traj.barrier0;
  std::size_t si = 0, bi = 0, ei = 0;
  const auto admit = [&](double up_to) {
    while (si < srcs.size() && srcs[si].time <= up_to) {
      if (srcs[si].site > barrier) live.set(srcs[si].site);
      ++si;
    }
  };
  for (;;) {
    const double te = ei < log.events.size() ? log.events[ei].time : 1e300;
    const double tb =
        bi < traj.barrier_moves.size() ? traj.barrier_moves[bi].first : 1e300;
    const double t = std::min(te, tb);
    if (t > t_end || t >= 1e300) break;
    admit(std::nextafter(t, -1e300));
    if (tb <= te) {
      const std::int32_t nb = traj.barrier_moves[bi++].second;
      if (nb > barrier) live.unset(nb);  // right move kills any path there
      barrier = nb;
    } else {
      const Event& e = log.events[ei++];
      if (e.kind == EventKind::kDeath) {
        live.unset(e.site);
      } else if (live.test(e.site) && e.target() > barrier &&
                 log.window.contains(e.target())) {
        live.set(e.target());
      }
    }
  }
  admit(t_end);
  return live;
}

/// All sites reachable from `sources` by type-i active paths: infection paths
/// of log_i along which the realized state equals i throughout.
inline SiteBits active_closure(const Trajectory& traj, const EventLog& log_i,
                               int type, const std::vector<SpaceTimePoint>& sources,
                               double t_end) {
  require(traj.model == Model::kMcp, "active_closure: MCP run required");
  SiteBits live(log_i.window);
  std::vector<std::int8_t> st(traj.state0);
  std::vector<SpaceTimePoint> srcs = sources;
  std::sort(srcs.begin(), srcs.end(),
            [](const SpaceTimePoint& x, const SpaceTimePoint& y) {
              return x.time < y.time;
            });
  std::size_t si = 0, di = 0, ei = 0;
  const auto state = [&](std::int32_t x) {
    return st[static_cast<std::size_t>(x - traj.window.lo)];
  };
  const auto admit = [&](double up_to) {
    while (si < srcs.size() && srcs[si].time <= up_to) {
      if (state(srcs[si].site) == type) live.set(srcs[si].site);
      ++si;
    }
  };
  for (;;) {
    const double td = di < traj.deltas.size() ? traj.deltas[di].time : 1e300;
    const double te = ei < log_i.events.size() ? log_i.events[ei].time : 1e300;
    const double t = std::min(td, te);
    if (t > t_end || t >= 1e300) break;
    admit(std::nextafter(t, -1e300));
    // state changes apply before the path rule at the same instant
    if (td <= te) {
      const Delta& d = traj.deltas[di++];
      st[static_cast<std::size_t>(d.site - traj.window.lo)] = d.after;
      if (td < te) continue;
    }
    const Event& e = log_i.events[ei++];
    if (e.kind == EventKind::kDeath) {
      live.unset(e.site);
    } else if (live.test(e.site) && log_i.window.contains(e.target()) &&
               state(e.target()) == type) {
      live.set(e.target());
    }
  }
  admit(t_end);
  return live;
}

/// Point-to-point constrained reachability; `log` is the single log for CBP
/// or the type-matching log for MCP active modes.
inline bool constrained_reachable(const Trajectory& traj, const EventLog& log,
                                  SpaceTimePoint src, SpaceTimePoint dst,
                                  PathMode mode) {
  require(src.time <= dst.time, "constrained_reachable: src after dst");
  require(traj.span.contains(src.time) && traj.span.contains(dst.time),
          "constrained_reachable: outside trajectory span");
  if (mode == PathMode::kBarrierFree) {
    require(traj.model == Model::kCbp, "constrained_reachable: mode/model mismatch");
    SiteBits r = barrier_free_closure(traj, log, {src}, dst.time);
    return r.test(dst.site);
  }
  require(traj.model == Model::kMcp, "constrained_reachable: mode/model mismatch");
  const int type = mode == PathMode::kActive1 ? 1 : 2;
  SiteBits r = active_closure(traj, log, type, {src}, dst.time);
  return r.test(dst.site);
}

/// Partial order on barrier configurations: more particles and a barrier at
/// least as far left.
inline bool order_leq(const CbpConfiguration& a, const CbpConfiguration& b) {
  if (a.barrier < b.barrier) return false;
  return std::includes(b.occupied.begin(), b.occupied.end(), a.occupied.begin(),
                       a.occupied.end());
}

}  // namespace contact

#endif  // CONTACT_DYNAMICS_HPP
