#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asyncsys/formula.hpp"
#include "asyncsys/generator.hpp"
#include "asyncsys/stability.hpp"
#include "asyncsys/system.hpp"

namespace asyncsys {

struct Transition {
  Bits from;
  Bits to;
  Time lo;
  Time hi;
  bool left_limits;
};

inline Transition transition_of(const Signal& x, const Time& lo, const Time& hi, bool left_limits) {
  if (!(lo < hi)) throw Error("transition needs lo < hi");
  if (left_limits) return {x.left_limit(lo), x.left_limit(hi), lo, hi, true};
  return {x.eval(lo), x.eval(hi), lo, hi, false};
}

// ---------------------------------------------------------------------------
// Input sets closed under splicing

/// The set of all chains u0 phi(-inf,t0) + u1 phi[t0,t1) + ... of basis signals.
/// Undeclared closures contain exactly their basis.
struct SigmaClosure {
  std::vector<Signal> basis;
  bool declared = false;

  /// Splicing may switch pieces at any instant, so s is a chain of basis
  /// signals iff on every interval where s and all basis signals are constant
  /// some basis signal equals s.
  bool contains(const Signal& s) const {
    if (!declared) return std::find(basis.begin(), basis.end(), s) != basis.end();
    if (basis.empty() || s.width() != basis.front().width()) return false;
    std::vector<const Signal*> all{&s};
    for (const auto& b : basis) all.push_back(&b);
    Time hi{0}, period{1};
    for (const auto* x : all) {
      if (auto p = x->settle_point()) hi = std::max(hi, *p);
      if (x->has_tail()) period = Time::lcm(period, x->period());
    }
    hi = hi + period + period;
    std::vector<Time> pts;
    for (const auto* x : all)
      for (const auto& e : x->unroll(hi, true)) pts.push_back(e.at);
    std::sort(pts.begin(), pts.end());
    pts.push_back(pts.empty() ? Time{0} : pts.front() - Time{1});
    for (const auto& t : pts) {
      const Bits v = s.eval(t);
      if (std::none_of(basis.begin(), basis.end(), [&](const Signal& b) { return b.eval(t) == v; })) return false;
    }
    return true;
  }
};

/// Membership of chain(pieces, cuts) in a declared closure.
inline bool is_sigma_closed_declared(const SigmaClosure& U, const std::vector<Signal>& pieces,
                                     const std::vector<Time>& cuts) {
  if (pieces.empty()) throw Error("probe needs at least one piece");
  for (const auto& p : pieces)
    if (!U.basis.empty() && p.width() != U.basis.front().width()) throw Error("probe width mismatch");
  std::vector<Signal> rest(pieces.begin() + 1, pieces.end());
  return U.contains(chain(pieces.front(), cuts, rest));
}

/// A system over a possibly infinite input set: a finite table of sample
/// inputs, the input set as a closure, a way to obtain f(u) for any member u,
/// and the instants where splices may be placed.
struct ClosedSystem {
  SystemTable table;
  SigmaClosure closure;
  std::function<std::vector<Signal>(const Signal&)> expand;
  std::vector<Time> cut_candidates;

  int in_width() const { return table.in_width(); }
  int out_width() const { return table.out_width(); }

  std::vector<Signal> states(const Signal& u) const {
    if (!closure.contains(u)) throw Error("sigma-closure violation: " + to_literal(u) + " is not in U");
    return expand(u);
  }

  /// Inputs tried by witness searches: the samples, then the basis.
  std::vector<Signal> candidates() const {
    std::vector<Signal> out;
    for (const auto& e : table.entries()) out.push_back(e.input);
    for (const auto& b : closure.basis)
      if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    return out;
  }

  static ClosedSystem of(const SystemTable& f) {
    ClosedSystem c;
    c.table = f;
    for (const auto& e : f.entries()) c.closure.basis.push_back(e.input);
    c.expand = [f](const Signal& u) { return f.at(u); };
    std::vector<const Signal*> all;
    for (const auto& e : c.table.entries()) {
      all.push_back(&e.input);
      for (const auto& x : e.states) all.push_back(&x);
    }
    c.cut_candidates = critical_times(all);
    return c;
  }

  /// U is the closure of `basis`; states come from rerunning the generator.
  static ClosedSystem of(const GeneratorSpec& g, std::vector<Signal> basis) {
    ClosedSystem c;
    c.table = generate(g);
    c.closure = {std::move(basis), true};
    c.expand = [g](const Signal& u) { return generate_states(g, u); };
    c.cut_candidates = g.policy.grid;
    return c;
  }
};

/// All constant signals of width m.
inline std::vector<Signal> constant_basis(int m) {
  std::vector<Signal> out;
  for (const auto& w : Bits::all(m)) out.push_back(Signal::constant(w));
  return out;
}

// ---------------------------------------------------------------------------
// Synchronous-like transfers

struct SyncPair {
  Bits w;
  Bits w2;
};

namespace detail {
/// The common value w with x(t-0) = w for all t >= tf, if every state has one.
inline std::optional<Bits> common_steady_left(const std::vector<Signal>& xs, const Time& tf) {
  std::optional<Bits> w;
  for (const auto& x : xs) {
    auto v = steady_from(x, tf, true);
    if (!v || (w && *w != *v)) return std::nullopt;
    w = v;
  }
  return w;
}

/// The common value w with x(t) = w for all t < t0.
inline std::optional<Bits> common_quiet_before(const std::vector<Signal>& xs, const Time& t0) {
  std::optional<Bits> w;
  for (const auto& x : xs) {
    if (!quiet_before(x, t0)) return std::nullopt;
    const Bits v = x.left_limit(t0);
    if (w && *w != v) return std::nullopt;
    w = v;
  }
  return w;
}

/// Least candidate strictly after every event of xs and strictly after `after`.
inline std::optional<Time> next_cut(const std::vector<Time>& candidates, const std::vector<Signal>& xs,
                                    const Time& after) {
  Time bound = after;
  for (const auto& x : xs) {
    if (x.has_tail()) return std::nullopt;
    if (!x.events().empty()) bound = std::max(bound, x.events().back().at);
  }
  for (const auto& t : candidates)
    if (bound < t) return t;
  return std::nullopt;
}
}  // namespace detail

/// Definition a): all states equal w before t0 and have left limit w2 from tf on.
inline std::optional<SyncPair> sync_like_a(const std::vector<Signal>& xs, const Time& t0, const Time& tf) {
  if (!(t0 < tf)) return std::nullopt;
  auto w = detail::common_quiet_before(xs, t0);
  auto w2 = detail::common_steady_left(xs, tf);
  if (!w || !w2) return std::nullopt;
  return SyncPair{*w, *w2};
}

inline std::optional<SyncPair> sync_like_a(const ClosedSystem& f, const Signal& u, const Time& t0, const Time& tf) {
  return sync_like_a(f.states(u), t0, tf);
}

inline std::optional<SyncPair> sync_like_a(const SystemTable& f, const Signal& u, const Time& t0, const Time& tf) {
  return sync_like_a(f.at(u), t0, tf);
}

struct SyncSplice {
  Bits w;
  Bits w2;
  Signal spliced;
};

/// Definition b): u settles at w from tf, v settles at w2 from tf2, u and v and
/// their state sets agree before tf. The transfer happens under
/// u phi(-inf,tf) + v phi[tf,inf).
inline std::optional<SyncSplice> sync_like_b(const ClosedSystem& f, const Signal& u, const Signal& v, const Time& tf,
                                            const Time& tf2) {
  if (!(tf < tf2)) return std::nullopt;
  const auto xs = f.states(u);
  const auto ys = f.states(v);
  auto w = detail::common_steady_left(xs, tf);
  if (!w) return std::nullopt;
  auto w2 = detail::common_steady_left(ys, tf2);
  if (!w2) return std::nullopt;
  if (!restrict_eq(u, v, tf)) return std::nullopt;
  if (!restricted_sets_equal(xs, ys, tf)) return std::nullopt;
  return SyncSplice{*w, *w2, splice(u, tf, v)};
}

inline std::optional<SyncSplice> sync_like_b(const SystemTable& f, const Signal& u, const Signal& v, const Time& tf,
                                            const Time& tf2) {
  return sync_like_b(ClosedSystem::of(f), u, v, tf, tf2);
}

/// One certified synchronous-like step. Kind 'a' uses `to` only; kind 'b'
/// transfers from input `from` at lo to input `to` at hi.
struct SyncStep {
  char kind = 'a';
  Signal from;
  Signal to;
  Time lo;
  Time hi;
  Bits w;
  Bits w2;
};

/// Re-checks a step against its definition.
inline bool certify(const ClosedSystem& f, const SyncStep& s) {
  if (s.kind == 'a') {
    auto r = sync_like_a(f, s.to, s.lo, s.hi);
    return r && r->w == s.w && r->w2 == s.w2;
  }
  auto r = sync_like_b(f, s.from, s.to, s.lo, s.hi);
  return r && r->w == s.w && r->w2 == s.w2;
}

/// Composite of two certified steps sharing the middle input and instant.
/// Returns the composite when it certifies.
inline std::optional<SyncStep> sync_like_compose(const ClosedSystem& f, const SyncStep& s1, const SyncStep& s2) {
  if (!certify(f, s1) || !certify(f, s2)) throw Error("compose: constituent step is not synchronous-like");
  if (s2.kind != 'b' || s1.to != s2.from || s1.hi != s2.lo || s1.w2 != s2.w)
    throw Error("compose: steps do not chain");
  SyncStep c{s1.kind, s1.from, s2.to, s1.lo, s2.hi, s1.w, s2.w2};
  if (!certify(f, c)) return std::nullopt;
  return c;
}

// ---------------------------------------------------------------------------
// Fundamental mode

/// Cut instants t0 < t1 < ... : an explicit prefix continued arithmetically
/// with `tail_step`, and the values x(t_k - 0) of every state at the prefix cuts.
struct FundamentalModeCert {
  std::vector<Time> cuts;
  Time tail_step{1};
  std::vector<Bits> values;
  std::vector<SyncStep> steps;

  Time cut(std::size_t k) const {
    if (k < cuts.size()) return cuts[k];
    return cuts.back() + tail_step * Time(static_cast<std::int64_t>(k - cuts.size() + 1));
  }
};

/// Searches a cut sequence putting f in the fundamental mode under u.
///
/// Every step ends with all states steady, so after the first step all states
/// sit at one common value and later steps are trivial. The first step is
/// certified by definition a) when the states share their initial value, else
/// by definition b) through another input agreeing with u before t0.
inline std::optional<FundamentalModeCert> fundamental_mode(const ClosedSystem& f, const Signal& u) {
  const auto xs = f.states(u);
  auto t1 = detail::next_cut(f.cut_candidates, xs, f.cut_candidates.front() - Time{1});
  if (!t1) return std::nullopt;
  auto w2 = detail::common_steady_left(xs, *t1);
  if (!w2) return std::nullopt;

  std::vector<Time> t0s;
  for (const auto& t : f.cut_candidates)
    if (t < *t1) t0s.push_back(t);
  t0s.insert(t0s.begin(), f.cut_candidates.front() - Time{1});

  FundamentalModeCert cert;
  auto finish = [&](const SyncStep& s) {
    cert.cuts = {s.lo, s.hi};
    cert.values = {s.w, s.w2};
    cert.steps = {s, SyncStep{'b', u, u, s.hi, s.hi + cert.tail_step, s.w2, s.w2}};
    return cert;
  };
  for (const auto& t0 : t0s)
    if (auto a = sync_like_a(xs, t0, *t1)) return finish({'a', u, u, t0, *t1, a->w, a->w2});
  for (const auto& t0 : t0s)
    for (const auto& v : f.candidates())
      if (v != u)
        if (auto b = sync_like_b(f, v, u, t0, *t1)) return finish({'b', v, u, t0, *t1, b->w, b->w2});
  return std::nullopt;
}

inline std::optional<FundamentalModeCert> fundamental_mode(const SystemTable& f, const Signal& u) {
  return fundamental_mode(ClosedSystem::of(f), u);
}

// ---------------------------------------------------------------------------
// Constructive theorems

/// A spliced input with its cut instants and certified steps. values[k] is
/// x(t_k - 0) for every state x of the final input.
struct SplicedRun {
  Signal u;
  std::vector<Time> cuts;
  std::vector<Signal> partial;  // inputs after each splice
  std::vector<SyncStep> steps;
  std::vector<Bits> values;
};

class HypothesisError : public Error {
 public:
  using Error::Error;
};

namespace detail {
inline void require_causal(const SystemTable& f) {
  if (auto c = check_non_anticipatory(f); !c.holds)
    throw HypothesisError("hypothesis failed: not non-anticipatory: inputs " + to_literal(c.counterexample->u) +
                          " and " + to_literal(c.counterexample->v) + " at t1 = " + c.counterexample->t1.str());
}
}  // namespace detail

/// Given inputs u^0, ..., u^(K-1), splices them at cuts t_1 < ... < t_(K-1)
/// chosen after the previous input has settled, so that every step
/// x(t_k - 0) -> x(t_(k+1) - 0) is synchronous-like.
inline SplicedRun build_fundamental_input(const ClosedSystem& f, const std::vector<Signal>& inputs) {
  if (inputs.empty()) throw Error("build_fundamental_input needs at least one input");
  detail::require_causal(f.table);
  for (const auto& e : f.table.entries())
    for (const auto& x : e.states)
      if (x.initial() != e.states.front().initial())
        throw HypothesisError("hypothesis failed: states of " + to_literal(e.input) + " do not share an initial value");
  if (auto r = check(f.table, Scope::Absolute, Strength::RaceFree); !r.verdict)
    throw HypothesisError("hypothesis failed: not absolutely race-free: " + r.counterexample->reason + " at u = " +
                          to_literal(r.counterexample->u));
  for (const auto& u : inputs)
    if (!f.closure.contains(u)) throw Error("sigma-closure violation: " + to_literal(u) + " is not in U");

  SplicedRun run;
  Signal cur = inputs.front();
  auto xs = f.states(cur);
  Time t0 = f.cut_candidates.front() - Time{1};
  for (const auto& x : xs)
    if (!x.events().empty()) t0 = std::min(t0, x.events().front().at);
  run.cuts.push_back(t0);
  run.partial.push_back(cur);

  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (k > 0) {
      Signal next = splice(cur, run.cuts.back(), inputs[k]);
      auto ys = f.states(next);
      if (!restricted_sets_equal(xs, ys, run.cuts.back()))
        throw HypothesisError("hypothesis failed: state sets of spliced inputs differ before " + run.cuts.back().str());
      cur = next;
      xs = std::move(ys);
      run.partial.push_back(cur);
    }
    auto t = detail::next_cut(f.cut_candidates, xs, run.cuts.back());
    if (!t) throw Error("no cut instant after " + run.cuts.back().str() + " where " + to_literal(cur) + " has settled");
    if (!detail::common_steady_left(xs, *t))
      throw HypothesisError("hypothesis failed: states of spliced input " + to_literal(cur) + " race");
    const Time lo = run.cuts.back();
    run.cuts.push_back(*t);
    std::optional<SyncStep> step;
    if (k == 0) {
      if (auto a = sync_like_a(xs, lo, *t)) step = SyncStep{'a', cur, cur, lo, *t, a->w, a->w2};
    } else if (auto b = sync_like_b(f, run.partial[k - 1], cur, lo, *t)) {
      step = SyncStep{'b', run.partial[k - 1], cur, lo, *t, b->w, b->w2};
    }
    if (!step) throw Error("step " + std::to_string(k) + " is not synchronous-like");
    run.steps.push_back(*step);
  }
  run.u = cur;
  run.values.push_back(run.steps.front().w);
  for (const auto& s : run.steps) run.values.push_back(s.w2);
  return run;
}

/// Replays a spliced run: every step certifies, the final input is in U and
/// x(t_k - 0) = values[k] for every state x of it.
inline bool replay_run(const ClosedSystem& f, const SplicedRun& run) {
  if (!f.closure.contains(run.u)) return false;
  for (const auto& s : run.steps)
    if (!certify(f, s)) return false;
  for (const auto& x : f.states(run.u))
    for (std::size_t k = 0; k < run.cuts.size(); ++k)
      if (x.left_limit(run.cuts[k]) != run.values[k]) return false;
  return true;
}

struct ReachWitness {
  Bits w;
  Signal u;
  Time tf;
};

struct RetargetWitness {
  Bits w;
  Signal u;
  Time tf;
  Bits w2;
  Signal v;
  Time tf2;
};

struct ControllabilityReport {
  bool c1 = true;  // every value is reachable from the quiet past
  bool c2 = true;  // every settled value can be moved to every other
  std::vector<ReachWitness> reach;        // one per reachable w
  std::vector<Bits> unreachable;          // targets failing c1
  std::vector<RetargetWitness> retarget;  // one per (premise, w2)
  std::optional<std::pair<ReachWitness, Bits>> blocked;  // first failing (premise, w2)
};

namespace detail {
/// First candidate input steering all states to w, with the least cut after settling.
inline std::optional<std::pair<Signal, Time>> steer(const ClosedSystem& f, const std::function<Signal(const Signal&)>& make,
                                                    const Bits& w, const Time& after) {
  for (const auto& v : f.candidates()) {
    Signal u = make(v);
    if (!f.closure.contains(u)) {
      if (f.closure.declared) throw Error("sigma-closure violation: " + to_literal(u) + " is not in U");
      continue;  // a plain table is not closed under splicing
    }
    std::vector<Signal> xs;
    try {
      xs = f.expand(u);
    } catch (const Error&) {
      continue;
    }
    auto t = next_cut(f.cut_candidates, xs, after);
    if (t && common_steady_left(xs, *t) == w) return std::make_pair(u, *t);
  }
  return std::nullopt;
}
}  // namespace detail

/// Controllability over the candidate inputs: reachability (c1) and
/// retargeting (c2). Premises of c2 are the (w, t_f, u) found for c1 and for
/// every other candidate that settles, with t_f the first cut instant after settling.
inline ControllabilityReport check_controllability(const ClosedSystem& f) {
  ControllabilityReport rep;
  const Time before = f.cut_candidates.front() - Time{1};
  auto identity = [](const Signal& s) { return s; };
  for (const auto& w : Bits::all(f.out_width())) {
    if (auto hit = detail::steer(f, identity, w, before)) rep.reach.push_back({w, hit->first, hit->second});
    else {
      rep.c1 = false;
      rep.unreachable.push_back(w);
    }
  }
  std::vector<ReachWitness> premises;
  for (const auto& u : f.candidates()) {
    auto xs = f.states(u);
    auto t = detail::next_cut(f.cut_candidates, xs, before);
    if (!t) continue;
    if (auto w = detail::common_steady_left(xs, *t)) premises.push_back({*w, u, *t});
  }
  for (const auto& p : premises) {
    for (const auto& w2 : Bits::all(f.out_width())) {
      auto make = [&](const Signal& v) { return splice(p.u, p.tf, v); };
      if (auto hit = detail::steer(f, make, w2, p.tf)) {
        rep.retarget.push_back({p.w, p.u, p.tf, w2, hit->first, hit->second});
      } else if (rep.c2) {
        rep.c2 = false;
        rep.blocked = std::make_pair(p, w2);
      }
    }
  }
  return rep;
}

/// Realizes x(t_k - 0) = targets[k] for all states; targets[0] must be the
/// initial state. Each step appends the first candidate input that steers the
/// spliced input to the next target.
inline SplicedRun plan_trajectory(const ClosedSystem& f, const std::vector<Bits>& targets) {
  if (targets.empty()) throw Error("plan needs at least the initial target");
  detail::require_causal(f.table);
  auto w0 = initial_state(f.table);
  if (!w0) throw HypothesisError("hypothesis failed: system is not initialized");
  if (targets.front() != *w0)
    throw Error("first target " + targets.front().str() + " is not the initial state " + w0->str());
  auto ctrl = check_controllability(f);
  if (!ctrl.c1) throw HypothesisError("hypothesis failed: target unreachable: " + ctrl.unreachable.front().str());
  if (!ctrl.c2)
    throw HypothesisError("hypothesis failed: cannot retarget from " + ctrl.blocked->first.w.str() + " at t_f = " +
                          ctrl.blocked->first.tf.str() + " towards " + ctrl.blocked->second.str());

  SplicedRun run;
  Time t0 = f.cut_candidates.front();
  const auto fin = classify_initial_time(f.table);
  if (!fin.fix.any) t0 = std::min(t0, fin.fix.at);
  run.cuts.push_back(t0);
  run.values.push_back(*w0);
  if (targets.size() == 1) {
    run.u = f.table.entries().front().input;
    run.partial.push_back(run.u);
    return run;
  }
  std::string log;
  for (std::size_t k = 1; k < targets.size(); ++k) {
    const Time lo = run.cuts.back();
    std::optional<std::pair<Signal, Time>> hit;
    if (k == 1) {
      hit = detail::steer(f, [](const Signal& s) { return s; }, targets[k], lo);
    } else {
      const Signal prev = run.partial.back();
      hit = detail::steer(f, [&](const Signal& v) { return splice(prev, lo, v); }, targets[k], lo);
    }
    if (!hit)
      throw Error("target w^" + std::to_string(k) + " = " + targets[k].str() + " unreachable after t = " + lo.str() +
                  " (searched " + std::to_string(f.candidates().size()) + " candidate inputs)");
    const Signal cur = hit->first;
    const Time t = hit->second;
    std::optional<SyncStep> step;
    if (k == 1) {
      if (auto a = sync_like_a(f, cur, lo, t)) step = SyncStep{'a', cur, cur, lo, t, a->w, a->w2};
    } else if (auto b = sync_like_b(f, run.partial.back(), cur, lo, t)) {
      step = SyncStep{'b', run.partial.back(), cur, lo, t, b->w, b->w2};
    }
    if (!step) throw Error("step " + std::to_string(k - 1) + " is not synchronous-like");
    run.steps.push_back(*step);
    run.partial.push_back(cur);
    run.cuts.push_back(t);
    run.values.push_back(targets[k]);
  }
  run.u = run.partial.back();
  return run;
}

// ---------------------------------------------------------------------------
// Hazards

/// A synchronous-like step whose states switch each coordinate at most once
/// on [lo - 0, hi - 0].
inline bool is_hazard_free(const ClosedSystem& f, const SyncStep& s) {
  if (!certify(f, s)) return false;
  for (const auto& x : f.states(s.to))
    if (!monotonous_on(x, s.lo, s.hi, true)) return false;
  return true;
}

/// Same for a transfer under one input, certified by definition a) or b) with u = v.
inline bool is_hazard_free(const ClosedSystem& f, const Signal& u, const Time& tf, const Time& tf2) {
  if (!(tf < tf2)) throw Error("hazard check needs tf < tf2");
  const auto xs = f.states(u);
  if (!sync_like_a(xs, tf, tf2) && !sync_like_b(f, u, u, tf, tf2)) return false;
  for (const auto& x : xs)
    if (!monotonous_on(x, tf, tf2, true)) return false;
  return true;
}

inline bool is_hazard_free(const SystemTable& f, const Signal& u, const Time& tf, const Time& tf2) {
  return is_hazard_free(ClosedSystem::of(f), u, tf, tf2);
}

}  // namespace asyncsys
