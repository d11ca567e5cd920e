#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asyncsys/bits.hpp"
#include "asyncsys/error.hpp"
#include "asyncsys/time.hpp"

namespace asyncsys {

struct Event {
  Time at;
  Bits value;

  friend bool operator==(const Event&, const Event&) = default;
  friend auto operator<=>(const Event&, const Event&) = default;
};

/// Periodic continuation as written by a user: events at anchor + k*period + offset
/// for k >= 0. The anchor defaults to the last finite event time (0 without events).
struct RawTail {
  Time period;
  std::vector<Event> pattern;  // `at` holds the offset, in [0, period)
  std::optional<Time> anchor;
};

/// A time witness. `any` marks the constant-signal case where every instant works
/// and `at` carries the conventional value 0.
struct TimeWitness {
  Time at;
  bool any = false;

  friend bool operator==(const TimeWitness&, const TimeWitness&) = default;
};

/// Right-continuous piecewise-constant signal R -> B^k with finitely many events
/// or an eventually periodic event sequence.
///
/// Canonical storage: `events_` holds the finite prefix followed by exactly one
/// copy of the repeating cycle (the last `cycle_len_` events). Copy k >= 1 of the
/// cycle is shifted by k * period. Consecutive unrolled values always differ, the
/// cycle is minimal and rolled back as far as possible, so two signals are equal
/// as functions iff their canonical forms compare equal.
class Signal {
 public:
  Signal() : initial_(1) {}

  /// Builds the canonical signal equal to the given description.
  static Signal make(const Bits& initial, std::vector<Event> events, std::optional<RawTail> tail = std::nullopt) {
    const int w = initial.width();
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (events[i].value.width() != w)
        throw Error("event " + std::to_string(i) + ": width " + std::to_string(events[i].value.width()) +
                    " does not match signal width " + std::to_string(w));
      if (i > 0 && !(events[i - 1].at < events[i].at))
        throw Error("event " + std::to_string(i) + ": time " + events[i].at.str() + " is not increasing");
    }
    std::size_t cycle = 0;
    Time period{1};
    if (tail) {
      if (!(Time{0} < tail->period)) throw Error("tail period must be positive, got " + tail->period.str());
      if (tail->pattern.empty()) throw Error("tail pattern is empty");
      Time anchor = tail->anchor ? *tail->anchor : (events.empty() ? Time{0} : events.back().at);
      for (std::size_t i = 0; i < tail->pattern.size(); ++i) {
        const auto& e = tail->pattern[i];
        if (e.value.width() != w) throw Error("tail entry " + std::to_string(i) + ": width mismatch");
        if (e.at < Time{0} || !(e.at < tail->period))
          throw Error("tail entry " + std::to_string(i) + ": offset " + e.at.str() + " outside [0, period)");
        if (i > 0 && !(tail->pattern[i - 1].at < e.at))
          throw Error("tail entry " + std::to_string(i) + ": offset is not increasing");
        Time t = anchor + e.at;
        if (!events.empty() && !(events.back().at < t))
          throw Error("tail entry " + std::to_string(i) + ": unrolls at " + t.str() +
                      ", not after the last finite event");
        events.push_back({t, e.value});
      }
      cycle = tail->pattern.size();
      period = tail->period;
    }
    return from_embedded(initial, std::move(events), cycle, period);
  }

  static Signal constant(const Bits& w) { return make(w, {}); }

  /// Canonicalizes a prefix-plus-one-cycle description. Events must be strictly
  /// increasing and the cycle must span less than one period.
  static Signal from_embedded(const Bits& initial, std::vector<Event> events, std::size_t cycle_len, Time period) {
    Signal s;
    s.initial_ = initial;
    if (cycle_len == 0) {
      s.events_ = dedupe(initial, events);
      return s;
    }
    const std::size_t n = events.size();
    std::vector<Event> prefix(events.begin(), events.begin() + static_cast<std::ptrdiff_t>(n - cycle_len));
    std::vector<Event> cyc(events.begin() + static_cast<std::ptrdiff_t>(n - cycle_len), events.end());

    bool all_same = std::all_of(cyc.begin(), cyc.end(), [&](const Event& e) { return e.value == cyc[0].value; });
    if (all_same) {
      prefix.push_back(cyc[0]);
      s.events_ = dedupe(initial, prefix);
      return s;
    }
    // In later copies cyc[0] follows cyc.back(); in the first copy it follows the
    // prefix, where it may still be a change.
    if (cyc[0].value == cyc.back().value) prefix.push_back(cyc[0]);
    {
      std::vector<Event> kept;
      for (std::size_t j = 0; j < cyc.size(); ++j)
        if (cyc[j].value != cyc[(j + cyc.size() - 1) % cyc.size()].value) kept.push_back(cyc[j]);
      cyc = std::move(kept);
    }
    minimize_cycle(cyc, period);
    prefix = dedupe(initial, prefix);
    const Bits& before = prefix.empty() ? initial : prefix.back().value;
    if (cyc.front().value == before) {
      Event first = cyc.front();
      cyc.erase(cyc.begin());
      first.at += period;
      cyc.push_back(first);
    }
    while (!prefix.empty() && prefix.back().at == cyc.back().at - period && prefix.back().value == cyc.back().value) {
      cyc.pop_back();
      cyc.insert(cyc.begin(), prefix.back());
      prefix.pop_back();
    }
    s.events_ = std::move(prefix);
    s.events_.insert(s.events_.end(), cyc.begin(), cyc.end());
    s.cycle_len_ = cyc.size();
    s.period_ = period;
    return s;
  }

  int width() const { return initial_.width(); }
  const Bits& initial() const { return initial_; }
  const std::vector<Event>& events() const { return events_; }
  bool has_tail() const { return cycle_len_ > 0; }
  std::size_t cycle_length() const { return cycle_len_; }
  const Time& period() const { return period_; }
  std::span<const Event> prefix() const { return {events_.data(), events_.size() - cycle_len_}; }
  std::span<const Event> cycle() const { return {events_.data() + (events_.size() - cycle_len_), cycle_len_}; }
  bool is_constant() const { return events_.empty(); }

  /// Time after which the signal is either constant or exactly periodic.
  std::optional<Time> settle_point() const {
    if (events_.empty()) return std::nullopt;
    return has_tail() ? cycle().front().at : events_.back().at;
  }

  Bits eval(const Time& t) const {
    if (has_tail() && !(t < cycle().front().at)) {
      auto c = cycle();
      Time local = fold(t);
      auto it = std::upper_bound(c.begin(), c.end(), local, [](const Time& x, const Event& e) { return x < e.at; });
      return std::prev(it)->value;
    }
    auto it = std::upper_bound(events_.begin(), events_.end(), t, [](const Time& x, const Event& e) { return x < e.at; });
    return it == events_.begin() ? initial_ : std::prev(it)->value;
  }

  /// Value on (t - eps, t) for all small enough eps > 0.
  Bits left_limit(const Time& t) const {
    if (has_tail() && cycle().front().at < t) {
      auto c = cycle();
      Time local = fold(t);
      if (local == c.front().at) return c.back().value;
      auto it = std::lower_bound(c.begin(), c.end(), local, [](const Event& e, const Time& x) { return e.at < x; });
      return std::prev(it)->value;
    }
    auto it = std::lower_bound(events_.begin(), events_.end(), t, [](const Event& e, const Time& x) { return e.at < x; });
    return it == events_.begin() ? initial_ : std::prev(it)->value;
  }

  std::optional<Bits> final_value() const {
    if (has_tail()) return std::nullopt;
    return events_.empty() ? initial_ : events_.back().value;
  }

  /// Least t_f with x(t) = x(t_f) for all t >= t_f.
  std::optional<TimeWitness> final_time() const {
    if (has_tail()) return std::nullopt;
    if (events_.empty()) return TimeWitness{Time{0}, true};
    return TimeWitness{events_.back().at, false};
  }

  /// Greatest t_0 with x(t) = x(t_0 - 0) for all t < t_0.
  TimeWitness initial_time() const {
    if (events_.empty()) return TimeWitness{Time{0}, true};
    return TimeWitness{events_.front().at, false};
  }

  /// All unrolled events with time < hi (or <= hi when inclusive).
  std::vector<Event> unroll(const Time& hi, bool inclusive = false) const {
    auto within = [&](const Time& t) { return inclusive ? !(hi < t) : t < hi; };
    std::vector<Event> out;
    for (const auto& e : prefix()) {
      if (!within(e.at)) return out;
      out.push_back(e);
    }
    if (!has_tail()) return out;
    for (Time shift{0};; shift += period_) {
      for (const auto& e : cycle()) {
        Time t = e.at + shift;
        if (!within(t)) return out;
        out.push_back({t, e.value});
      }
    }
  }

  /// Unrolled events in the window lo < t <= hi.
  std::vector<Event> events_in(const Time& lo, const Time& hi) const {
    std::vector<Event> out;
    for (auto& e : unroll(hi, true))
      if (lo < e.at) out.push_back(std::move(e));
    return out;
  }

  friend bool operator==(const Signal&, const Signal&) = default;
  friend std::strong_ordering operator<=>(const Signal& a, const Signal& b) {
    if (auto c = a.initial_ <=> b.initial_; c != 0) return c;
    if (auto c = a.cycle_len_ <=> b.cycle_len_; c != 0) return c;
    if (a.cycle_len_ > 0)
      if (auto c = a.period_ <=> b.period_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.events_.begin(), a.events_.end(), b.events_.begin(),
                                                  b.events_.end());
  }

 private:
  // Maps t >= cycle start into [cycle start, cycle start + period).
  Time fold(const Time& t) const {
    const Time& c0 = cycle().front().at;
    std::int64_t k = ((t - c0) / period_).floor();
    return t - Time{k} * period_;
  }

  static std::vector<Event> dedupe(const Bits& initial, const std::vector<Event>& events) {
    std::vector<Event> out;
    const Bits* prev = &initial;
    for (const auto& e : events) {
      if (e.value == *prev) continue;
      out.push_back(e);
      prev = &out.back().value;
    }
    return out;
  }

  static void minimize_cycle(std::vector<Event>& cyc, Time& period) {
    const std::size_t c = cyc.size();
    for (std::size_t d = 1; d < c; ++d) {
      if (c % d != 0) continue;
      Time shift = cyc[d].at - cyc[0].at;
      if (shift * Time{static_cast<std::int64_t>(c / d)} != period) continue;
      bool ok = true;
      for (std::size_t j = 0; j < c && ok; ++j) {
        std::size_t k = (j + d) % c;
        Time tk = cyc[k].at + (k < j ? period : Time{0});
        ok = cyc[k].value == cyc[j].value && tk == cyc[j].at + shift;
      }
      if (ok) {
        cyc.resize(d);
        period = shift;
        return;
      }
    }
  }

  Bits initial_;
  std::vector<Event> events_;
  std::size_t cycle_len_ = 0;
  Time period_{1};
};

// ---------------------------------------------------------------------------
// Signal algebra

inline Bits eval(const Signal& x, const Time& t) { return x.eval(t); }
inline Bits left_limit(const Signal& x, const Time& t) { return x.left_limit(t); }
inline std::optional<Bits> final_value(const Signal& x) { return x.final_value(); }
inline std::optional<TimeWitness> final_time(const Signal& x) { return x.final_time(); }

/// Pointwise image t -> fn(x_1(t), ..., x_k(t)).
template <typename Fn>
Signal pointwise(std::span<const Signal* const> xs, Fn&& fn) {
  if (xs.empty()) throw Error("pointwise over no signals");
  auto value_at = [&](const Time& t) {
    std::vector<Bits> vals;
    vals.reserve(xs.size());
    for (const auto* x : xs) vals.push_back(x->eval(t));
    return fn(vals);
  };
  std::vector<Bits> inits;
  for (const auto* x : xs) inits.push_back(x->initial());
  const Bits init = fn(inits);

  std::optional<Time> horizon;
  std::optional<Time> lcm;
  for (const auto* x : xs) {
    if (auto s = x->settle_point()) horizon = horizon ? std::max(*horizon, *s) : *s;
    if (x->has_tail()) lcm = lcm ? Time::lcm(*lcm, x->period()) : x->period();
  }
  std::vector<Time> times;
  const Time end = lcm ? *horizon + *lcm : (horizon ? *horizon : Time{0});
  for (const auto* x : xs)
    for (const auto& e : x->unroll(end, true)) times.push_back(e.at);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<Event> events;
  std::size_t cycle = 0;
  for (const auto& t : times) {
    events.push_back({t, value_at(t)});
    if (lcm && *horizon < t) ++cycle;
  }
  return Signal::from_embedded(init, std::move(events), cycle, lcm ? *lcm : Time{1});
}

inline Signal complement(const Signal& x) {
  const Signal* xs[] = {&x};
  return pointwise(xs, [](const std::vector<Bits>& v) { return v[0].complement(); });
}

inline Signal apply_fn(const BoolFn& fn, const Signal& u) {
  if (fn.in_width() != u.width())
    throw Error("function input width " + std::to_string(fn.in_width()) + " does not match signal width " +
                std::to_string(u.width()));
  const Signal* xs[] = {&u};
  return pointwise(xs, [&](const std::vector<Bits>& v) { return fn(v[0]); });
}

inline Signal coord_select(const Signal& x, const std::vector<int>& indices) {
  if (indices.empty()) throw Error("empty coordinate selection");
  for (int i : indices)
    if (i < 0 || i >= x.width()) throw Error("coordinate index " + std::to_string(i) + " out of range");
  const Signal* xs[] = {&x};
  return pointwise(xs, [&](const std::vector<Bits>& v) { return v[0].select(indices); });
}

inline Signal coord_concat(const Signal& x, const Signal& y) {
  if (x.width() + y.width() > Bits::kMaxWidth) throw Error("concatenated width too large");
  const Signal* xs[] = {&x, &y};
  return pointwise(xs, [](const std::vector<Bits>& v) { return v[0].concat(v[1]); });
}

/// u on (-inf, t0), v on [t0, inf).
inline Signal splice(const Signal& u, const Time& t0, const Signal& v) {
  if (u.width() != v.width()) throw Error("splice of signals with different widths");
  std::vector<Event> events = u.unroll(t0);
  events.push_back({t0, v.eval(t0)});
  if (!v.has_tail()) {
    for (auto& e : v.events_in(t0, v.settle_point() ? std::max(t0, *v.settle_point()) : t0))
      events.push_back(std::move(e));
    return Signal::from_embedded(u.initial(), std::move(events), 0, Time{1});
  }
  Time from = std::max(t0, *v.settle_point());
  for (auto& e : v.events_in(t0, from)) events.push_back(std::move(e));
  auto cyc = v.events_in(from, from + v.period());
  const std::size_t n = cyc.size();
  events.insert(events.end(), cyc.begin(), cyc.end());
  return Signal::from_embedded(u.initial(), std::move(events), n, v.period());
}

/// prefix on (-inf, cuts[0]), pieces[k] on [cuts[k], cuts[k+1]).
inline Signal chain(const Signal& prefix, const std::vector<Time>& cuts, const std::vector<Signal>& pieces) {
  if (cuts.size() != pieces.size()) throw Error("chain needs one piece per cut");
  Signal out = prefix;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    if (k > 0 && !(cuts[k - 1] < cuts[k])) throw Error("cut " + std::to_string(k) + " is not increasing");
    out = splice(out, cuts[k], pieces[k]);
  }
  return out;
}

/// u and v agree on (-inf, t1).
inline bool restrict_eq(const Signal& u, const Signal& v, const Time& t1) {
  if (u.width() != v.width()) throw Error("restriction comparison of different widths");
  return u.initial() == v.initial() && u.unroll(t1) == v.unroll(t1);
}

/// How far two signals agree from -inf: everywhere, nowhere (different
/// initial values), or exactly on (-inf, until).
struct Agreement {
  enum class Kind { Everywhere, Nowhere, Until } kind;
  Time until;
};

inline Agreement agreement(const Signal& u, const Signal& v) {
  if (u.width() != v.width()) throw Error("agreement of different widths");
  if (u == v) return {Agreement::Kind::Everywhere, Time{0}};
  if (u.initial() != v.initial()) return {Agreement::Kind::Nowhere, Time{0}};
  Time hi{0};
  std::optional<Time> span;
  for (const Signal* s : {&u, &v}) {
    if (auto p = s->settle_point()) hi = std::max(hi, *p);
    if (s->has_tail()) span = span ? Time::lcm(*span, s->period()) : s->period();
  }
  hi = hi + (span ? *span + *span : Time{1});
  auto a = u.unroll(hi, true);
  auto b = v.unroll(hi, true);
  for (std::size_t i = 0;; ++i) {
    if (i == a.size() || i == b.size()) {
      if (i < a.size()) return {Agreement::Kind::Until, a[i].at};
      if (i < b.size()) return {Agreement::Kind::Until, b[i].at};
      throw Error("distinct signals agree on the inspected horizon");
    }
    if (a[i] != b[i]) return {Agreement::Kind::Until, std::min(a[i].at, b[i].at)};
  }
}

/// Every coordinate has at most one discontinuity on [lo, hi] (or on
/// [lo - eps, hi - eps] for all small eps when left_limits is set).
inline bool monotonous_on(const Signal& x, const Time& lo, const Time& hi, bool left_limits) {
  if (!(lo < hi)) throw Error("monotonicity window is empty");
  std::vector<Event> window;
  Bits prev = left_limits ? x.left_limit(lo) : x.eval(lo);
  for (auto& e : x.unroll(hi, !left_limits)) {
    if (left_limits ? !(e.at < lo) : lo < e.at) window.push_back(std::move(e));
  }
  std::vector<int> changes(static_cast<std::size_t>(x.width()), 0);
  for (const auto& e : window) {
    for (int i = 0; i < x.width(); ++i)
      if (e.value[i] != prev[i] && ++changes[static_cast<std::size_t>(i)] > 1) return false;
    prev = e.value;
  }
  return true;
}

}  // namespace asyncsys
