#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "asyncsys/system.hpp"

namespace asyncsys {

// Quantifier elimination over real time.
//
// Every signal handled here is constant between consecutive events and exactly
// periodic after its settle point. A statement "for all t >= t_f" or "for all
// t < t_0" is therefore decided by evaluating at the events in range, the
// midpoints between them and one point past a full period beyond the settle
// point. "There exists t" over R is decided over the critical set of the whole
// system: all event times, midpoints and one exterior point on each side.

namespace detail {
inline Time inspect_horizon(const Signal& x, const Time& from) {
  Time h = from;
  if (auto s = x.settle_point()) h = std::max(h, *s);
  return x.has_tail() ? h + x.period() + x.period() : h + Time{1};
}

inline std::vector<Time> with_midpoints(std::vector<Time> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Time> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) out.push_back(Time::midpoint(pts[i - 1], pts[i]));
    out.push_back(pts[i]);
  }
  return out;
}
}  // namespace detail

/// If x(t) = x(tf) for all t >= tf (x(t-0) = x(tf-0) when left_limits), that value.
inline std::optional<Bits> steady_from(const Signal& x, const Time& tf, bool left_limits = false) {
  const Time h = detail::inspect_horizon(x, tf);
  std::vector<Time> pts{tf, h};
  for (const auto& e : x.unroll(h, true))
    if (!(e.at < tf)) pts.push_back(e.at);
  auto value = [&](const Time& t) { return left_limits ? x.left_limit(t) : x.eval(t); };
  const Bits ref = value(tf);
  for (const auto& t : detail::with_midpoints(std::move(pts)))
    if (value(t) != ref) return std::nullopt;
  return ref;
}

/// x(t) = x(t0 - 0) for all t < t0.
inline bool quiet_before(const Signal& x, const Time& t0) {
  const Bits ref = x.left_limit(t0);
  std::vector<Time> pts{t0 - Time{1}};
  for (const auto& e : x.unroll(t0)) pts.push_back(e.at);
  if (!x.events().empty()) pts.push_back(std::min(t0, x.events().front().at) - Time{1});
  for (const auto& t : detail::with_midpoints(std::move(pts)))
    if (t < t0 && x.eval(t) != ref) return false;
  return true;
}

/// Critical instants of a family of signals.
inline std::vector<Time> critical_times(const std::vector<const Signal*>& xs) {
  std::vector<Time> pts;
  Time hi{0};
  Time lo{0};
  for (const auto* x : xs) {
    if (auto s = x->settle_point()) hi = std::max(hi, *s);
    if (!x->events().empty()) lo = std::min(lo, x->events().front().at);
  }
  for (const auto* x : xs) {
    Time h = detail::inspect_horizon(*x, hi);
    for (const auto& e : x->unroll(h, true)) pts.push_back(e.at);
  }
  pts.push_back(lo - Time{1});
  pts.push_back(hi + Time{1});
  return detail::with_midpoints(std::move(pts));
}

/// Literal evaluation of the quantified statements about one system.
///
/// For each state and each critical instant the steady value from that instant
/// on is tabulated once; every formula is then a nest of finite loops.
class FormulaEvaluator {
 public:
  explicit FormulaEvaluator(const SystemTable& f) : f_(f) {
    std::vector<const Signal*> all;
    for (const auto& e : f.entries()) {
      all.push_back(&e.input);
      for (const auto& x : e.states) all.push_back(&x);
    }
    times_ = critical_times(all);
    for (const auto& e : f.entries()) {
      std::vector<std::vector<std::optional<Bits>>> row, row_left;
      std::vector<std::vector<bool>> quiet_row;
      for (const auto& x : e.states) {
        std::vector<std::optional<Bits>> s, sl;
        std::vector<bool> q;
        for (const auto& t : times_) {
          s.push_back(steady_from(x, t));
          sl.push_back(steady_from(x, t, true));
          q.push_back(quiet_before(x, t));
        }
        row.push_back(std::move(s));
        row_left.push_back(std::move(sl));
        quiet_row.push_back(std::move(q));
      }
      steady_.push_back(std::move(row));
      steady_left_.push_back(std::move(row_left));
      quiet_.push_back(std::move(quiet_row));
    }
    ws_ = Bits::all(f.out_width());
  }

  const SystemTable& system() const { return f_; }
  const std::vector<Time>& times() const { return times_; }

  /// steady value of state k of input i from critical instant c on.
  const std::optional<Bits>& steady(std::size_t i, std::size_t k, std::size_t c, bool left = false) const {
    return (left ? steady_left_ : steady_)[i][k][c];
  }

  /// x in S_c, decided as "exists t_f, for all t >= t_f, x(t) = x(t_f)".
  bool converges(std::size_t i, std::size_t k) const {
    for (std::size_t c = 0; c < times_.size(); ++c)
      if (steady(i, k, c)) return true;
    return false;
  }

  /// Indices of inputs in the scope: all, U intersect S_c, or U intersect S_{F,c}.
  std::vector<std::size_t> scope(int which, const BoolFn* F = nullptr) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      const Signal& u = f_.entries()[i].input;
      bool in = true;
      if (which == 1) in = input_converges(u, nullptr);
      if (which == 2) in = input_converges(u, F);
      if (in) out.push_back(i);
    }
    return out;
  }

  // forall u in S, forall x, exists w, exists tf, forall t >= tf: x(t) = w
  bool stable(const std::vector<std::size_t>& S, bool left = false) const {
    return all_of(S, [&](std::size_t i) {
      return all_states(i, [&](std::size_t k) { return any_time([&](std::size_t c) { return steady(i, k, c, left).has_value(); }); });
    });
  }
  // forall u in S, exists w, forall x, exists tf
  bool race_free(const std::vector<std::size_t>& S, bool left = false) const {
    return all_of(S, [&](std::size_t i) {
      return any_w([&](const Bits& w) {
        return all_states(i, [&](std::size_t k) { return any_time([&](std::size_t c) { return steady(i, k, c, left) == w; }); });
      });
    });
  }
  // exists w, forall u in S, forall x, exists tf
  bool constant(const std::vector<std::size_t>& S, bool left = false) const {
    return any_w([&](const Bits& w) {
      return all_of(S, [&](std::size_t i) {
        return all_states(i, [&](std::size_t k) { return any_time([&](std::size_t c) { return steady(i, k, c, left) == w; }); });
      });
    });
  }
  // forall u in S, forall x, exists tf, forall t >= tf: x(t) = F(u(tf)) = F(u(t))
  bool f_race_free(const std::vector<std::size_t>& S, const BoolFn& F) const {
    return all_of(S, [&](std::size_t i) {
      const Signal& u = f_.entries()[i].input;
      return all_states(i, [&](std::size_t k) {
        return any_time([&](std::size_t c) {
          const Time& tf = times_[c];
          const Bits target = F(u.eval(tf));
          return steady(i, k, c) == target && mapped_steady_from(u, F, tf) == target;
        });
      });
    });
  }

  // Final-time flavors; x ranges over f(u) intersect S_c.
  bool final_time_unbounded() const {
    return all_inputs([&](std::size_t i) {
      return all_convergent(i, [&](std::size_t k) { return any_time([&](std::size_t c) { return steady(i, k, c).has_value(); }); });
    });
  }
  bool final_time_bounded() const {
    return all_inputs([&](std::size_t i) {
      return any_time([&](std::size_t c) { return all_convergent(i, [&](std::size_t k) { return steady(i, k, c).has_value(); }); });
    });
  }
  bool final_time_fix() const {
    return any_time([&](std::size_t c) {
      return all_inputs([&](std::size_t i) { return all_convergent(i, [&](std::size_t k) { return steady(i, k, c).has_value(); }); });
    });
  }
  bool final_time(TimeFlavorKind k) const {
    switch (k) {
      case TimeFlavorKind::Unbounded: return final_time_unbounded();
      case TimeFlavorKind::Bounded: return final_time_bounded();
      case TimeFlavorKind::Fix: return final_time_fix();
    }
    return false;
  }

  // Initial-time flavors.
  bool initial_time(TimeFlavorKind kind) const {
    auto q = [&](std::size_t i, std::size_t k, std::size_t c) { return static_cast<bool>(quiet_[i][k][c]); };
    switch (kind) {
      case TimeFlavorKind::Unbounded:
        return all_inputs([&](std::size_t i) { return all_states(i, [&](std::size_t k) { return any_time([&](std::size_t c) { return q(i, k, c); }); }); });
      case TimeFlavorKind::Bounded:
        return all_inputs([&](std::size_t i) { return any_time([&](std::size_t c) { return all_states(i, [&](std::size_t k) { return q(i, k, c); }); }); });
      case TimeFlavorKind::Fix:
        return any_time([&](std::size_t c) { return all_inputs([&](std::size_t i) { return all_states(i, [&](std::size_t k) { return q(i, k, c); }); }); });
    }
    return false;
  }

  /// Right-hand merged forms of the nine combined statements, indexed by
  /// strength (0 stable, 1 race-free, 2 constant) and final-time flavor.
  bool merged(int strength, TimeFlavorKind ft) const {
    auto every_x_steady_at = [&](std::size_t i, std::size_t c) {
      return all_states(i, [&](std::size_t k) { return steady(i, k, c).has_value(); });
    };
    auto every_x_at_w = [&](std::size_t i, std::size_t c, const Bits& w) {
      return all_states(i, [&](std::size_t k) { return steady(i, k, c) == w; });
    };
    switch (strength * 3 + static_cast<int>(ft)) {
      case 0:  // a) forall u forall x exists w exists tf
        return all_inputs([&](std::size_t i) { return all_states(i, [&](std::size_t k) { return any_w([&](const Bits& w) { return any_time([&](std::size_t c) { return steady(i, k, c) == w; }); }); }); });
      case 1:  // b) forall u exists tf forall x exists w
        return all_inputs([&](std::size_t i) { return any_time([&](std::size_t c) { return every_x_steady_at(i, c); }); });
      case 2:  // c) exists tf forall u forall x exists w
        return any_time([&](std::size_t c) { return all_inputs([&](std::size_t i) { return every_x_steady_at(i, c); }); });
      case 3:  // d) forall u exists w forall x exists tf
        return race_free(all_indices());
      case 4:  // e) forall u exists w exists tf forall x
        return all_inputs([&](std::size_t i) { return any_w([&](const Bits& w) { return any_time([&](std::size_t c) { return every_x_at_w(i, c, w); }); }); });
      case 5:  // f) exists tf forall u exists w forall x
        return any_time([&](std::size_t c) { return all_inputs([&](std::size_t i) { return any_w([&](const Bits& w) { return every_x_at_w(i, c, w); }); }); });
      case 6:  // g) exists w forall u forall x exists tf
        return constant(all_indices());
      case 7:  // h) exists w forall u exists tf forall x
        return any_w([&](const Bits& w) { return all_inputs([&](std::size_t i) { return any_time([&](std::size_t c) { return every_x_at_w(i, c, w); }); }); });
      case 8:  // i) exists w exists tf forall u forall x
        return any_w([&](const Bits& w) { return any_time([&](std::size_t c) { return all_inputs([&](std::size_t i) { return every_x_at_w(i, c, w); }); }); });
    }
    return false;
  }

  std::vector<std::size_t> all_indices() const {
    std::vector<std::size_t> out(f_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }

  /// If F(u(t)) = F(u(tf)) for all t >= tf, that value.
  static std::optional<Bits> mapped_steady_from(const Signal& u, const BoolFn& F, const Time& tf) {
    const Time h = detail::inspect_horizon(u, tf);
    std::vector<Time> pts{tf, h};
    for (const auto& e : u.unroll(h, true))
      if (!(e.at < tf)) pts.push_back(e.at);
    const Bits ref = F(u.eval(tf));
    for (const auto& t : detail::with_midpoints(std::move(pts)))
      if (F(u.eval(t)) != ref) return std::nullopt;
    return ref;
  }

 private:
  bool input_converges(const Signal& u, const BoolFn* F) const {
    std::vector<const Signal*> one{&u};
    for (const auto& t : critical_times(one)) {
      if (F ? mapped_steady_from(u, *F, t).has_value() : steady_from(u, t).has_value()) return true;
    }
    return false;
  }

  template <typename P>
  static bool all_of(const std::vector<std::size_t>& S, P&& p) {
    return std::all_of(S.begin(), S.end(), p);
  }
  template <typename P>
  bool all_inputs(P&& p) const {
    for (std::size_t i = 0; i < f_.size(); ++i)
      if (!p(i)) return false;
    return true;
  }
  template <typename P>
  bool all_states(std::size_t i, P&& p) const {
    for (std::size_t k = 0; k < f_.entries()[i].states.size(); ++k)
      if (!p(k)) return false;
    return true;
  }
  template <typename P>
  bool all_convergent(std::size_t i, P&& p) const {
    for (std::size_t k = 0; k < f_.entries()[i].states.size(); ++k)
      if (converges(i, k) && !p(k)) return false;
    return true;
  }
  template <typename P>
  bool any_time(P&& p) const {
    for (std::size_t c = 0; c < times_.size(); ++c)
      if (p(c)) return true;
    return false;
  }
  template <typename P>
  bool any_w(P&& p) const {
    return std::any_of(ws_.begin(), ws_.end(), p);
  }

  const SystemTable& f_;
  std::vector<Time> times_;
  std::vector<std::vector<std::vector<std::optional<Bits>>>> steady_, steady_left_;
  std::vector<std::vector<std::vector<bool>>> quiet_;
  std::vector<Bits> ws_;
};

}  // namespace asyncsys
