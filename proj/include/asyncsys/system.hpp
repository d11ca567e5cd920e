#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "asyncsys/literal.hpp"
#include "asyncsys/signal.hpp"

namespace asyncsys {

struct Entry {
  Signal input;
  std::vector<Signal> states;  // sorted, distinct, non-empty

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// A finite asynchronous system f: U -> P*(S^(n)), U a finite set of m-dimensional
/// signals. Entries are sorted by input, state sets are sorted and duplicate-free.
class SystemTable {
 public:
  SystemTable() = default;

  static SystemTable make(int m, int n, std::vector<std::pair<Signal, std::vector<Signal>>> rows) {
    SystemTable f;
    f.m_ = m;
    f.n_ = n;
    if (rows.empty()) throw Error("system has no inputs");
    for (auto& [u, xs] : rows) {
      if (u.width() != m) throw Error("input " + to_literal(u) + " has width " + std::to_string(u.width()) +
                                      ", expected m=" + std::to_string(m));
      if (xs.empty()) throw Error("empty state set at input " + to_literal(u));
      for (const auto& x : xs)
        if (x.width() != n)
          throw Error("state " + to_literal(x) + " has width " + std::to_string(x.width()) + ", expected n=" +
                      std::to_string(n));
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      f.entries_.push_back({std::move(u), std::move(xs)});
    }
    std::sort(f.entries_.begin(), f.entries_.end(), [](const Entry& a, const Entry& b) { return a.input < b.input; });
    for (std::size_t i = 1; i < f.entries_.size(); ++i)
      if (f.entries_[i - 1].input == f.entries_[i].input)
        throw Error("duplicate input " + to_literal(f.entries_[i].input));
    return f;
  }

  int in_width() const { return m_; }
  int out_width() const { return n_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  const Entry* find(const Signal& u) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), u,
                               [](const Entry& e, const Signal& s) { return e.input < s; });
    return it != entries_.end() && it->input == u ? &*it : nullptr;
  }
  bool contains(const Signal& u) const { return find(u) != nullptr; }
  const std::vector<Signal>& at(const Signal& u) const {
    if (const auto* e = find(u)) return e->states;
    throw Error("input not in the domain: " + to_literal(u));
  }

  friend bool operator==(const SystemTable&, const SystemTable&) = default;

 private:
  int m_ = 1;
  int n_ = 1;
  std::vector<Entry> entries_;
};

/// System file text: header line, then one `input:` line per entry followed by
/// its `state:` lines, in canonical order.
inline std::string to_system_text(const SystemTable& f) {
  std::string s = "system m=" + std::to_string(f.in_width()) + " n=" + std::to_string(f.out_width()) + "\n";
  for (const auto& e : f.entries()) {
    s += "input: " + to_literal(e.input) + "\n";
    for (const auto& x : e.states) s += "state: " + to_literal(x) + "\n";
  }
  return s;
}

namespace detail {
inline bool contains_sorted(const std::vector<Signal>& xs, const Signal& x) {
  return std::binary_search(xs.begin(), xs.end(), x);
}
inline void require_same_widths(const SystemTable& f, const SystemTable& g, const char* op) {
  if (f.in_width() != g.in_width() || f.out_width() != g.out_width())
    throw Error(std::string(op) + ": width mismatch");
}
}  // namespace detail

/// V subset of U and g(u) subset of f(u) on V (non-strict inclusion).
inline bool is_subsystem(const SystemTable& g, const SystemTable& f) {
  detail::require_same_widths(g, f, "subsystem");
  for (const auto& e : g.entries()) {
    const auto* fe = f.find(e.input);
    if (!fe || !std::includes(fe->states.begin(), fe->states.end(), e.states.begin(), e.states.end())) return false;
  }
  return true;
}

inline SystemTable dual(const SystemTable& f) {
  std::vector<std::pair<Signal, std::vector<Signal>>> rows;
  for (const auto& e : f.entries()) {
    std::vector<Signal> xs;
    for (const auto& x : e.states) xs.push_back(complement(x));
    rows.emplace_back(complement(e.input), std::move(xs));
  }
  return SystemTable::make(f.in_width(), f.out_width(), std::move(rows));
}

inline SystemTable intersect(const SystemTable& f, const SystemTable& g) {
  detail::require_same_widths(f, g, "intersection");
  std::vector<std::pair<Signal, std::vector<Signal>>> rows;
  for (const auto& e : f.entries()) {
    const auto* ge = g.find(e.input);
    if (!ge) continue;
    std::vector<Signal> xs;
    std::set_intersection(e.states.begin(), e.states.end(), ge->states.begin(), ge->states.end(),
                          std::back_inserter(xs));
    if (xs.empty()) throw Error("empty value set at u = " + to_literal(e.input));
    rows.emplace_back(e.input, std::move(xs));
  }
  if (rows.empty()) throw Error("empty domain");
  return SystemTable::make(f.in_width(), f.out_width(), std::move(rows));
}

inline SystemTable unite(const SystemTable& f, const SystemTable& g) {
  detail::require_same_widths(f, g, "union");
  std::vector<std::pair<Signal, std::vector<Signal>>> rows;
  for (const auto& e : f.entries()) {
    std::vector<Signal> xs = e.states;
    if (const auto* ge = g.find(e.input)) xs.insert(xs.end(), ge->states.begin(), ge->states.end());
    rows.emplace_back(e.input, std::move(xs));
  }
  for (const auto& e : g.entries())
    if (!f.contains(e.input)) rows.emplace_back(e.input, e.states);
  return SystemTable::make(f.in_width(), f.out_width(), std::move(rows));
}

/// (f, f')(u) = { (x, y) | x in f(u), y in f'(u) } on U intersect U'.
inline SystemTable parallel(const SystemTable& f, const SystemTable& f2) {
  if (f.in_width() != f2.in_width()) throw Error("parallel: input width mismatch");
  std::vector<std::pair<Signal, std::vector<Signal>>> rows;
  for (const auto& e : f.entries()) {
    const auto* e2 = f2.find(e.input);
    if (!e2) continue;
    std::vector<Signal> zs;
    for (const auto& x : e.states)
      for (const auto& y : e2->states) zs.push_back(coord_concat(x, y));
    rows.emplace_back(e.input, std::move(zs));
  }
  if (rows.empty()) throw Error("parallel: empty domain intersection");
  return SystemTable::make(f.in_width(), f.out_width() + f2.out_width(), std::move(rows));
}

/// (h o f)(u) = { y | exists x in f(u) intersect X, y in h(x) }.
inline SystemTable serial(const SystemTable& h, const SystemTable& f) {
  if (h.in_width() != f.out_width()) throw Error("serial: h input width must equal f output width");
  std::vector<std::pair<Signal, std::vector<Signal>>> rows;
  for (const auto& e : f.entries()) {
    std::vector<Signal> ys;
    for (const auto& x : e.states)
      if (const auto* he = h.find(x)) ys.insert(ys.end(), he->states.begin(), he->states.end());
    if (ys.empty()) throw Error("serial: f(u) does not meet the domain of h at u = " + to_literal(e.input));
    rows.emplace_back(e.input, std::move(ys));
  }
  return SystemTable::make(f.in_width(), h.out_width(), std::move(rows));
}

/// Both state sets restricted to (-inf, t1) coincide as sets.
inline bool restricted_sets_equal(const std::vector<Signal>& xs, const std::vector<Signal>& ys, const Time& t1) {
  auto covered = [&](const std::vector<Signal>& a, const std::vector<Signal>& b) {
    return std::all_of(a.begin(), a.end(), [&](const Signal& x) {
      return std::any_of(b.begin(), b.end(), [&](const Signal& y) { return restrict_eq(x, y, t1); });
    });
  };
  return covered(xs, ys) && covered(ys, xs);
}

struct CausalityViolation {
  Signal u;
  Signal v;
  Time t1;
};

struct CausalityReport {
  bool holds = true;
  std::optional<CausalityViolation> counterexample;
};

/// Non-anticipation. For distinct inputs u, v the premise u = v on (-inf, t1)
/// holds exactly for t1 <= d(u, v), the first instant where they differ, and
/// agreement of restricted state sets is inherited by smaller t1. Checking at
/// t1 = d(u, v) therefore decides the definition for every real t1.
inline CausalityReport check_non_anticipatory(const SystemTable& f) {
  const auto& es = f.entries();
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      auto ag = agreement(es[i].input, es[j].input);
      if (ag.kind != Agreement::Kind::Until) continue;
      if (!restricted_sets_equal(es[i].states, es[j].states, ag.until))
        return {false, CausalityViolation{es[i].input, es[j].input, ag.until}};
    }
  }
  return {};
}

inline bool is_non_anticipatory(const SystemTable& f) { return check_non_anticipatory(f).holds; }

/// The common initial value w0 of all states, if there is one.
inline std::optional<Bits> initial_state(const SystemTable& f) {
  const Bits& w0 = f.entries().front().states.front().initial();
  for (const auto& e : f.entries())
    for (const auto& x : e.states)
      if (x.initial() != w0) return std::nullopt;
  return w0;
}

enum class TimeFlavorKind { Unbounded, Bounded, Fix };

inline const char* name(TimeFlavorKind k) {
  switch (k) {
    case TimeFlavorKind::Unbounded: return "unbounded";
    case TimeFlavorKind::Bounded: return "bounded";
    case TimeFlavorKind::Fix: return "fix";
  }
  return "?";
}

/// Witnesses for the three quantifier shapes of an initial or final time.
/// per_state[i][k] is empty for final times of non-convergent states, which the
/// final-time formulas do not quantify over.
struct TimeFlavor {
  TimeFlavorKind kind = TimeFlavorKind::Fix;
  TimeWitness fix;
  std::vector<TimeWitness> per_input;
  std::vector<std::vector<std::optional<TimeWitness>>> per_state;
};

namespace detail {
// Combines witnesses: `pick_max` for final times (any later instant works),
// min for initial times (any earlier instant works). `any` witnesses impose nothing.
inline TimeWitness combine(const std::vector<TimeWitness>& ws, bool pick_max) {
  std::optional<Time> best;
  for (const auto& w : ws) {
    if (w.any) continue;
    best = !best ? w.at : (pick_max ? std::max(*best, w.at) : std::min(*best, w.at));
  }
  return best ? TimeWitness{*best, false} : TimeWitness{Time{0}, true};
}

inline TimeFlavor classify(const SystemTable& f, bool final) {
  TimeFlavor tf;
  std::vector<TimeWitness> all;
  for (const auto& e : f.entries()) {
    std::vector<std::optional<TimeWitness>> row;
    std::vector<TimeWitness> present;
    for (const auto& x : e.states) {
      std::optional<TimeWitness> w = final ? x.final_time() : std::optional<TimeWitness>(x.initial_time());
      row.push_back(w);
      if (w) present.push_back(*w);
    }
    tf.per_state.push_back(std::move(row));
    tf.per_input.push_back(combine(present, final));
    all.push_back(tf.per_input.back());
  }
  tf.fix = combine(all, final);
  tf.kind = TimeFlavorKind::Fix;
  return tf;
}
}  // namespace detail

/// Least-witness classification of the initial time. On finite tables the fix
/// flavor always holds; the weaker witnesses are kept for the combined forms.
inline TimeFlavor classify_initial_time(const SystemTable& f) { return detail::classify(f, false); }

/// Same for the final time; only states in S_c are quantified.
inline TimeFlavor classify_final_time(const SystemTable& f) { return detail::classify(f, true); }

/// Sigma_f(u): the final values of the convergent states of f(u).
inline std::set<Bits> sigma(const SystemTable& f, const Signal& u) {
  std::set<Bits> out;
  for (const auto& x : f.at(u))
    if (auto w = x.final_value()) out.insert(*w);
  return out;
}

inline std::set<Bits> equilibrium_points(const SystemTable& f) {
  std::set<Bits> out;
  for (const auto& e : f.entries())
    for (const auto& x : e.states)
      if (x.is_constant()) out.insert(x.initial());
  return out;
}

}  // namespace asyncsys
