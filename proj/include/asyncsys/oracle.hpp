#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "asyncsys/formula.hpp"
#include "asyncsys/stability.hpp"
#include "asyncsys/system.hpp"

namespace asyncsys {

/// Bounds of a small-instance corpus.
struct CorpusSpec {
  int m = 1;
  int n = 1;
  int max_inputs = 2;
  int max_states = 2;
  std::vector<Time> grid{Time(1), Time(2)};
  bool allow_tails = true;
  std::uint64_t seed = 0;
};

/// Largest corpus a suite may enumerate.
inline constexpr std::uint64_t kCorpusBudget = 1'000'000;

/// Every canonical signal of the given width whose events lie on the grid, plus,
/// with tails, the period-1 two-phase oscillators a -> b -> a starting one time
/// unit after the last grid point. Sorted.
inline std::vector<Signal> signal_universe(int width, const std::vector<Time>& grid, bool allow_tails) {
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k - 1] < grid[k])) throw Error("corpus grid must be strictly increasing");
  const auto values = Bits::all(width);
  const std::uint64_t base = values.size();
  std::uint64_t total = base;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (total > kCorpusBudget / base) throw Error("signal universe exceeds the corpus budget");
    total *= base;
  }
  std::vector<Signal> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    const Bits& init = values[c % base];
    c /= base;
    std::vector<Event> ev;
    Bits prev = init;
    for (const auto& t : grid) {
      const Bits& v = values[c % base];
      c /= base;
      if (v != prev) ev.push_back({t, v});
      prev = v;
    }
    out.push_back(Signal::make(init, std::move(ev)));
  }
  if (allow_tails) {
    const Time anchor = (grid.empty() ? Time(0) : grid.back()) + Time(1);
    for (const auto& a : values)
      for (const auto& b : values)
        if (a != b) out.push_back(Signal::make(a, {}, RawTail{Time(1), {{Time(0), b}, {Time(1, 2), a}}, anchor}));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {
inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  return a != 0 && b > UINT64_MAX / a ? UINT64_MAX : a * b;
}
inline std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > UINT64_MAX / (n - k + i)) return UINT64_MAX;
    r = r * (n - k + i) / i;
  }
  return r;
}
/// Index subsets of {0..n-1} with 1..k elements, by size, then lexicographically.
inline std::vector<std::vector<std::size_t>> subsets_upto(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t size = 1; size <= std::min(n, k); ++size) {
    std::vector<std::size_t> c(size);
    for (std::size_t i = 0; i < size; ++i) c[i] = i;
    while (true) {
      out.push_back(c);
      std::size_t i = size;
      while (i > 0 && c[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++c[i - 1];
      for (std::size_t j = i; j < size; ++j) c[j] = c[j - 1] + 1;
    }
  }
  return out;
}
}  // namespace detail

/// Deterministic, seed-independent enumeration of all tables within the bounds:
/// every set of 1..max_inputs distinct inputs, each mapped to every set of
/// 1..max_states distinct states. Random access by index, so workers may take
/// disjoint index ranges.
class Corpus {
 public:
  explicit Corpus(const CorpusSpec& spec) : spec_(spec) {
    if (spec.m < 1 || spec.n < 1 || spec.max_inputs < 1 || spec.max_states < 1)
      throw Error("corpus bounds must be positive");
    inputs_ = signal_universe(spec.m, spec.grid, spec.allow_tails);
    states_ = spec.m == spec.n ? inputs_ : signal_universe(spec.n, spec.grid, spec.allow_tails);
    std::uint64_t per_input = 0;
    for (int j = 1; j <= spec.max_states; ++j) per_input = detail::sat_add(per_input, detail::binom(states_.size(), j));
    std::uint64_t total = 0;
    for (int k = 1; k <= spec.max_inputs; ++k) {
      std::uint64_t term = detail::binom(inputs_.size(), k);
      for (int i = 0; i < k; ++i) term = detail::sat_mul(term, per_input);
      total = detail::sat_add(total, term);
    }
    if (total > kCorpusBudget)
      throw Error("corpus of " + (total == UINT64_MAX ? std::string("more than 2^64") : std::to_string(total)) +
                  " tables exceeds the budget of " + std::to_string(kCorpusBudget));
    size_ = total;
    input_sets_ = detail::subsets_upto(inputs_.size(), spec.max_inputs);
    state_sets_ = detail::subsets_upto(states_.size(), spec.max_states);
  }

  std::uint64_t size() const { return size_; }
  const std::vector<Signal>& input_universe() const { return inputs_; }
  const std::vector<Signal>& state_universe() const { return states_; }

  /// Table number `index`: input sets in order, state choices in mixed radix
  /// with the first input's choice most significant.
  SystemTable at(std::uint64_t index) const {
    if (index >= size_) throw Error("corpus index out of range");
    const std::uint64_t per = state_sets_.size();
    for (const auto& us : input_sets_) {
      std::uint64_t block = 1;
      for (std::size_t i = 0; i < us.size(); ++i) block *= per;
      if (index >= block) {
        index -= block;
        continue;
      }
      std::vector<std::pair<Signal, std::vector<Signal>>> rows(us.size());
      for (std::size_t i = us.size(); i-- > 0;) {
        const auto& ss = state_sets_[index % per];
        index /= per;
        rows[i].first = inputs_[us[i]];
        for (auto s : ss) rows[i].second.push_back(states_[s]);
      }
      return SystemTable::make(spec_.m, spec_.n, std::move(rows));
    }
    throw Error("corpus index out of range");
  }

 private:
  CorpusSpec spec_;
  std::vector<Signal> inputs_, states_;
  std::vector<std::vector<std::size_t>> input_sets_, state_sets_;
  std::uint64_t size_ = 0;
};

/// Pull-based stream over a corpus.
class SystemStream {
 public:
  explicit SystemStream(const CorpusSpec& spec) : corpus_(spec) {}
  std::optional<SystemTable> next() {
    if (pos_ >= corpus_.size()) return std::nullopt;
    return corpus_.at(pos_++);
  }
  std::uint64_t size() const { return corpus_.size(); }

 private:
  Corpus corpus_;
  std::uint64_t pos_ = 0;
};

inline SystemStream enumerate_systems(const CorpusSpec& spec) { return SystemStream(spec); }

/// A table drawn from the corpus universes: 1..max_inputs distinct inputs, each
/// with 1..max_states distinct states. Only mt19937_64 output is consumed, so
/// draws are reproducible across platforms.
inline SystemTable random_system(const CorpusSpec& spec, std::mt19937_64& rng,
                                 const std::vector<Signal>& inputs, const std::vector<Signal>& states) {
  auto pick = [&](const std::vector<Signal>& from, int max_count) {
    const std::size_t want = std::min<std::size_t>(1 + rng() % static_cast<std::uint64_t>(max_count), from.size());
    std::vector<std::size_t> idx;
    while (idx.size() < want) {
      std::size_t k = rng() % from.size();
      if (std::find(idx.begin(), idx.end(), k) == idx.end()) idx.push_back(k);
    }
    std::sort(idx.begin(), idx.end());
    std::vector<Signal> out;
    for (auto k : idx) out.push_back(from[k]);
    return out;
  };
  std::vector<std::pair<Signal, std::vector<Signal>>> rows;
  for (auto& u : pick(inputs, spec.max_inputs)) rows.emplace_back(u, pick(states, spec.max_states));
  return SystemTable::make(spec.m, spec.n, std::move(rows));
}

inline SystemTable random_system(const CorpusSpec& spec, std::mt19937_64& rng) {
  const auto inputs = signal_universe(spec.m, spec.grid, spec.allow_tails);
  const auto states = spec.m == spec.n ? inputs : signal_universe(spec.n, spec.grid, spec.allow_tails);
  return random_system(spec, rng, inputs, states);
}

inline SystemTable random_system(const CorpusSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  return random_system(spec, rng);
}

// ---------------------------------------------------------------------------
// Formula replay

/// Identifiers of the replayable formulas: the nine stability notions
/// `<abs|rel|frel>:<stable|racefree|constant>`, and the time formulas
/// `<initial|final>:<unbounded|bounded|fix>`.
inline std::vector<std::string> formula_ids() {
  std::vector<std::string> out;
  for (auto sc : {"abs", "rel", "frel"})
    for (auto st : {"stable", "racefree", "constant"}) out.push_back(std::string(sc) + ":" + st);
  for (auto w : {"initial", "final"})
    for (auto k : {"unbounded", "bounded", "fix"}) out.push_back(std::string(w) + ":" + k);
  return out;
}

namespace detail {
inline StabilityFlavor stability_id(std::string_view id) {
  auto fl = StabilityFlavor::parse(id);
  if (!fl) throw Error("unknown formula id '" + std::string(id) + "'");
  return *fl;
}
inline std::pair<bool, TimeFlavorKind> time_id(std::string_view id) {
  auto colon = id.find(':');
  auto which = id.substr(0, colon);
  auto kind = colon == std::string_view::npos ? std::string_view() : id.substr(colon + 1);
  if (which != "initial" && which != "final") throw Error("unknown formula id '" + std::string(id) + "'");
  TimeFlavorKind k;
  if (kind == "unbounded") k = TimeFlavorKind::Unbounded;
  else if (kind == "bounded") k = TimeFlavorKind::Bounded;
  else if (kind == "fix") k = TimeFlavorKind::Fix;
  else throw Error("unknown formula id '" + std::string(id) + "'");
  return {which == "final", k};
}
inline Time at_of(const TimeWitness& w) { return w.any ? Time(0) : w.at; }
}  // namespace detail

/// The raw quantified formula, all quantifiers over reals eliminated by
/// enumeration over critical times. `F` is required for the frel formulas.
inline bool evaluate(std::string_view formula_id, const FormulaEvaluator& ev, const BoolFn* F = nullptr) {
  if (formula_id.substr(0, 8) == "initial:" || formula_id.substr(0, 6) == "final:") {
    auto [final, kind] = detail::time_id(formula_id);
    return final ? ev.final_time(kind) : ev.initial_time(kind);
  }
  const auto fl = detail::stability_id(formula_id);
  if (fl.scope == Scope::FRelative && !F) throw Error("formula '" + std::string(formula_id) + "' needs F");
  if (fl.scope == Scope::FRelative && fl.strength == Strength::Constant) return ev.constant(ev.all_indices());
  auto S = ev.scope(static_cast<int>(fl.scope), F);
  switch (fl.strength) {
    case Strength::Stable: return ev.stable(S);
    case Strength::RaceFree: return fl.scope == Scope::FRelative ? ev.f_race_free(S, *F) : ev.race_free(S);
    case Strength::Constant: return ev.constant(S);
  }
  return false;
}

inline bool evaluate(std::string_view formula_id, const SystemTable& f, const BoolFn* F = nullptr) {
  return evaluate(formula_id, FormulaEvaluator(f), F);
}

/// Plugs the existential witnesses of a stability report into the formula and
/// checks the remaining universal part by critical-time enumeration. The scope
/// is recomputed from the formula, not taken from the report.
inline bool replay(std::string_view formula_id, const FormulaEvaluator& ev, const StabilityReport& w) {
  const auto fl = detail::stability_id(formula_id);
  const BoolFn* F = w.flavor.F ? &*w.flavor.F : nullptr;
  if (fl.scope == Scope::FRelative && !F) throw Error("formula '" + std::string(formula_id) + "' needs F");
  const SystemTable& f = ev.system();
  const auto S = fl.scope == Scope::FRelative && fl.strength == Strength::Constant
                     ? ev.all_indices()
                     : ev.scope(static_cast<int>(fl.scope), F);
  for (std::size_t i : S) {
    const Entry& e = f.entries()[i];
    if (fl.strength == Strength::Stable) {
      for (std::size_t k = 0; k < e.states.size(); ++k) {
        auto it = std::find_if(w.per_state.begin(), w.per_state.end(),
                               [&](const StateWitness& s) { return s.input == i && s.state == k; });
        if (it == w.per_state.end()) return false;
        if (steady_from(e.states[k], detail::at_of(it->tf)) != it->w) return false;
      }
      continue;
    }
    auto it = std::find_if(w.per_input.begin(), w.per_input.end(), [&](const InputWitness& s) { return s.input == i; });
    if (it == w.per_input.end()) return false;
    const Time tf = detail::at_of(it->tf);
    for (const auto& x : e.states)
      if (steady_from(x, tf) != it->w) return false;
    if (fl.strength == Strength::RaceFree && fl.scope == Scope::FRelative) {
      if ((*F)(e.input.eval(tf)) != it->w) return false;
      if (FormulaEvaluator::mapped_steady_from(e.input, *F, tf) != it->w) return false;
    }
    if (fl.strength == Strength::Constant && (!w.global_w || it->w != *w.global_w)) return false;
  }
  return true;
}

inline bool replay(std::string_view formula_id, const SystemTable& f, const StabilityReport& w) {
  detail::stability_id(formula_id);
  return replay(formula_id, FormulaEvaluator(f), w);
}

/// Same for the time formulas with classify_* witnesses.
inline bool replay(std::string_view formula_id, const SystemTable& f, const TimeFlavor& w) {
  const auto [final, kind] = detail::time_id(formula_id);
  auto holds = [&](const Signal& x, const TimeWitness& t) {
    return final ? steady_from(x, detail::at_of(t)).has_value()
                 : (t.any || quiet_before(x, t.at));
  };
  const auto& es = f.entries();
  if (w.per_state.size() != es.size() || w.per_input.size() != es.size()) return false;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (w.per_state[i].size() != es[i].states.size()) return false;
    for (std::size_t k = 0; k < es[i].states.size(); ++k) {
      const Signal& x = es[i].states[k];
      if (final && !x.final_value()) continue;  // only convergent states are quantified
      const auto& own = w.per_state[i][k];
      const TimeWitness t = kind == TimeFlavorKind::Fix ? w.fix
                            : kind == TimeFlavorKind::Bounded ? w.per_input[i]
                            : own ? *own : TimeWitness{};
      if (kind == TimeFlavorKind::Unbounded && !own) return false;
      if (!holds(x, t)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parallel corpus scan

/// Calls `body(index, worker)` for every index in [0, count) on up to `threads`
/// workers. Indices are interleaved; callers aggregate order-independently.
inline void parallel_indices(std::uint64_t count, unsigned threads,
                             const std::function<void(std::uint64_t, unsigned)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t i = w; i < count; i += threads) body(i, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace asyncsys
