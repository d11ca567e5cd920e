#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "asyncsys/constructive.hpp"
#include "asyncsys/oracle.hpp"
#include "asyncsys/report.hpp"

namespace asyncsys {

/// Settings shared by the theorem suites.
struct SuiteConfig {
  CorpusSpec corpus;                // enumerated exhaustively
  std::uint64_t seed = 1;           // for the random parts
  std::uint64_t random_count = 10000;
  unsigned threads = 0;             // 0: hardware concurrency
};

/// Named corpora: `small` is 1-bit, up to 2 inputs and 2 states, grid {1,2},
/// with tails; `tiny` is 1-bit, one input, up to 2 states, grid {1}, no tails.
inline CorpusSpec named_corpus(std::string_view name) {
  CorpusSpec s;
  if (name == "small") return s;
  if (name == "tiny") {
    s.max_inputs = 1;
    s.grid = {Time(1)};
    s.allow_tails = false;
    return s;
  }
  throw Error("unknown corpus '" + std::string(name) + "' (expected small or tiny)");
}

struct SuiteResult {
  KvReport report;
  bool clean = false;
};

namespace detail {

inline std::string one_line(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c == '\n') {
      if (!s.empty() && s.back() != '|') s += " | ";
    } else {
      s += c;
    }
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '|')) s.pop_back();
  return s;
}

/// Functions B^m -> B^n used for the frel flavors: all of them when there are
/// at most 16, else the leading projection (padded with zeros) and the two
/// constants.
inline std::vector<BoolFn> frel_functions(int m, int n) {
  const std::size_t rows = std::size_t{1} << m;
  std::vector<BoolFn> out;
  if (n * rows <= 4) {
    const auto values = Bits::all(n);
    std::size_t total = 1;
    for (std::size_t r = 0; r < rows; ++r) total *= values.size();
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Bits> table;
      std::size_t c = code;
      for (std::size_t r = 0; r < rows; ++r) {
        table.push_back(values[c % values.size()]);
        c /= values.size();
      }
      out.emplace_back(m, n, std::move(table));
    }
    return out;
  }
  out.push_back(BoolFn::from(m, n, [&](const Bits& b) {
    Bits r(n, 0);
    for (int i = 0; i < std::min(m, n); ++i) r.set(i, b[i]);
    return r;
  }));
  out.push_back(BoolFn::constant(m, Bits(n, 0)));
  out.push_back(BoolFn::constant(m, Bits(n, 0).complement()));
  return out;
}

/// Violation tally with the canonically first counterexample per key.
class Tally {
 public:
  void check(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    ++checks_[key];
  }
  void held(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    ++held_[key];
  }
  void fail(const std::string& key, std::uint64_t order, const std::function<std::string()>& describe) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& v = fails_[key];
    ++v.count;
    if (!v.first || order < v.order) {
      v.order = order;
      v.first = describe();
    }
  }
  std::uint64_t violations() const {
    std::uint64_t n = 0;
    for (const auto& [k, v] : fails_) n += v.count;
    return n;
  }
  void write(KvReport& kv) const {
    std::uint64_t total = 0;
    for (const auto& [k, n] : checks_) {
      kv.set("checks." + k, n);
      total += n;
    }
    for (const auto& [k, n] : held_) kv.set("hypothesis_held." + k, n);
    kv.set("checks", total);
    for (const auto& [k, v] : fails_) {
      kv.set("violations." + k, v.count);
      kv.set("counterexample." + k, one_line(*v.first));
    }
    kv.set("violations", violations());
  }

 private:
  struct Fail {
    std::uint64_t count = 0;
    std::uint64_t order = 0;
    std::optional<std::string> first;
  };
  std::mutex mu_;
  std::map<std::string, std::uint64_t> checks_, held_;
  std::map<std::string, Fail> fails_;
};

/// Runs `per_table(f, order, tally)` over the corpus and, if `random` is set,
/// over `cfg.random_count` random tables drawn from it (order offset by the
/// corpus size). Random tables are pre-drawn sequentially so the stream is
/// independent of the thread count.
inline KvReport scan(const std::string& suite, const SuiteConfig& cfg, const std::optional<CorpusSpec>& random,
                     const std::function<void(const SystemTable&, std::uint64_t, Tally&)>& per_table,
                     bool& clean) {
  Corpus corpus(cfg.corpus);
  Tally tally;
  parallel_indices(corpus.size(), cfg.threads, [&](std::uint64_t i, unsigned) { per_table(corpus.at(i), i, tally); });
  KvReport kv;
  kv.set("suite", suite);
  kv.set("corpus.tables", corpus.size());
  if (random) {
    std::mt19937_64 rng(cfg.seed);
    const auto inputs = signal_universe(random->m, random->grid, random->allow_tails);
    const auto states = random->m == random->n ? inputs : signal_universe(random->n, random->grid, random->allow_tails);
    std::vector<SystemTable> draws;
    for (std::uint64_t k = 0; k < cfg.random_count; ++k) draws.push_back(random_system(*random, rng, inputs, states));
    parallel_indices(draws.size(), cfg.threads,
                     [&](std::uint64_t k, unsigned) { per_table(draws[k], corpus.size() + k, tally); });
    kv.set("random.tables", draws.size());
    kv.set("seed", cfg.seed);
  }
  tally.write(kv);
  clean = tally.violations() == 0;
  return kv;
}

inline const Strength kAllStrengths[] = {Strength::Stable, Strength::RaceFree, Strength::Constant};
inline const TimeFlavorKind kAllTimes[] = {TimeFlavorKind::Unbounded, TimeFlavorKind::Bounded, TimeFlavorKind::Fix};

}  // namespace detail

/// check() verdicts against direct formula evaluation for all nine flavors,
/// accepted witnesses replayed, and the time formulas with their witnesses.
inline SuiteResult suite_agreement(const SuiteConfig& cfg) {
  const auto Fs = detail::frel_functions(cfg.corpus.m, cfg.corpus.n);
  SuiteResult res;
  res.report = detail::scan("agreement", cfg, std::nullopt, [&](const SystemTable& f, std::uint64_t order, detail::Tally& t) {
    FormulaEvaluator ev(f);
    auto describe = [&](const std::string& what) { return [&f, what] { return what + "\n" + to_system_text(f); }; };
    for (auto scope : {Scope::Absolute, Scope::Relative, Scope::FRelative}) {
      for (auto st : detail::kAllStrengths) {
        const std::size_t nF = scope == Scope::FRelative ? Fs.size() : 1;
        for (std::size_t j = 0; j < nF; ++j) {
          StabilityFlavor fl{scope, st, std::nullopt};
          if (scope == Scope::FRelative) fl.F = Fs[j];
          const std::string id = fl.str();
          const BoolFn* F = fl.F ? &*fl.F : nullptr;
          auto r = check(f, fl);
          t.check("verdict." + id);
          if (r.verdict != evaluate(id, ev, F))
            t.fail("verdict." + id, order, describe(id + (F ? " F#" + std::to_string(j) : "")));
          if (r.verdict) {
            t.check("witness." + id);
            if (!replay(id, ev, r)) t.fail("witness." + id, order, describe(id));
          }
        }
      }
    }
    const TimeFlavor flavors[] = {classify_initial_time(f), classify_final_time(f)};
    for (int which = 0; which < 2; ++which) {
      for (auto k : detail::kAllTimes) {
        const std::string id = std::string(which ? "final:" : "initial:") + name(k);
        t.check("time." + id);
        // On finite tables every time formula holds, with the classified witnesses.
        if (!evaluate(id, ev) || !replay(id, f, flavors[which])) t.fail("time." + id, order, describe(id));
      }
    }
  }, res.clean);
  return res;
}

/// Constant => race-free => stable, scope inclusions, fix => bounded => unbounded.
inline SuiteResult suite_implications(const SuiteConfig& cfg) {
  const auto Fs = detail::frel_functions(cfg.corpus.m, cfg.corpus.n);
  SuiteResult res;
  res.report = detail::scan("implications", cfg, std::nullopt, [&](const SystemTable& f, std::uint64_t order, detail::Tally& t) {
    FormulaEvaluator ev(f);
    auto describe = [&](const std::string& what) { return [&f, what] { return what + "\n" + to_system_text(f); }; };
    auto v = [&](Scope sc, Strength st, const BoolFn* F = nullptr) {
      return check(f, StabilityFlavor{sc, st, F ? std::optional<BoolFn>(*F) : std::nullopt}).verdict;
    };
    auto implies = [&](const std::string& key, bool a, bool b) {
      t.check(key);
      if (a) t.held(key);
      if (a && !b) t.fail(key, order, describe(key));
    };
    for (auto sc : {Scope::Absolute, Scope::Relative}) {
      const std::string p = std::string("strength.") + name(sc) + ".";
      implies(p + "constant_racefree", v(sc, Strength::Constant), v(sc, Strength::RaceFree));
      implies(p + "racefree_stable", v(sc, Strength::RaceFree), v(sc, Strength::Stable));
    }
    for (auto st : detail::kAllStrengths)
      implies(std::string("scope.abs_rel.") + name(st), v(Scope::Absolute, st), v(Scope::Relative, st));
    for (const auto& F : Fs) {
      implies("scope.abs_frel.stable", v(Scope::Absolute, Strength::Stable), v(Scope::FRelative, Strength::Stable, &F));
      implies("scope.frel_rel.stable", v(Scope::FRelative, Strength::Stable, &F), v(Scope::Relative, Strength::Stable));
    }
    for (int which = 0; which < 2; ++which) {
      auto tv = [&](TimeFlavorKind k) { return which ? ev.final_time(k) : ev.initial_time(k); };
      const std::string p = which ? "time.final." : "time.initial.";
      implies(p + "fix_bounded", tv(TimeFlavorKind::Fix), tv(TimeFlavorKind::Bounded));
      implies(p + "bounded_unbounded", tv(TimeFlavorKind::Bounded), tv(TimeFlavorKind::Unbounded));
    }
  }, res.clean);
  return res;
}

/// The nine combined statements (strength x final-time flavor): both sides agree.
/// Random part: m=n=2, up to 3 inputs and 3 states, grid {1,2,3}, tails.
inline SuiteResult suite_nine_equivalences(const SuiteConfig& cfg) {
  CorpusSpec larger;
  larger.m = larger.n = 2;
  larger.max_inputs = larger.max_states = 3;
  larger.grid = {Time(1), Time(2), Time(3)};
  SuiteResult res;
  res.report = detail::scan("nine-equivalences", cfg, larger, [&](const SystemTable& f, std::uint64_t order, detail::Tally& t) {
    FormulaEvaluator ev(f);
    for (auto st : detail::kAllStrengths)
      for (auto ft : detail::kAllTimes) {
        const std::string key = std::string(name(st)) + "." + name(ft);
        auto r = check_combined(ev, st, ft);
        t.check(key);
        if (r.lhs) t.held(key);
        if (r.lhs != r.rhs)
          t.fail(key, order, [&] { return key + " lhs=" + (r.lhs ? "1" : "0") + "\n" + to_system_text(f); });
      }
  }, res.clean);
  return res;
}

/// Stable and constant stability of lim-values: frel:constant equals abs:constant.
inline SuiteResult suite_coincidence(const SuiteConfig& cfg) {
  const auto Fs = detail::frel_functions(cfg.corpus.m, cfg.corpus.n);
  SuiteResult res;
  res.report = detail::scan("coincidence", cfg, std::nullopt, [&](const SystemTable& f, std::uint64_t order, detail::Tally& t) {
    const bool abs = check(f, Scope::Absolute, Strength::Constant).verdict;
    for (std::size_t j = 0; j < Fs.size(); ++j) {
      t.check("frel_abs.constant");
      if (abs) t.held("frel_abs.constant");
      if (check(f, Scope::FRelative, Strength::Constant, Fs[j]).verdict != abs)
        t.fail("frel_abs.constant", order, [&] { return "F#" + std::to_string(j) + "\n" + to_system_text(f); });
    }
  }, res.clean);
  return res;
}

/// Race-free tables have singleton lim sets.
inline SuiteResult suite_lim_determinism(const SuiteConfig& cfg) {
  SuiteResult res;
  res.report = detail::scan("lim-determinism", cfg, std::nullopt, [&](const SystemTable& f, std::uint64_t order, detail::Tally& t) {
    if (!check(f, Scope::Absolute, Strength::RaceFree).verdict) return;
    t.check("singleton");
    for (const auto& e : lim_system(f).entries())
      if (e.states.size() != 1) {
        t.fail("singleton", order, [&] { return to_system_text(f); });
        return;
      }
  }, res.clean);
  return res;
}

/// Limits depend only on the input through the fix final time, on causal tables.
inline SuiteResult suite_final_value_dependence(const SuiteConfig& cfg) {
  SuiteResult res;
  res.report = detail::scan("final-value-dependence", cfg, std::nullopt, [&](const SystemTable& f, std::uint64_t order, detail::Tally& t) {
    if (!is_non_anticipatory(f)) return;
    t.check("dependence");
    auto rep = final_value_dependence(f);
    if (rep.pairs_checked) t.held("dependence");
    if (!rep.violations.empty())
      t.fail("dependence", order, [&] { return rep.violations.front() + "\n" + to_system_text(f); });
  }, res.clean);
  return res;
}

/// Closure under subsystem, dual, intersection, union, parallel and serial
/// connection over random operands built to meet the side conditions: g is a
/// random subsystem of f, the intersection/union partner shares inputs with f,
/// f2 has f's inputs, and h is defined on every state of f.
inline SuiteResult suite_closure(const SuiteConfig& cfg) {
  CorpusSpec ops;
  ops.max_inputs = ops.max_states = 3;
  ops.grid = {Time(1), Time(2), Time(3)};
  const auto universe = signal_universe(1, ops.grid, true);
  std::mt19937_64 rng(cfg.seed);
  auto coin = [&](std::uint64_t n) { return rng() % n; };
  auto states_for = [&] {
    std::vector<Signal> xs;
    const auto k = 1 + coin(ops.max_states);
    for (std::uint64_t i = 0; i < k; ++i) xs.push_back(universe[coin(universe.size())]);
    return xs;
  };
  struct Trial {
    SystemTable f, sub, partner, f2, h;
  };
  std::vector<Trial> trials;
  for (std::uint64_t k = 0; k < cfg.random_count; ++k) {
    Trial tr;
    tr.f = random_system(ops, rng, universe, universe);
    std::vector<std::pair<Signal, std::vector<Signal>>> sub, partner, f2, h;
    std::set<Signal> f_states;
    for (const auto& e : tr.f.entries()) {
      f_states.insert(e.states.begin(), e.states.end());
      if (sub.empty() || coin(2)) {
        std::vector<Signal> xs;
        for (const auto& x : e.states)
          if (xs.empty() || coin(2)) xs.push_back(x);
        sub.emplace_back(e.input, xs);
      }
      auto ys = states_for();
      if (coin(2)) ys.push_back(e.states[coin(e.states.size())]);
      partner.emplace_back(e.input, ys);
      f2.emplace_back(e.input, states_for());
    }
    const Signal extra = universe[coin(universe.size())];
    if (!tr.f.contains(extra)) partner.emplace_back(extra, states_for());
    for (const auto& x : f_states) h.emplace_back(x, states_for());
    tr.sub = SystemTable::make(1, 1, std::move(sub));
    tr.partner = SystemTable::make(1, 1, std::move(partner));
    tr.f2 = SystemTable::make(1, 1, std::move(f2));
    tr.h = SystemTable::make(1, 1, std::move(h));
    trials.push_back(std::move(tr));
  }

  detail::Tally tally;
  std::mutex mu;
  std::uint64_t serial_rf_instances = 0;
  parallel_indices(trials.size(), cfg.threads, [&](std::uint64_t k, unsigned) {
    const Trial& tr = trials[k];
    auto a = closure_suite({tr.f, tr.sub, tr.f2, tr.h});
    auto b = closure_suite({tr.f, tr.partner, std::nullopt, std::nullopt});
    auto take = [&](const ClosureReport& rep, bool skip_dual, bool skip_subsystem) {
      for (const auto& x : rep.findings) {
        if ((skip_dual && x.construction == "dual") || (skip_subsystem && x.construction == "subsystem")) continue;
        const std::string key = x.construction + "." + name(x.strength);
        tally.check(key);
        if (x.hypothesis) tally.held(key);
        if (x.violation()) tally.fail(key, k, [&] { return x.instance; });
      }
    };
    take(a, false, false);
    take(b, true, true);
    std::lock_guard<std::mutex> lock(mu);
    serial_rf_instances += a.serial_race_counterexamples.size();
  });
  SuiteResult res;
  res.report.set("suite", "closure");
  res.report.set("random.tables", trials.size());
  res.report.set("seed", cfg.seed);
  res.report.set("serial.racefree.counterexamples", serial_rf_instances);
  tally.write(res.report);
  res.clean = tally.violations() == 0;
  return res;
}

/// First pair (h, f), in canonical order, with h and f race-free and h o f not:
/// f is 1-bit with one input and up to 2 states over grid {1,2,3}, h is defined
/// exactly on the states of f with up to 2 states each.
struct SerialRaceInstance {
  SystemTable h, f;
};

inline std::optional<SerialRaceInstance> find_serial_race_counterexample(std::uint64_t* examined = nullptr) {
  CorpusSpec fs;
  fs.max_inputs = 1;
  fs.max_states = 2;
  fs.grid = {Time(1), Time(2), Time(3)};
  fs.allow_tails = false;
  Corpus fc(fs);
  const auto& U = fc.state_universe();
  const auto state_sets = detail::subsets_upto(U.size(), 2);
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < fc.size(); ++i) {
    SystemTable f = fc.at(i);
    if (!check(f, Scope::Absolute, Strength::RaceFree).verdict) continue;
    std::set<Signal> dom;
    for (const auto& e : f.entries()) dom.insert(e.states.begin(), e.states.end());
    const std::vector<Signal> xs(dom.begin(), dom.end());
    std::vector<std::size_t> digit(xs.size(), 0);
    while (true) {
      std::vector<std::pair<Signal, std::vector<Signal>>> rows;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        std::vector<Signal> ys;
        for (auto s : state_sets[digit[k]]) ys.push_back(U[s]);
        rows.emplace_back(xs[k], std::move(ys));
      }
      SystemTable h = SystemTable::make(1, 1, std::move(rows));
      ++count;
      if (check(h, Scope::Absolute, Strength::RaceFree).verdict &&
          !check(serial(h, f), Scope::Absolute, Strength::RaceFree).verdict) {
        if (examined) *examined = count;
        return SerialRaceInstance{h, f};
      }
      std::size_t k = xs.size();
      while (k > 0 && digit[k - 1] + 1 == state_sets.size()) digit[--k] = 0;
      if (k == 0) break;
      ++digit[k - 1];
    }
  }
  if (examined) *examined = count;
  return std::nullopt;
}

inline std::string serial_race_fixture_text(const SerialRaceInstance& c) {
  return "# h\n" + to_system_text(c.h) + "# f\n" + to_system_text(c.f);
}

inline SuiteResult suite_serial_race_search(const SuiteConfig&) {
  SuiteResult res;
  std::uint64_t examined = 0;
  auto found = find_serial_race_counterexample(&examined);
  res.report.set("suite", "serial-race-search");
  res.report.set("pairs.examined", examined);
  res.report.set("found", found.has_value());
  if (found) {
    res.report.set("h", detail::one_line(to_system_text(found->h)));
    res.report.set("f", detail::one_line(to_system_text(found->f)));
    res.report.set("hf", detail::one_line(to_system_text(serial(found->h, found->f))));
  }
  res.clean = found.has_value();
  return res;
}

/// Constructive checks on the generator family: fundamental inputs built from
/// every 3-element input sequence replay, every 3-target plan on a controllable
/// member replays, and every consecutive pair of certified steps composes.
inline SuiteResult suite_constructive(const SuiteConfig&) {
  detail::Tally t;
  KvReport kv;
  kv.set("suite", "constructive");
  std::uint64_t racefree = 0, controllable = 0;
  for (const auto& member : constructive_family()) {
    const std::string p = member.name + ".";
    const ClosedSystem f = member.closed();
    const bool rf = check(f.table, Scope::Absolute, Strength::RaceFree).verdict;
    kv.set(p + "racefree", rf);
    if (!rf) continue;
    ++racefree;
    const auto basis = f.closure.basis;
    auto compose_all = [&](const SplicedRun& run, const std::string& what, std::uint64_t order) {
      for (std::size_t k = 0; k + 1 < run.steps.size(); ++k) {
        t.check("compose");
        if (!sync_like_compose(f, run.steps[k], run.steps[k + 1]))
          t.fail("compose", order, [&] { return member.name + " " + what + " steps " + std::to_string(k) + "," + std::to_string(k + 1); });
      }
    };
    std::uint64_t built = 0;
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b)
        for (std::size_t c = 0; c < basis.size(); ++c) {
          const std::vector<Signal> seq{basis[a], basis[b], basis[c]};
          const std::string what = "inputs " + std::to_string(a) + std::to_string(b) + std::to_string(c);
          const std::uint64_t order = (racefree << 20) + (a << 8) + (b << 4) + c;
          t.check("build");
          try {
            auto run = build_fundamental_input(f, seq);
            ++built;
            if (!replay_run(f, run)) t.fail("build", order, [&] { return member.name + " " + what + " does not replay"; });
            compose_all(run, what, order);
          } catch (const Error& e) {
            t.fail("build", order, [&] { return member.name + " " + what + ": " + e.what(); });
          }
        }
    kv.set(p + "built", built);

    const auto ctrl = check_controllability(f);
    kv.set(p + "controllable", ctrl.c1 && ctrl.c2);
    if (!(ctrl.c1 && ctrl.c2)) continue;
    ++controllable;
    const auto ws = Bits::all(f.out_width());
    const Bits w0 = *initial_state(f.table);
    std::uint64_t planned = 0;
    for (std::size_t a = 0; a < ws.size(); ++a)
      for (std::size_t b = 0; b < ws.size(); ++b)
        for (std::size_t c = 0; c < ws.size(); ++c) {
          const std::vector<Bits> targets{w0, ws[a], ws[b], ws[c]};
          const std::string what = "targets " + ws[a].str() + "," + ws[b].str() + "," + ws[c].str();
          const std::uint64_t order = (racefree << 20) + (1 << 16) + (a << 8) + (b << 4) + c;
          t.check("plan");
          try {
            auto run = plan_trajectory(f, targets);
            ++planned;
            bool ok = replay_run(f, run);
            for (const auto& x : f.states(run.u))
              for (std::size_t k = 0; k < targets.size(); ++k) ok = ok && x.left_limit(run.cuts[k]) == targets[k];
            if (!ok) t.fail("plan", order, [&] { return member.name + " " + what + " does not replay"; });
            compose_all(run, what, order);
          } catch (const Error& e) {
            t.fail("plan", order, [&] { return member.name + " " + what + ": " + e.what(); });
          }
        }
    kv.set(p + "planned", planned);
  }
  kv.set("systems.racefree", racefree);
  kv.set("systems.controllable", controllable);
  t.write(kv);
  SuiteResult res;
  res.report = kv;
  res.clean = t.violations() == 0 && racefree >= 10 && controllable >= 10;
  return res;
}

/// Hazard verdicts on the library examples, derived by enumerating the runs:
/// the settle window of an input change at t is [t, t + 1 + latest state event].
inline SuiteResult suite_hazards(const SuiteConfig&) {
  KvReport kv;
  kv.set("suite", "hazards");
  auto window = [](const SystemTable& f, const Signal& u) {
    Time last = u.events().front().at;
    for (const auto& x : f.at(u))
      if (!x.events().empty()) last = std::max(last, x.events().back().at);
    return std::make_pair(u.events().front().at, last + Time(1));
  };
  auto probe = [&](const std::string& name, const std::string& input) {
    const auto ex = library_example(name);
    const Signal u = parse_signal(input);
    const auto [lo, hi] = window(ex.table, u);
    std::uint64_t pulses = 0;
    for (const auto& x : ex.table.at(u)) pulses += !monotonous_on(x, lo, hi, true);
    const std::string p = name + ".";
    kv.set(p + "input", input);
    kv.set(p + "window", "[" + lo.str() + "," + hi.str() + "]");
    kv.set(p + "runs", ex.table.at(u).size());
    kv.set(p + "runs_with_pulse", pulses);
    kv.set(p + "stable", check(ex.table, Scope::Absolute, Strength::Stable).verdict);
    kv.set(p + "racefree", check(ex.table, Scope::Absolute, Strength::RaceFree).verdict);
    const bool free = is_hazard_free(ex.table, u, lo, hi);
    kv.set(p + "hazard_free", free);
    return free;
  };
  const bool glitch = probe("glitch_net", "sig 1 init=0 @1=1");
  const bool latch = probe("sr_latch", "sig 2 init=00 @1=10");
  SuiteResult res;
  res.report = kv;
  res.clean = !glitch && latch && kv.get("glitch_net.stable") == "true";
  return res;
}

using SuiteFn = SuiteResult (*)(const SuiteConfig&);

inline const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> table{
      {"agreement", &suite_agreement},
      {"implications", &suite_implications},
      {"nine-equivalences", &suite_nine_equivalences},
      {"closure", &suite_closure},
      {"serial-race-search", &suite_serial_race_search},
      {"coincidence", &suite_coincidence},
      {"lim-determinism", &suite_lim_determinism},
      {"final-value-dependence", &suite_final_value_dependence},
      {"constructive", &suite_constructive},
      {"hazards", &suite_hazards},
  };
  return table;
}

inline std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : suite_table()) out.push_back(k);
  return out;
}

inline SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) {
  auto it = suite_table().find(name);
  if (it == suite_table().end()) throw Error("unknown suite '" + name + "'");
  return it->second(cfg);
}

}  // namespace asyncsys
