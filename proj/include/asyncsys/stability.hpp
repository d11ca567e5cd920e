#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "asyncsys/formula.hpp"
#include "asyncsys/system.hpp"

namespace asyncsys {

enum class Scope { Absolute, Relative, FRelative };
enum class Strength { Stable, RaceFree, Constant };

inline const char* name(Scope s) {
  switch (s) {
    case Scope::Absolute: return "abs";
    case Scope::Relative: return "rel";
    case Scope::FRelative: return "frel";
  }
  return "?";
}
inline const char* name(Strength s) {
  switch (s) {
    case Strength::Stable: return "stable";
    case Strength::RaceFree: return "racefree";
    case Strength::Constant: return "constant";
  }
  return "?";
}

struct StabilityFlavor {
  Scope scope = Scope::Absolute;
  Strength strength = Strength::Stable;
  std::optional<BoolFn> F;  // required for FRelative

  std::string str() const { return std::string(name(scope)) + ":" + name(strength); }

  /// Parses `<abs|rel|frel>:<stable|racefree|constant>`.
  static std::optional<StabilityFlavor> parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    StabilityFlavor fl;
    auto sc = text.substr(0, colon);
    auto st = text.substr(colon + 1);
    if (sc == "abs") fl.scope = Scope::Absolute;
    else if (sc == "rel") fl.scope = Scope::Relative;
    else if (sc == "frel") fl.scope = Scope::FRelative;
    else return std::nullopt;
    if (st == "stable") fl.strength = Strength::Stable;
    else if (st == "racefree") fl.strength = Strength::RaceFree;
    else if (st == "constant") fl.strength = Strength::Constant;
    else return std::nullopt;
    return fl;
  }
};

/// (w, t_f) for one state: x(t) = w for t >= t_f.
struct StateWitness {
  std::size_t input;
  std::size_t state;
  Bits w;
  TimeWitness tf;
};

/// (w, t_f) shared by all states of one input.
struct InputWitness {
  std::size_t input;
  Bits w;
  TimeWitness tf;
};

struct Counterexample {
  Signal u;
  std::optional<Signal> x;
  std::string reason;
};

struct StabilityReport {
  StabilityFlavor flavor;
  bool verdict = false;
  bool trivial = false;
  std::vector<std::size_t> scoped;  // indices of inputs quantified over
  std::vector<StateWitness> per_state;
  std::vector<InputWitness> per_input;
  std::optional<Bits> global_w;
  std::optional<Counterexample> counterexample;
};

/// Witness for the left-limit form x(t - 0) = w, t >= t_f: any instant after the
/// least right-limit witness. One time unit later is the canonical choice.
inline TimeWitness strict_witness(const TimeWitness& tf) {
  return tf.any ? tf : TimeWitness{tf.at + Time{1}, false};
}

namespace detail {
inline std::vector<std::size_t> scoped_inputs(const SystemTable& f, Scope scope, const BoolFn* F) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Signal& u = f.entries()[i].input;
    bool in = scope == Scope::Absolute || (scope == Scope::Relative && u.final_value()) ||
              (scope == Scope::FRelative && apply_fn(*F, u).final_value());
    if (in) out.push_back(i);
  }
  return out;
}

inline TimeWitness later(const TimeWitness& a, const TimeWitness& b) {
  if (a.any) return b;
  if (b.any) return a;
  return a.at < b.at ? b : a;
}
}  // namespace detail

/// Decides one of the nine stability notions and records its witnesses.
///
/// Race-free stability relative to F requires every state of a scoped u to settle
/// at the limit of F(u(t)). Constant stability relative to F is the absolute
/// constant formula and is not restricted by the scope.
inline StabilityReport check(const SystemTable& f, const StabilityFlavor& flavor) {
  StabilityReport r;
  r.flavor = flavor;
  const BoolFn* F = flavor.F ? &*flavor.F : nullptr;
  if (flavor.scope == Scope::FRelative) {
    if (!F) throw Error("F-relative stability needs a function F");
    if (F->in_width() != f.in_width()) throw Error("F input width must equal the system input width m");
    if (flavor.strength == Strength::RaceFree && F->out_width() != f.out_width())
      throw Error("F output width must equal the system state width n");
  }
  r.scoped = detail::scoped_inputs(f, flavor.scope, F);
  r.trivial = flavor.scope != Scope::Absolute && r.scoped.empty();

  std::vector<std::size_t> quantified = r.scoped;
  if (flavor.scope == Scope::FRelative && flavor.strength == Strength::Constant) {
    quantified.clear();
    for (std::size_t i = 0; i < f.size(); ++i) quantified.push_back(i);
  }

  auto fail = [&](const Entry& e, std::optional<Signal> x, std::string why) {
    r.verdict = false;
    r.counterexample = Counterexample{e.input, std::move(x), std::move(why)};
    return r;
  };

  for (std::size_t i : quantified) {
    const Entry& e = f.entries()[i];
    std::optional<Bits> target;
    if (flavor.strength == Strength::RaceFree && flavor.scope == Scope::FRelative)
      target = apply_fn(*F, e.input).final_value();
    std::optional<Bits> shared;
    TimeWitness shared_tf{Time{0}, true};
    for (std::size_t k = 0; k < e.states.size(); ++k) {
      const Signal& x = e.states[k];
      auto w = x.final_value();
      if (!w) return fail(e, x, "state does not converge");
      auto tf = *x.final_time();
      r.per_state.push_back({i, k, *w, tf});
      if (flavor.strength == Strength::Stable) continue;
      if (target && *w != *target)
        return fail(e, x, "limit " + w->str() + " differs from the limit " + target->str() + " of F(u)");
      if (shared && *shared != *w)
        return fail(e, x, "distinct limits " + shared->str() + " and " + w->str() + " under one input");
      shared = *w;
      shared_tf = detail::later(shared_tf, tf);
    }
    if (flavor.strength == Strength::Stable) continue;
    if (target) shared_tf = detail::later(shared_tf, *apply_fn(*F, e.input).final_time());
    r.per_input.push_back({i, *shared, shared_tf});
    if (flavor.strength == Strength::Constant) {
      if (r.global_w && *r.global_w != *shared)
        return fail(e, std::nullopt,
                    "limit " + shared->str() + " differs from the limit " + r.global_w->str() + " of another input");
      r.global_w = *shared;
    }
  }
  r.verdict = true;
  return r;
}

inline StabilityReport check(const SystemTable& f, Scope scope, Strength strength,
                             std::optional<BoolFn> F = std::nullopt) {
  return check(f, StabilityFlavor{scope, strength, std::move(F)});
}

/// Raised when an operation's stability precondition fails.
class StabilityError : public Error {
 public:
  explicit StabilityError(const StabilityReport& r)
      : Error(r.flavor.str() + " precondition failed" +
              (r.counterexample ? ": " + r.counterexample->reason + " at u = " + to_literal(r.counterexample->u) : "")),
        report_(r) {}
  const StabilityReport& report() const { return report_; }

 private:
  StabilityReport report_;
};

/// lim f(u) = Sigma_f(u), binary vectors identified with constant signals.
inline SystemTable lim_system(const SystemTable& f) {
  auto rep = check(f, Scope::Absolute, Strength::Stable);
  if (!rep.verdict) throw StabilityError(rep);
  std::vector<std::pair<Signal, std::vector<Signal>>> rows;
  for (const auto& e : f.entries()) {
    std::vector<Signal> xs;
    for (const auto& w : sigma(f, e.input)) xs.push_back(Signal::constant(w));
    rows.emplace_back(e.input, std::move(xs));
  }
  return SystemTable::make(f.in_width(), f.out_width(), std::move(rows));
}

/// Both sides of one of the nine combined statements: the absolute stability
/// formula of the given strength together with the final-time formula of the
/// given flavor, against the merged single-quantifier form.
struct CombinedResult {
  bool lhs;
  bool rhs;
};

inline CombinedResult check_combined(const FormulaEvaluator& ev, Strength strength, TimeFlavorKind ft) {
  auto all = ev.all_indices();
  bool stab = strength == Strength::Stable ? ev.stable(all) : strength == Strength::RaceFree ? ev.race_free(all) : ev.constant(all);
  return {stab && ev.final_time(ft), ev.merged(static_cast<int>(strength), ft)};
}

inline CombinedResult check_combined(const SystemTable& f, Strength strength, TimeFlavorKind ft) {
  return check_combined(FormulaEvaluator(f), strength, ft);
}

// ---------------------------------------------------------------------------
// Closure theorems

struct ClosureFinding {
  std::string construction;  // subsystem, dual, intersection, union, parallel, serial
  Strength strength;
  bool hypothesis;
  bool conclusion;
  std::string instance;  // the operands, as system text

  bool violation() const { return hypothesis && !conclusion; }
};

struct ClosureReport {
  std::vector<ClosureFinding> findings;
  /// serial + race-free is not claimed; these are instances where h and f are
  /// race-free but h o f is not.
  std::vector<ClosureFinding> serial_race_counterexamples;

  std::size_t violations() const {
    std::size_t n = 0;
    for (const auto& f : findings) n += f.violation();
    return n;
  }
};

/// Operands for the closure suite. Constructions whose operands are missing or
/// whose side conditions fail are skipped.
struct ClosureOperands {
  SystemTable f;
  std::optional<SystemTable> g;   // same widths as f: subsystem candidate, intersection and union partner
  std::optional<SystemTable> f2;  // same input width: parallel partner
  std::optional<SystemTable> h;   // h.in_width == f.out_width: serial partner
};

inline ClosureReport closure_suite(const ClosureOperands& ops) {
  ClosureReport rep;
  const Strength strengths[] = {Strength::Stable, Strength::RaceFree, Strength::Constant};
  auto holds = [](const SystemTable& s, Strength st) { return check(s, Scope::Absolute, st).verdict; };
  auto describe = [](std::initializer_list<std::pair<const char*, const SystemTable*>> parts) {
    std::string s;
    for (const auto& [label, t] : parts) s += std::string("# ") + label + "\n" + to_system_text(*t);
    return s;
  };
  auto record = [&](const std::string& what, Strength st, bool hyp, const SystemTable& result,
                    const std::string& instance) {
    if (!hyp) {
      rep.findings.push_back({what, st, false, true, {}});
      return;
    }
    bool concl = holds(result, st);
    rep.findings.push_back({what, st, true, concl, concl ? std::string() : instance});
  };

  const SystemTable& f = ops.f;
  for (Strength st : strengths) {
    const bool hf = holds(f, st);
    if (ops.g && is_subsystem(*ops.g, f))
      record("subsystem", st, hf, *ops.g, describe({{"f", &f}, {"g", &*ops.g}}));
    {
      SystemTable d = dual(f);
      record("dual", st, hf, d, describe({{"f", &f}}));
    }
    if (ops.g) {
      try {
        SystemTable fg = intersect(f, *ops.g);
        record("intersection", st, hf, fg, describe({{"f", &f}, {"g", &*ops.g}}));
      } catch (const Error&) {
      }
      SystemTable u = unite(f, *ops.g);
      record("union", st, hf && holds(*ops.g, st), u, describe({{"f", &f}, {"g", &*ops.g}}));
    }
    if (ops.f2) {
      try {
        SystemTable p = parallel(f, *ops.f2);
        record("parallel", st, hf && holds(*ops.f2, st), p, describe({{"f", &f}, {"f2", &*ops.f2}}));
      } catch (const Error&) {
      }
    }
    if (ops.h) {
      try {
        SystemTable hs = serial(*ops.h, f);
        const bool hh = holds(*ops.h, st);
        if (st == Strength::RaceFree) {
          if (hf && hh && !holds(hs, st))
            rep.serial_race_counterexamples.push_back(
                {"serial", st, true, false, describe({{"h", &*ops.h}, {"f", &f}})});
        } else {
          record("serial", st, hh, hs, describe({{"h", &*ops.h}, {"f", &f}}));
        }
      } catch (const Error&) {
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Dependence of the limits on the input up to the final time

struct DependenceReport {
  Time tf;
  std::size_t pairs_checked = 0;
  std::vector<std::string> violations;
};

/// For a non-anticipatory system with fix final time t_f: Sigma_f(u) only
/// depends on u restricted to (-inf, t_f] (when stable), the common limit does
/// too (when race-free), and the limit is global (when constantly stable).
inline DependenceReport final_value_dependence(const SystemTable& f) {
  if (auto c = check_non_anticipatory(f); !c.holds)
    throw Error("final_value_dependence: system is anticipatory at t1 = " + c.counterexample->t1.str());
  auto ft = classify_final_time(f);
  if (ft.kind != TimeFlavorKind::Fix) throw Error("final_value_dependence: no fix final time");
  DependenceReport rep;
  rep.tf = ft.fix.at;
  const bool stable = check(f, Scope::Absolute, Strength::Stable).verdict;
  const bool race_free = check(f, Scope::Absolute, Strength::RaceFree).verdict;
  const auto constant = check(f, Scope::Absolute, Strength::Constant);
  const auto& es = f.entries();
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      const Signal& u = es[i].input;
      const Signal& v = es[j].input;
      if (!(restrict_eq(u, v, rep.tf) && u.eval(rep.tf) == v.eval(rep.tf))) continue;
      ++rep.pairs_checked;
      auto su = sigma(f, u);
      auto sv = sigma(f, v);
      if (stable && su != sv)
        rep.violations.push_back("Sigma differs for inputs agreeing through t_f: " + to_literal(u) + " / " +
                                 to_literal(v));
      if (race_free && (su.size() != 1 || su != sv))
        rep.violations.push_back("race-free limit differs: " + to_literal(u) + " / " + to_literal(v));
    }
  }
  if (constant.verdict) {
    for (const auto& e : es)
      if (sigma(f, e.input) != std::set<Bits>{*constant.global_w})
        rep.violations.push_back("constant limit not global at " + to_literal(e.input));
  }
  return rep;
}

}  // namespace asyncsys
