#include <catch2/catch_amalgamated.hpp>

#include "asyncsys/stability.hpp"
#include "test_support.hpp"

using namespace asyncsys;
using namespace asyncsys::testing;

namespace {

SystemTable T(int m, int n, std::vector<std::pair<const char*, std::vector<const char*>>> rows) {
  std::vector<std::pair<Signal, std::vector<Signal>>> out;
  for (auto& [u, xs] : rows) {
    std::vector<Signal> states;
    for (auto* x : xs) states.push_back(sig(x));
    out.emplace_back(sig(u), std::move(states));
  }
  return SystemTable::make(m, n, std::move(out));
}

const char* kOsc = "sig 1 init=0 period=2 @0=1 @1=0";
const Strength kStrengths[] = {Strength::Stable, Strength::RaceFree, Strength::Constant};
const TimeFlavorKind kTimes[] = {TimeFlavorKind::Unbounded, TimeFlavorKind::Bounded, TimeFlavorKind::Fix};

bool replay(const FormulaEvaluator& ev, Scope scope, Strength st, const BoolFn* F) {
  if (scope == Scope::FRelative && st == Strength::Constant) return ev.constant(ev.all_indices());
  auto S = ev.scope(static_cast<int>(scope), F);
  switch (st) {
    case Strength::Stable: return ev.stable(S);
    case Strength::RaceFree: return scope == Scope::FRelative ? ev.f_race_free(S, *F) : ev.race_free(S);
    case Strength::Constant: return ev.constant(S);
  }
  return false;
}

// Witnesses must satisfy the formula they claim, in both the x(t) and x(t-0) forms.
void replay_witnesses(const SystemTable& f, const StabilityReport& r) {
  for (const auto& w : r.per_state) {
    const Signal& x = f.entries()[w.input].states[w.state];
    const Time tf = w.tf.any ? Time{0} : w.tf.at;
    CHECK(steady_from(x, tf) == w.w);
    CHECK(steady_from(x, strict_witness(w.tf).any ? Time{0} : strict_witness(w.tf).at, true) == w.w);
  }
  for (const auto& w : r.per_input)
    for (const auto& x : f.entries()[w.input].states) CHECK(steady_from(x, w.tf.any ? Time{0} : w.tf.at) == w.w);
  if (r.global_w)
    for (const auto& w : r.per_input) CHECK(w.w == *r.global_w);
}

}  // namespace

TEST_CASE("flavor names parse") {
  auto fl = StabilityFlavor::parse("frel:constant");
  REQUIRE(fl);
  CHECK(fl->scope == Scope::FRelative);
  CHECK(fl->strength == Strength::Constant);
  CHECK(fl->str() == "frel:constant");
  CHECK_FALSE(StabilityFlavor::parse("abs"));
  CHECK_FALSE(StabilityFlavor::parse("abs:fast"));
  CHECK_FALSE(StabilityFlavor::parse("total:stable"));
}

TEST_CASE("constant states are constantly stable in every scope") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}, {kOsc, {"sig 1 init=1"}}});
  for (auto scope : {Scope::Absolute, Scope::Relative, Scope::FRelative}) {
    std::optional<BoolFn> F;
    if (scope == Scope::FRelative) F = BoolFn::constant(1, *Bits::parse("1"));
    auto r = check(f, scope, Strength::Constant, F);
    CHECK(r.verdict);
    CHECK(r.global_w == Bits::parse("1"));
  }
}

TEST_CASE("two limits under one input") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0", "sig 1 init=1"}}});
  CHECK(check(f, Scope::Absolute, Strength::Stable).verdict);
  auto r = check(f, Scope::Absolute, Strength::RaceFree);
  CHECK_FALSE(r.verdict);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->u == sig("sig 1 init=0"));
}

TEST_CASE("relative scope drops oscillating inputs") {
  auto f = T(1, 1, {{"sig 1 init=0", {kOsc}}});
  CHECK_FALSE(check(f, Scope::Absolute, Strength::Stable).verdict);
  CHECK_FALSE(check(f, Scope::Relative, Strength::Stable).verdict);
  auto g = T(1, 1, {{kOsc, {kOsc}}});
  CHECK_FALSE(check(g, Scope::Absolute, Strength::Stable).verdict);
  auto r = check(g, Scope::Relative, Strength::Stable);
  CHECK(r.verdict);
  CHECK(r.trivial);
  CHECK_FALSE(check(g, Scope::Absolute, Strength::Stable).trivial);
}

TEST_CASE("F-relative race-free tracks the limit of F(u)") {
  // XOR of two identical oscillating coordinates is constantly 0.
  auto u = "sig 2 init=00 period=2 @0=11 @1=00";
  auto xor_fn = BoolFn::from(2, 1, [](const Bits& b) { return Bits(1, b[0] != b[1]); });
  auto f0 = T(2, 1, {{u, {"sig 1 init=1 @2=0"}}});
  auto f1 = T(2, 1, {{u, {"sig 1 init=0 @2=1"}}});
  CHECK(check(f0, Scope::Relative, Strength::Stable).trivial);
  auto r0 = check(f0, Scope::FRelative, Strength::RaceFree, xor_fn);
  CHECK(r0.verdict);
  CHECK_FALSE(r0.trivial);
  CHECK_FALSE(check(f1, Scope::FRelative, Strength::RaceFree, xor_fn).verdict);
  CHECK_THROWS_AS(check(f0, Scope::FRelative, Strength::RaceFree), Error);
  CHECK_THROWS_AS(check(f0, Scope::FRelative, Strength::RaceFree, BoolFn::identity(1)), Error);
}

TEST_CASE("constant F: F-relative race-free coincides with absolute constant") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    auto f = random_table(rng, 1, 1, 3, 2, true);
    for (const auto& w : Bits::all(1)) {
      auto frel = check(f, Scope::FRelative, Strength::RaceFree, BoolFn::constant(1, w));
      auto abs = check(f, Scope::Absolute, Strength::Constant);
      CHECK(frel.verdict == (abs.verdict && abs.global_w == w));
    }
  }
}

TEST_CASE("checker verdicts equal literal formula replay") {
  std::mt19937_64 rng(1);
  int true_count = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int m = 1 + trial % 2;
    auto f = random_table(rng, m, 1, 3, 2, true);
    FormulaEvaluator ev(f);
    const BoolFn first = BoolFn::from(m, 1, [](const Bits& b) { return b.select({0}); });
    const BoolFn Fs[] = {first, BoolFn::constant(m, *Bits::parse("0"))};
    for (auto scope : {Scope::Absolute, Scope::Relative, Scope::FRelative}) {
      for (auto st : kStrengths) {
        for (const auto& F : Fs) {
          auto r = check(f, StabilityFlavor{scope, st, F});
          INFO(to_system_text(f) << r.flavor.str());
          CHECK(r.verdict == replay(ev, scope, st, &F));
          true_count += r.verdict;
          if (r.verdict) replay_witnesses(f, r);
          if (!r.verdict) CHECK(r.counterexample);
          if (scope == Scope::Absolute) break;
        }
      }
    }
  }
  CHECK(true_count > 100);
}

TEST_CASE("strength and scope chains") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    auto f = random_table(rng, 1, 1, 3, 2, true);
    auto v = [&](Scope sc, Strength st) { return check(f, sc, st, BoolFn::identity(1)).verdict; };
    for (auto sc : {Scope::Absolute, Scope::Relative}) {
      if (v(sc, Strength::Constant)) CHECK(v(sc, Strength::RaceFree));
      if (v(sc, Strength::RaceFree)) CHECK(v(sc, Strength::Stable));
    }
    for (auto st : kStrengths) {
      if (v(Scope::Absolute, st)) CHECK(v(Scope::Relative, st));
    }
    if (v(Scope::Absolute, Strength::Stable)) CHECK(v(Scope::FRelative, Strength::Stable));
    if (v(Scope::FRelative, Strength::Stable)) CHECK(v(Scope::Relative, Strength::Stable));
    CHECK(v(Scope::FRelative, Strength::Constant) == v(Scope::Absolute, Strength::Constant));
  }
}

TEST_CASE("absolute race-free does not imply F-relative race-free") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}});
  CHECK(check(f, Scope::Absolute, Strength::RaceFree).verdict);
  CHECK_FALSE(check(f, Scope::FRelative, Strength::RaceFree, BoolFn::identity(1)).verdict);
}

TEST_CASE("lim f") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1 @1=0", "sig 1 init=0 @2=1"}}, {"sig 1 init=1", {"sig 1 init=0 @1=1"}}});
  auto l = lim_system(f);
  CHECK(l.at(sig("sig 1 init=0")) == std::vector<Signal>{sig("sig 1 init=0"), sig("sig 1 init=1")});
  CHECK(l.at(sig("sig 1 init=1")) == std::vector<Signal>{sig("sig 1 init=1")});

  auto c = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0 @1=1"}}, {"sig 1 init=1", {"sig 1 init=1"}}});
  const auto lc = lim_system(c);
  for (const auto& e : lc.entries()) CHECK(e.states == std::vector<Signal>{sig("sig 1 init=1")});

  auto bad = T(1, 1, {{"sig 1 init=0", {kOsc}}});
  CHECK_THROWS_AS(lim_system(bad), StabilityError);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = random_table(rng, 1, 2, 3, 3, trial % 3 != 0);
    if (!check(g, Scope::Absolute, Strength::RaceFree).verdict) continue;
    const auto lg = lim_system(g);
    for (const auto& e : lg.entries()) CHECK(e.states.size() == 1);
  }
}

TEST_CASE("combined statements: both sides agree") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 400; ++trial) {
    auto f = random_table(rng, 1 + trial % 2, 1 + trial % 2, 3, 3, true);
    FormulaEvaluator ev(f);
    for (auto st : kStrengths)
      for (auto ft : kTimes) {
        auto r = check_combined(ev, st, ft);
        CHECK(r.lhs == r.rhs);
      }
  }
  auto c = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0 @3=1", "sig 1 init=1"}}, {"sig 1 init=1", {"sig 1 init=1 @1=0 @2=1"}}});
  CHECK(check_combined(c, Strength::Constant, TimeFlavorKind::Fix).rhs);
  CHECK(classify_final_time(c).fix.at == Time(3));
  auto u = T(1, 1, {{"sig 1 init=0", {kOsc}}});
  for (auto st : kStrengths)
    for (auto ft : kTimes) {
      auto r = check_combined(u, st, ft);
      CHECK_FALSE(r.lhs);
      CHECK_FALSE(r.rhs);
    }
}

TEST_CASE("closure suite on hand-built operands") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0 @1=1"}}, {"sig 1 init=1", {"sig 1 init=1"}}});
  auto g = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0 @1=1"}}});
  auto f2 = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0"}}, {"sig 1 init=1", {"sig 1 init=0 @2=1 @3=0"}}});
  auto rep = closure_suite({f, g, f2, std::nullopt});
  CHECK(rep.violations() == 0);
  auto p = parallel(f, f2);
  auto pc = check(p, Scope::Absolute, Strength::Constant);
  CHECK(pc.verdict);
  CHECK(pc.global_w == Bits::parse("10"));
}

TEST_CASE("union of constantly stable systems can race") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0"}}});
  auto g = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}});
  auto rep = closure_suite({f, g, std::nullopt, std::nullopt});
  std::set<std::string> failing;
  for (const auto& x : rep.findings)
    if (x.violation()) failing.insert(x.construction + ":" + name(x.strength));
  CHECK(failing == std::set<std::string>{"union:racefree", "union:constant"});
}

TEST_CASE("serial race-free instances are recorded, not asserted") {
  // f races between 0 and 1 only through the convergent states it feeds h.
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0 @1=1"}}});
  auto h = T(1, 1, {{"sig 1 init=0 @1=1", {"sig 1 init=0 @2=1", "sig 1 init=0 @3=1"}}});
  auto rep = closure_suite({f, std::nullopt, std::nullopt, h});
  CHECK(rep.violations() == 0);
  CHECK(rep.serial_race_counterexamples.empty());
}

TEST_CASE("final value dependence") {
  // Causal, race-free, inputs agree through t_f = 2 and differ afterwards.
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0 @2=1"}}, {"sig 1 init=0 @3=1", {"sig 1 init=0 @2=1"}}});
  auto rep = final_value_dependence(f);
  CHECK(rep.tf == Time(2));
  CHECK(rep.pairs_checked == 1);
  CHECK(rep.violations.empty());

  auto anticipatory = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0"}}, {"sig 1 init=0 @5=1", {"sig 1 init=0 @2=1"}}});
  CHECK_THROWS_AS(final_value_dependence(anticipatory), Error);

  std::mt19937_64 rng(9);
  int applicable = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto g = random_table(rng, 1, 1, 3, 2, true);
    if (!is_non_anticipatory(g)) continue;
    ++applicable;
    CHECK(final_value_dependence(g).violations.empty());
  }
  CHECK(applicable > 0);
}
