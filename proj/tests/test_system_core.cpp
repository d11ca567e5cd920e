#include <catch2/catch_amalgamated.hpp>

#include "asyncsys/formula.hpp"
#include "asyncsys/system.hpp"
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

// Non-anticipation straight from the definition: every pair, every critical t1.
bool causal_by_definition(const SystemTable& f) {
  std::vector<const Signal*> all;
  for (const auto& e : f.entries()) {
    all.push_back(&e.input);
    for (const auto& x : e.states) all.push_back(&x);
  }
  const auto times = critical_times(all);
  for (const auto& a : f.entries())
    for (const auto& b : f.entries())
      for (const auto& t1 : times)
        if (restrict_eq(a.input, b.input, t1) && !restricted_sets_equal(a.states, b.states, t1)) return false;
  return true;
}

}  // namespace

TEST_CASE("table construction validates its rows") {
  CHECK_THROWS_AS(SystemTable::make(1, 1, {}), Error);
  CHECK_THROWS_AS(T(1, 1, {{"sig 1 init=0", {}}}), Error);
  CHECK_THROWS_AS(T(1, 1, {{"sig 2 init=00", {"sig 1 init=0"}}}), Error);
  CHECK_THROWS_AS(T(1, 1, {{"sig 1 init=0", {"sig 1 init=0"}}, {"sig 1 init=0 @1=0", {"sig 1 init=1"}}}), Error);
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1", "sig 1 init=1 @0=1"}}});
  CHECK(f.size() == 1);
  CHECK(f.entries()[0].states.size() == 1);
}

TEST_CASE("subsystem") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0", "sig 1 init=1"}}, {"sig 1 init=1", {"sig 1 init=1"}}});
  CHECK(is_subsystem(f, f));
  CHECK(is_subsystem(T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}}), f));
  CHECK_FALSE(is_subsystem(T(1, 1, {{"sig 1 init=0 @1=1", {"sig 1 init=1"}}}), f));
  CHECK_FALSE(is_subsystem(f, T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}})));
}

TEST_CASE("dual") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}});
  CHECK(dual(f) == T(1, 1, {{"sig 1 init=1", {"sig 1 init=0"}}}));
}

TEST_CASE("intersection and union") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0", "sig 1 init=1"}}});
  auto g = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}, {"sig 1 init=1", {"sig 1 init=0"}}});
  auto h = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0 @1=1"}}});
  CHECK(intersect(f, f) == f);
  CHECK(intersect(f, g) == T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}}));
  CHECK_THROWS_WITH(intersect(f, T(1, 1, {{"sig 1 init=1", {"sig 1 init=0"}}})), Catch::Matchers::ContainsSubstring("empty domain"));
  CHECK_THROWS_WITH(intersect(f, h), Catch::Matchers::ContainsSubstring("empty value set at u"));
  CHECK(unite(f, f) == f);
  auto fg = unite(f, g);
  CHECK(fg.size() == 2);
  CHECK(fg.at(sig("sig 1 init=0")).size() == 2);
  CHECK(unite(h, T(1, 1, {{"sig 1 init=1", {"sig 1 init=0"}}})).size() == 2);
}

TEST_CASE("parallel connection") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0", "sig 1 init=1 @1=0"}}, {"sig 1 init=1", {"sig 1 init=1"}}});
  auto f2 = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}});
  auto p = parallel(f, f2);
  CHECK(p.out_width() == 2);
  REQUIRE(p.size() == 1);
  CHECK(p.at(sig("sig 1 init=0")) == std::vector<Signal>{sig("sig 2 init=01"), sig("sig 2 init=11 @1=01")});
  std::vector<Signal> projected;
  for (const auto& z : p.entries()[0].states) projected.push_back(coord_select(z, {0}));
  std::sort(projected.begin(), projected.end());
  CHECK(projected == f.at(sig("sig 1 init=0")));
  CHECK_THROWS(parallel(f, T(1, 1, {{"sig 1 init=0 @5=1", {"sig 1 init=1"}}})));
}

TEST_CASE("serial connection") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0", "sig 1 init=1"}}});
  auto id = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0"}}, {"sig 1 init=1", {"sig 1 init=1"}}});
  CHECK(serial(id, f) == f);
  auto h = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1 @2=0"}}});
  CHECK(serial(h, f) == T(1, 1, {{"sig 1 init=0", {"sig 1 init=1 @2=0"}}}));
  CHECK_THROWS_WITH(serial(T(1, 1, {{kOsc, {"sig 1 init=0"}}}), f), Catch::Matchers::ContainsSubstring("u = "));
}

TEST_CASE("non-anticipation") {
  CHECK(is_non_anticipatory(T(1, 1, {{"sig 1 init=0", {"sig 1 init=0 @1=1"}}})));
  // Inputs agree on (-inf, 5); the states already differ at 2.
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0"}}, {"sig 1 init=0 @5=1", {"sig 1 init=0 @2=1"}}});
  auto rep = check_non_anticipatory(f);
  REQUIRE_FALSE(rep.holds);
  CHECK(rep.counterexample->t1 == Time(5));
  // A state that reacts at 5 itself is causal.
  CHECK(is_non_anticipatory(T(1, 1, {{"sig 1 init=0", {"sig 1 init=0"}}, {"sig 1 init=0 @5=1", {"sig 1 init=0 @5=1"}}})));
  CHECK_FALSE(is_non_anticipatory(T(1, 1, {{"sig 1 init=0", {"sig 1 init=0"}}, {"sig 1 init=0 @5=1", {"sig 1 init=0 @6=1", "sig 1 init=0 @4=1"}}})));
}

TEST_CASE("non-anticipation agrees with the definition over critical times") {
  std::mt19937_64 rng(11);
  int causal = 0;
  for (int trial = 0; trial < 600; ++trial) {
    // Shared-initial, sparse inputs make the premise hold often enough.
    auto f = random_table(rng, 1, 1, 3, 2, trial % 2 == 0);
    const bool fast = is_non_anticipatory(f);
    CHECK(fast == causal_by_definition(f));
    causal += fast;
  }
  CHECK(causal > 0);
}

TEST_CASE("initial state") {
  CHECK(initial_state(T(2, 2, {{"sig 2 init=00", {"sig 2 init=00 @1=01"}}, {"sig 2 init=11", {"sig 2 init=00"}}})) ==
        Bits::parse("00"));
  CHECK_FALSE(initial_state(T(1, 1, {{"sig 1 init=0", {"sig 1 init=0", "sig 1 init=1"}}})));
}

TEST_CASE("time classification") {
  auto f = T(1, 1, {{"sig 1 init=0", {"sig 1 init=0 @1=1", "sig 1 init=0 @3=1 @4=0"}},
                    {"sig 1 init=1", {"sig 1 init=1 @2=0", kOsc}}});
  auto ini = classify_initial_time(f);
  CHECK(ini.kind == TimeFlavorKind::Fix);
  CHECK(ini.fix.at == Time(0));  // the oscillator first moves at 0
  CHECK(ini.per_input[0].at == Time(1));
  auto fin = classify_final_time(f);
  CHECK(fin.kind == TimeFlavorKind::Fix);
  CHECK(fin.fix.at == Time(4));
  CHECK(fin.per_input[1].at == Time(2));
  CHECK_FALSE(fin.per_state[1][0].has_value());  // states are sorted: the oscillator comes first

  auto consts = T(1, 1, {{"sig 1 init=0", {"sig 1 init=1"}}});
  CHECK(classify_final_time(consts).fix.any);
  CHECK(classify_initial_time(consts).fix.any);
}

TEST_CASE("time witnesses replay and the flavor chain holds") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto f = random_table(rng, 1 + trial % 2, 1 + trial % 2, 3, 3, true);
    auto ini = classify_initial_time(f);
    auto fin = classify_final_time(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t k = 0; k < f.entries()[i].states.size(); ++k) {
        const Signal& x = f.entries()[i].states[k];
        for (const auto* w : {&ini.per_state[i][k].value(), &ini.per_input[i], &ini.fix})
          if (!w->any) CHECK(quiet_before(x, w->at));
        if (!x.final_value()) continue;
        for (const auto* w : {&fin.per_state[i][k].value(), &fin.per_input[i], &fin.fix})
          if (!w->any) CHECK(steady_from(x, w->at) == x.final_value());
      }
    }
    FormulaEvaluator ev(f);
    for (auto k : {TimeFlavorKind::Fix, TimeFlavorKind::Bounded, TimeFlavorKind::Unbounded}) {
      CHECK(ev.initial_time(k));
      CHECK(ev.final_time(k));
    }
  }
}

TEST_CASE("sigma and equilibrium points") {
  auto f = T(2, 1, {{"sig 2 init=00", {"sig 1 init=1", "sig 1 init=1 @1=0", kOsc}},
                    {"sig 2 init=11", {kOsc}}});
  CHECK(sigma(f, sig("sig 2 init=00")) == std::set<Bits>{*Bits::parse("0"), *Bits::parse("1")});
  CHECK(sigma(f, sig("sig 2 init=11")).empty());
  CHECK_THROWS(sigma(f, sig("sig 2 init=01")));
  CHECK(equilibrium_points(f) == std::set<Bits>{*Bits::parse("1")});
  CHECK(equilibrium_points(T(1, 1, {{"sig 1 init=0", {kOsc}}})).empty());
  CHECK(equilibrium_points(T(1, 2, {{"sig 1 init=0", {"sig 2 init=01"}}, {"sig 1 init=1", {"sig 2 init=10"}}})) ==
        std::set<Bits>{*Bits::parse("01"), *Bits::parse("10")});
}

TEST_CASE("algebraic laws on random tables") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto f = random_table(rng, 1, 1, 3, 3, true);
    auto g = random_table(rng, 1, 1, 3, 3, true);
    auto h = random_table(rng, 1, 1, 3, 3, true);
    CHECK(dual(dual(f)) == f);
    CHECK(dual(f).size() == f.size());
    CHECK(is_subsystem(f, f));
    CHECK(unite(f, g) == unite(g, f));
    CHECK(unite(unite(f, g), h) == unite(f, unite(g, h)));
    CHECK(is_subsystem(f, unite(f, g)));
    if (is_subsystem(f, g) && is_subsystem(g, f)) CHECK(f == g);
    if (is_subsystem(f, g) && is_subsystem(g, h)) CHECK(is_subsystem(f, h));
    try {
      auto fg = intersect(f, g);
      CHECK(fg == intersect(g, f));
      CHECK(is_subsystem(fg, f));
      for (const auto& e : fg.entries()) {
        auto s = sigma(fg, e.input);
        auto sf = sigma(f, e.input);
        auto sg = sigma(g, e.input);
        for (const auto& w : s) CHECK((sf.count(w) && sg.count(w)));
      }
    } catch (const Error&) {
    }
  }
}
