#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "asyncsys/literal.hpp"
#include "asyncsys/system.hpp"

namespace asyncsys {

enum class UpdateRule { AnySubset, SingleCoordinate };

/// Where and how often state coordinates may switch.
///
/// A coordinate that stays excited for `max_delay` consecutive grid instants
/// must switch at the last of them. After `max_steps` switching instants the
/// state is frozen.
struct DelayPolicy {
  std::vector<Time> grid;
  int max_steps = 4;
  UpdateRule rule = UpdateRule::AnySubset;
  int max_delay = 2;
};

/// Phi: B^(n+m) -> B^n applied to (x, u), x first.
struct GeneratorSpec {
  int n = 1;
  int m = 1;
  BoolFn phi = BoolFn::identity(2);
  Bits init{1};
  std::vector<Signal> inputs;
  DelayPolicy policy;
};

namespace detail {
inline void validate(const GeneratorSpec& g) {
  if (g.phi.in_width() != g.n + g.m || g.phi.out_width() != g.n)
    throw Error("phi must map B^" + std::to_string(g.n + g.m) + " to B^" + std::to_string(g.n));
  if (g.init.width() != g.n) throw Error("init width must be n=" + std::to_string(g.n));
  const auto& grid = g.policy.grid;
  if (grid.empty()) throw Error("delay grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i])) throw Error("delay grid must be strictly increasing");
  if (g.policy.max_steps < 1) throw Error("steps must be positive");
  if (g.policy.max_delay < 1) throw Error("delay must be positive");
}

inline void require_grid_covers(const DelayPolicy& p, const Signal& u) {
  for (const auto& e : u.unroll(p.grid.back(), true))
    if (!std::binary_search(p.grid.begin(), p.grid.end(), e.at))
      throw Error("grid misses input event time " + e.at.str() + " of " + to_literal(u));
}
}  // namespace detail

/// All state signals one input can produce. Coordinates switch only at grid
/// instants t, towards Phi(x(t-0), u(t-0)).
inline std::vector<Signal> generate_states(const GeneratorSpec& g, const Signal& u) {
  detail::validate(g);
  if (u.width() != g.m) throw Error("input width must be m=" + std::to_string(g.m));
  detail::require_grid_covers(g.policy, u);
  const auto& grid = g.policy.grid;
  const int n = g.n;
  std::vector<Bits> seen_u;
  for (const auto& t : grid) seen_u.push_back(u.left_limit(t));

  std::set<Signal> out;
  std::vector<Event> events;
  std::vector<int> wait(static_cast<std::size_t>(n), 0);

  auto dfs = [&](auto&& self, std::size_t k, const Bits& x, int steps) -> void {
    if (k == grid.size() || steps >= g.policy.max_steps) {
      out.insert(Signal::make(g.init, events));
      return;
    }
    const std::uint64_t excited = (x.mask() ^ g.phi(x.concat(seen_u[k])).mask());
    std::uint64_t due = 0;
    for (int i = 0; i < n; ++i)
      if ((excited >> i) & 1u && wait[static_cast<std::size_t>(i)] + 1 >= g.policy.max_delay) due |= std::uint64_t{1} << i;

    std::vector<std::uint64_t> choices;
    if (g.policy.rule == UpdateRule::AnySubset) {
      const std::uint64_t free = excited & ~due;
      for (std::uint64_t s = free;; s = (s - 1) & free) {
        choices.push_back(s | due);
        if (s == 0) break;
      }
    } else if (due) {
      choices.push_back(due);
    } else {
      choices.push_back(0);
      for (int i = 0; i < n; ++i)
        if ((excited >> i) & 1u) choices.push_back(std::uint64_t{1} << i);
    }

    const auto saved = wait;
    for (std::uint64_t s : choices) {
      for (int i = 0; i < n; ++i) {
        const auto bit = std::uint64_t{1} << i;
        auto& w = wait[static_cast<std::size_t>(i)];
        w = (excited & bit) && !(s & bit) ? saved[static_cast<std::size_t>(i)] + 1 : 0;
      }
      if (s) {
        Bits next(n, x.mask() ^ s);
        events.push_back({grid[k], next});
        self(self, k + 1, next, steps + 1);
        events.pop_back();
      } else {
        self(self, k + 1, x, steps);
      }
    }
    wait = saved;
  };
  dfs(dfs, 0, g.init, 0);
  return {out.begin(), out.end()};
}

inline SystemTable generate(const GeneratorSpec& g) {
  std::vector<std::pair<Signal, std::vector<Signal>>> rows;
  for (const auto& u : g.inputs) rows.emplace_back(u, generate_states(g, u));
  return SystemTable::make(g.m, g.n, std::move(rows));
}

inline GeneratorSpec with_inputs(GeneratorSpec g, std::vector<Signal> inputs) {
  g.inputs = std::move(inputs);
  return g;
}

// ---------------------------------------------------------------------------
// Text form

inline std::string to_generator_text(const GeneratorSpec& g) {
  std::ostringstream os;
  os << "gen n=" << g.n << " m=" << g.m << " phi=";
  for (std::size_t k = 0; k < g.phi.table().size(); ++k) os << (k ? "," : "") << g.phi.table()[k].str();
  os << " init=" << g.init.str() << " grid=";
  for (std::size_t k = 0; k < g.policy.grid.size(); ++k) os << (k ? "," : "") << g.policy.grid[k].str();
  os << " steps=" << g.policy.max_steps << " rule=" << (g.policy.rule == UpdateRule::AnySubset ? "any" : "single")
     << " delay=" << g.policy.max_delay << "\n";
  for (const auto& u : g.inputs) os << "input: " << to_literal(u) << "\n";
  return os.str();
}

/// `gen n=<int> m=<int> phi=<rows> init=<bits> grid=<t,...> steps=<k> rule=<any|single> [delay=<k>]`
/// followed by `input: <signal>` lines. Row k of phi is the image of the
/// (n+m)-bit vector whose binary value is k, coordinate 1 most significant.
inline GeneratorSpec parse_generator_text(std::string_view text) {
  GeneratorSpec g;
  bool have_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (!have_header) {
      if (toks[0].text != "gen") throw ParseError("expected 'gen' header", line_no, toks[0].column);
      std::vector<Bits> rows;
      bool seen[8] = {};
      const char* required[] = {"n", "m", "phi", "init", "grid", "steps", "rule"};
      std::string_view phi_text, init_text;
      int phi_col = 0, init_col = 0;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        auto eq = toks[k].text.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no, toks[k].column);
        auto key = toks[k].text.substr(0, eq);
        auto val = toks[k].text.substr(eq + 1);
        const int vcol = toks[k].column + static_cast<int>(eq) + 1;
        auto integer = [&] {
          int v = 0;
          if (val.empty()) throw ParseError("expected an integer", line_no, vcol);
          for (char c : val) {
            if (c < '0' || c > '9' || v > 1000000) throw ParseError("expected an integer", line_no, vcol);
            v = v * 10 + (c - '0');
          }
          return v;
        };
        int slot = -1;
        if (key == "n") g.n = integer(), slot = 0;
        else if (key == "m") g.m = integer(), slot = 1;
        else if (key == "phi") phi_text = val, phi_col = vcol, slot = 2;
        else if (key == "init") init_text = val, init_col = vcol, slot = 3;
        else if (key == "grid") {
          slot = 4;
          g.policy.grid.clear();
          std::size_t a = 0;
          while (a <= val.size()) {
            std::size_t b = val.find(',', a);
            if (b == std::string_view::npos) b = val.size();
            auto t = Time::parse(val.substr(a, b - a));
            if (!t) throw ParseError("malformed time in grid", line_no, vcol + static_cast<int>(a));
            g.policy.grid.push_back(*t);
            a = b + 1;
          }
        } else if (key == "steps") g.policy.max_steps = integer(), slot = 5;
        else if (key == "rule") {
          slot = 6;
          if (val == "any") g.policy.rule = UpdateRule::AnySubset;
          else if (val == "single") g.policy.rule = UpdateRule::SingleCoordinate;
          else throw ParseError("rule must be any or single", line_no, vcol);
        } else if (key == "delay") g.policy.max_delay = integer(), slot = 7;
        else throw ParseError("unknown key '" + std::string(key) + "'", line_no, toks[k].column);
        if (seen[slot]) throw ParseError("duplicate key '" + std::string(key) + "'", line_no, toks[k].column);
        seen[slot] = true;
      }
      for (int s = 0; s < 7; ++s)
        if (!seen[s]) throw ParseError(std::string("missing ") + required[s] + "=", line_no, toks[0].column);
      if (g.n < 1 || g.m < 1 || g.n + g.m > 20) throw ParseError("n and m must be positive, n+m <= 20", line_no, toks[0].column);
      std::size_t a = 0;
      while (a <= phi_text.size()) {
        std::size_t b = phi_text.find(',', a);
        if (b == std::string_view::npos) b = phi_text.size();
        auto row = Bits::parse(phi_text.substr(a, b - a));
        if (!row || row->width() != g.n)
          throw ParseError("phi row must have " + std::to_string(g.n) + " bits", line_no, phi_col + static_cast<int>(a));
        rows.push_back(*row);
        a = b + 1;
      }
      if (rows.size() != (std::size_t{1} << (g.n + g.m)))
        throw ParseError("phi needs " + std::to_string(std::size_t{1} << (g.n + g.m)) + " rows", line_no, phi_col);
      g.phi = BoolFn(g.n + g.m, g.n, std::move(rows));
      auto init = Bits::parse(init_text);
      if (!init || init->width() != g.n) throw ParseError("init must have n bits", line_no, init_col);
      g.init = *init;
      have_header = true;
      continue;
    }
    if (toks[0].text != "input:") throw ParseError("expected 'input:'", line_no, toks[0].column);
    if (toks.size() < 2) throw ParseError("expected a signal literal after 'input:'", line_no, toks[0].column);
    const int col = toks[1].column;
    Signal u = parse_signal(line.substr(static_cast<std::size_t>(col - 1)), line_no, col);
    if (u.width() != g.m) throw ParseError("input width must be m=" + std::to_string(g.m), line_no, col);
    g.inputs.push_back(u);
  }
  if (!have_header) throw ParseError("missing 'gen' header", line_no, 1);
  try {
    detail::validate(g);
  } catch (const Error& e) {
    throw ParseError(e.what(), 1, 1);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Curated examples

struct LibraryExample {
  std::string name;
  std::string note;
  std::optional<GeneratorSpec> spec;  // absent when the table is given directly
  SystemTable table;
};

namespace detail {
inline DelayPolicy integer_grid(int last, int steps) {
  DelayPolicy p;
  for (int t = 1; t <= last; ++t) p.grid.push_back(Time(t));
  p.max_steps = steps;
  return p;
}
inline Signal lit(const char* s) { return parse_signal(s); }
}  // namespace detail

/// sr_latch, c_element, glitch_net, two_limit_race, oscillator.
inline std::vector<LibraryExample> library_examples() {
  using detail::lit;
  std::vector<LibraryExample> out;
  auto add = [&](std::string name, std::string note, GeneratorSpec g) {
    SystemTable t = generate(g);
    out.push_back({std::move(name), std::move(note), std::move(g), std::move(t)});
  };

  {  // x' = s | (x & !r); u = (s, r)
    GeneratorSpec g;
    g.n = 1;
    g.m = 2;
    g.phi = BoolFn::from(3, 1, [](const Bits& b) { return Bits(1, b[1] || (b[0] && !b[2])); });
    g.init = Bits(1);
    g.policy = detail::integer_grid(8, 4);
    g.inputs = {lit("sig 2 init=00"), lit("sig 2 init=00 @1=10"), lit("sig 2 init=00 @1=01"),
                lit("sig 2 init=00 @1=10 @3=00"), lit("sig 2 init=00 @1=10 @4=01")};
    add("sr_latch", "absolutely race-free; hold-set transfer is hazard-free", g);
  }
  {  // x' = ab | x(a | b)
    GeneratorSpec g;
    g.n = 1;
    g.m = 2;
    g.phi = BoolFn::from(3, 1, [](const Bits& b) { return Bits(1, (b[1] && b[2]) || (b[0] && (b[1] || b[2]))); });
    g.init = Bits(1);
    g.policy = detail::integer_grid(8, 4);
    g.inputs = {lit("sig 2 init=00"), lit("sig 2 init=00 @1=10"), lit("sig 2 init=00 @1=11"),
                lit("sig 2 init=00 @1=11 @4=01"), lit("sig 2 init=00 @1=11 @4=00")};
    add("c_element", "absolutely race-free", g);
  }
  {  // x1' = a, x2' = a & !x1: a rising edge may pulse x2
    GeneratorSpec g;
    g.n = 2;
    g.m = 1;
    g.phi = BoolFn::from(3, 2, [](const Bits& b) {
      Bits r(2);
      r.set(0, b[2]);
      r.set(1, b[2] && !b[0]);
      return r;
    });
    g.init = Bits(2);
    g.policy = detail::integer_grid(6, 4);
    g.inputs = {lit("sig 1 init=0"), lit("sig 1 init=0 @1=1")};
    add("glitch_net", "stable and race-free; x2 may pulse on the rising edge (hazard)", g);
  }
  {  // x1' = a & !x2, x2' = a & !x1: whoever switches first wins
    GeneratorSpec g;
    g.n = 2;
    g.m = 1;
    g.phi = BoolFn::from(3, 2, [](const Bits& b) {
      Bits r(2);
      r.set(0, b[2] && !b[1]);
      r.set(1, b[2] && !b[0]);
      return r;
    });
    g.init = Bits(2);
    g.policy = detail::integer_grid(6, 4);
    g.inputs = {lit("sig 1 init=0"), lit("sig 1 init=0 @1=1")};
    add("two_limit_race", "absolutely stable, not race-free", g);
  }
  {
    auto t = SystemTable::make(1, 1, {{lit("sig 1 init=0"), {lit("sig 1 init=0 period=2 @0=1 @1=0")}},
                                      {lit("sig 1 init=0 @1=1"), {lit("sig 1 init=0 @2=1")}}});
    out.push_back({"oscillator", "not absolutely stable; relatively stable fails on the constant input", std::nullopt, t});
  }
  return out;
}

inline LibraryExample library_example(std::string_view name) {
  for (auto& e : library_examples())
    if (e.name == name) return e;
  throw Error("unknown library example '" + std::string(name) + "'");
}

}  // namespace asyncsys
