#pragma once

// Command-line front end. run_cli() returns the exit status: 0 when every
// verdict holds or a suite is clean, 1 when a verdict fails or a counterexample
// is found (the report is still written), 2 on usage or input errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "asyncsys/constructive.hpp"
#include "asyncsys/io.hpp"
#include "asyncsys/report.hpp"
#include "asyncsys/suites.hpp"

namespace asyncsys::cli {

/// Usage or input problem, reported with exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string out;
  std::string format = "text";

  // check / waves / ops / transitions sources
  std::string system_path;
  std::string example;
  std::string gen_path;
  std::string family;
  std::vector<std::string> flavors;
  std::string F_path;

  // ops
  std::string op;
  std::string second_path;
  std::string input;

  // generate
  std::string emit = "system";

  // transitions
  std::string u, v;
  std::string t0, tf, tf2;
  std::vector<std::string> inputs;
  std::string targets;

  // oracle
  std::string suite;
  std::string corpus = "small";
  std::uint64_t seed = 1;
  std::uint64_t random_count = 10000;
  unsigned threads = 0;

  // waves
  std::vector<std::size_t> entries;
  std::vector<std::string> signals;
  std::string until;
};

namespace detail {

inline Time time_arg(const std::string& text, const char* what) {
  auto t = Time::parse(text);
  if (!t) throw UsageError(std::string("bad time for ") + what + ": '" + text + "'");
  return *t;
}

inline Signal signal_arg(const std::string& text, const char* what) {
  try {
    return parse_signal(text);
  } catch (const ParseError& e) {
    throw UsageError(std::string("bad signal literal for ") + what + ": " + e.what());
  }
}

inline std::string kv_or_text(const KvReport& kv, const std::string& format, const std::string& title) {
  if (format == "kv") return kv.str();
  std::string s = title.empty() ? "" : title + "\n";
  for (const auto& [k, v] : kv.entries()) s += "  " + k + ": " + v + "\n";
  return s;
}

inline void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (o.format == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw UsageError("--format " + o.format + " is not available here (use " + list + ")");
}

inline SystemTable load_table(const Options& o) {
  if (!o.example.empty()) return library_example(o.example).table;
  if (!o.gen_path.empty()) return generate(parse_generator_text(read_file(o.gen_path)));
  if (o.system_path.empty()) throw UsageError("no system given (pass a file, --example or --gen)");
  return parse_system_file(o.system_path);
}

inline ClosedSystem load_closed(const Options& o) {
  if (!o.family.empty()) {
    for (const auto& m : constructive_family())
      if (m.name == o.family) return m.closed();
    throw UsageError("unknown family member '" + o.family + "'");
  }
  if (!o.gen_path.empty()) {
    auto g = parse_generator_text(read_file(o.gen_path));
    return ClosedSystem::of(g, constant_basis(g.m));
  }
  return ClosedSystem::of(load_table(o));
}

inline std::vector<StabilityFlavor> flavors_of(const Options& o) {
  std::vector<std::string> names = o.flavors;
  if (names.empty()) names = {"abs:stable", "abs:racefree", "abs:constant"};
  std::optional<BoolFn> F;
  if (!o.F_path.empty()) F = parse_truth_table(read_file(o.F_path));
  std::vector<StabilityFlavor> out;
  for (const auto& n : names) {
    auto fl = StabilityFlavor::parse(n);
    if (!fl) throw UsageError("bad --flavor '" + n + "' (expected <abs|rel|frel>:<stable|racefree|constant>)");
    if (fl->scope == Scope::FRelative) {
      if (!F) throw UsageError("--flavor " + n + " needs --F <truth table file>");
      fl->F = F;
    }
    out.push_back(*fl);
  }
  return out;
}

// ---------------------------------------------------------------------------

inline int cmd_check(const Options& o, std::string& out) {
  require_format(o, {"text", "kv"});
  const SystemTable f = load_table(o);
  bool all = true;
  KvReport kv;
  std::string text;
  for (const auto& fl : flavors_of(o)) {
    const auto r = check(f, fl);
    all = all && r.verdict;
    const auto block = to_kv(f, r);
    kv.merge(fl.str() + ".", block);
    text += fl.str() + ": " + (r.verdict ? "holds" : "fails") + (r.trivial ? " (trivially, empty scope)" : "") + "\n";
    if (r.counterexample) {
      text += "  counterexample: u = " + to_literal(r.counterexample->u);
      if (r.counterexample->x) text += ", x = " + to_literal(*r.counterexample->x);
      text += "\n  " + r.counterexample->reason + "\n";
    }
    for (const auto& w : r.per_input)
      text += "  u" + std::to_string(w.input) + " -> " + w.w.str() + " from t = " + witness_str(w.tf) + "\n";
  }
  if (check(f, Scope::Absolute, Strength::RaceFree).verdict) {
    const auto lim = to_kv(f, lim_system(f));
    kv.merge("", lim);
    for (const auto& [k, v] : lim.entries()) text += k + " = {" + v + "}\n";
  }
  out = o.format == "kv" ? kv.str() : text;
  return all ? 0 : 1;
}

inline int cmd_ops(const Options& o, std::string& out) {
  require_format(o, {"text", "kv"});
  const SystemTable a = load_table(o);
  auto second = [&] {
    if (o.second_path.empty()) throw UsageError("ops " + o.op + " needs a second system file");
    return parse_system_file(o.second_path);
  };
  auto emit_system = [&](const SystemTable& s) {
    out = to_system_text(s);
    return 0;
  };
  auto emit_verdict = [&](bool holds, KvReport kv) {
    kv.set("holds", holds);
    out = kv_or_text(kv, o.format, "ops " + o.op);
    return holds ? 0 : 1;
  };
  try {
    if (o.op == "dual") return emit_system(dual(a));
    if (o.op == "intersect") return emit_system(intersect(a, second()));
    if (o.op == "union") return emit_system(unite(a, second()));
    if (o.op == "parallel") return emit_system(parallel(a, second()));
    if (o.op == "serial") return emit_system(serial(a, second()));  // a = h, second = f
    if (o.op == "subsystem") return emit_verdict(is_subsystem(a, second()), {});
    if (o.op == "causal") {
      auto c = check_non_anticipatory(a);
      KvReport kv;
      if (c.counterexample)
        kv.set("counterexample", "u=" + to_literal(c.counterexample->u) + "; v=" + to_literal(c.counterexample->v) +
                                     "; t1=" + c.counterexample->t1.str());
      return emit_verdict(c.holds, kv);
    }
    if (o.op == "initialized") {
      auto w0 = initial_state(a);
      KvReport kv;
      if (w0) kv.set("w0", w0->str());
      return emit_verdict(w0.has_value(), kv);
    }
    if (o.op == "equilibria") {
      KvReport kv;
      std::string s;
      for (const auto& w : equilibrium_points(a)) s += (s.empty() ? "" : ",") + w.str();
      kv.set("equilibria", "{" + s + "}");
      out = kv_or_text(kv, o.format, "ops equilibria");
      return 0;
    }
    if (o.op == "sigma") {
      const Signal u = signal_arg(o.input, "--input");
      std::string s;
      for (const auto& w : sigma(a, u)) s += (s.empty() ? "" : ",") + w.str();
      KvReport kv;
      kv.set("sigma", "{" + s + "}");
      out = kv_or_text(kv, o.format, "ops sigma");
      return 0;
    }
    if (o.op == "times") {
      KvReport kv;
      kv.set("initial.fix", witness_str(classify_initial_time(a).fix));
      kv.set("final.fix", witness_str(classify_final_time(a).fix));
      out = kv_or_text(kv, o.format, "ops times");
      return 0;
    }
  } catch (const UsageError&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError("ops " + o.op + ": " + e.what());
  }
  throw UsageError("unknown op '" + o.op +
                   "' (dual, intersect, union, parallel, serial, subsystem, causal, initialized, equilibria, sigma, times)");
}

inline int cmd_generate(const Options& o, std::string& out) {
  GeneratorSpec g;
  if (!o.example.empty()) {
    auto ex = library_example(o.example);
    if (!ex.spec) {
      if (o.emit == "gen") throw UsageError("example '" + o.example + "' has no generator");
      out = to_system_text(ex.table);
      return 0;
    }
    g = *ex.spec;
  } else if (!o.family.empty()) {
    bool found = false;
    for (const auto& m : constructive_family())
      if (m.name == o.family) {
        g = m.spec;
        found = true;
      }
    if (!found) throw UsageError("unknown family member '" + o.family + "'");
  } else {
    if (o.gen_path.empty()) throw UsageError("no generator given (pass a file, --example or --family)");
    g = parse_generator_text(read_file(o.gen_path));
  }
  if (o.emit == "gen") out = to_generator_text(g);
  else if (o.emit == "system") out = to_system_text(generate(g));
  else throw UsageError("--emit must be system or gen");
  return 0;
}

inline int cmd_transitions(const std::string& sub, const Options& o, std::string& out) {
  require_format(o, {"text", "kv"});
  const ClosedSystem f = load_closed(o);
  KvReport kv;
  bool holds = true;
  auto step_kv = [&](const SyncStep& s) { add_steps(kv, {s}); };
  if (sub == "sync-a") {
    const Signal u = signal_arg(o.u, "--u");
    const Time t0 = time_arg(o.t0, "--t0"), tf = time_arg(o.tf, "--tf");
    auto r = sync_like_a(f, u, t0, tf);
    holds = r.has_value();
    if (r) step_kv({'a', u, u, t0, tf, r->w, r->w2});
  } else if (sub == "sync-b") {
    const Signal u = signal_arg(o.u, "--u"), v = signal_arg(o.v, "--v");
    const Time tf = time_arg(o.tf, "--tf"), tf2 = time_arg(o.tf2, "--tf2");
    auto r = sync_like_b(f, u, v, tf, tf2);
    holds = r.has_value();
    if (r) {
      step_kv({'b', u, v, tf, tf2, r->w, r->w2});
      kv.set("spliced", to_literal(r->spliced));
    }
  } else if (sub == "fundamental") {
    auto r = fundamental_mode(f, signal_arg(o.u, "--u"));
    holds = r.has_value();
    if (r) kv = to_kv(*r);
  } else if (sub == "hazard") {
    holds = is_hazard_free(f, signal_arg(o.u, "--u"), time_arg(o.tf, "--tf"), time_arg(o.tf2, "--tf2"));
    kv.set("hazard_free", holds);
  } else if (sub == "controllability") {
    auto r = check_controllability(f);
    holds = r.c1 && r.c2;
    kv = to_kv(r);
  } else if (sub == "build") {
    std::vector<Signal> us;
    for (const auto& s : o.inputs) us.push_back(signal_arg(s, "--input"));
    if (us.empty()) throw UsageError("build needs at least one --input");
    auto run = build_fundamental_input(f, us);
    holds = replay_run(f, run);
    kv = to_kv(run);
    for (std::size_t k = 0; k < run.cuts.size(); ++k) kv.set("cert.cut." + std::to_string(k), run.cuts[k].str());
    kv.set("replay", holds);
  } else if (sub == "plan") {
    std::vector<Bits> ws;
    std::stringstream ss(o.targets);
    for (std::string item; std::getline(ss, item, ',');) {
      auto b = Bits::parse(item);
      if (!b || b->width() != f.out_width()) throw UsageError("bad target '" + item + "'");
      ws.push_back(*b);
    }
    auto run = plan_trajectory(f, ws);
    holds = replay_run(f, run);
    kv = to_kv(run);
    for (std::size_t k = 0; k < run.cuts.size(); ++k) kv.set("cert.cut." + std::to_string(k), run.cuts[k].str());
    kv.set("replay", holds);
  }
  kv.set("verdict", holds);
  out = kv_or_text(kv, o.format, "transitions " + sub);
  return holds ? 0 : 1;
}

inline int cmd_oracle(const Options& o, std::string& out) {
  require_format(o, {"text", "kv"});
  SuiteConfig cfg;
  try {
    cfg.corpus = named_corpus(o.corpus);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  cfg.seed = o.seed;
  cfg.random_count = o.random_count;
  cfg.threads = o.threads;
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw UsageError("unknown suite '" + o.suite + "' (" + list + ")");
  }
  auto r = run_suite(o.suite, cfg);
  r.report.set("corpus", o.corpus);
  r.report.set("clean", r.clean);
  out = kv_or_text(r.report, o.format, "");
  if (o.format == "kv") out = r.report.str();
  return r.clean ? 0 : 1;
}

inline int cmd_waves(const Options& o, std::string& out) {
  Options v = o;
  if (v.format == "text") v.format = "vcd";
  require_format(v, {"vcd"});
  std::vector<Waveform> waves;
  for (std::size_t k = 0; k < o.signals.size(); ++k) waves.push_back({"s" + std::to_string(k), signal_arg(o.signals[k], "--signal")});
  if (waves.empty()) {
    const SystemTable f = load_table(o);
    std::vector<std::size_t> picks = o.entries;
    if (picks.empty())
      for (std::size_t i = 0; i < f.size(); ++i) picks.push_back(i);
    for (auto i : picks) {
      if (i >= f.size()) throw UsageError("--entry " + std::to_string(i) + " out of range (table has " + std::to_string(f.size()) + " inputs)");
      const auto& e = f.entries()[i];
      waves.push_back({"u" + std::to_string(i), e.input});
      for (std::size_t k = 0; k < e.states.size(); ++k) waves.push_back({"u" + std::to_string(i) + "_x" + std::to_string(k), e.states[k]});
    }
  }
  std::optional<Time> horizon;
  if (!o.until.empty()) horizon = time_arg(o.until, "--until");
  out = write_vcd(waves, horizon);
  return 0;
}

}  // namespace detail

/// Parses the arguments and runs one command.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Checks stability, races and hazards of finite asynchronous systems."};
  app.name("asyncsys");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", o.out, "Write the report to this file instead of stdout");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "kv", "vcd"}));

  auto source = [&](CLI::App* c) {
    c->add_option("system", o.system_path, "System file");
    c->add_option("--example", o.example, "Built-in library example");
    c->add_option("--gen", o.gen_path, "Generator file");
  };

  auto* check = app.add_subcommand("check", "Decide stability flavors");
  source(check);
  check->add_option("--flavor", o.flavors, "<abs|rel|frel>:<stable|racefree|constant>, repeatable");
  check->add_option("--F", o.F_path, "Truth table file for F (frel flavors)");

  auto* ops = app.add_subcommand("ops", "Apply a system operation or predicate");
  ops->add_option("op", o.op, "dual, intersect, union, parallel, serial, subsystem, causal, initialized, equilibria, sigma, times")->required();
  source(ops);
  ops->add_option("second", o.second_path, "Second system file (h o f takes h first)");
  ops->add_option("--input", o.input, "Input literal for sigma");

  auto* gen = app.add_subcommand("generate", "Expand a generator into a system file");
  gen->add_option("gen", o.gen_path, "Generator file");
  gen->add_option("--example", o.example, "Built-in library example");
  gen->add_option("--family", o.family, "Built-in gate family member");
  gen->add_option("--emit", o.emit, "system or gen")->check(CLI::IsMember({"system", "gen"}));

  auto* tr = app.add_subcommand("transitions", "Synchronous-like transfers, fundamental mode, hazards, control");
  tr->require_subcommand(1);
  std::string tr_sub;
  auto tr_cmd = [&](const char* name, const char* help) {
    auto* c = tr->add_subcommand(name, help);
    source(c);
    c->add_option("--family", o.family, "Built-in gate family member (closed under splicing)");
    c->callback([&, name] { tr_sub = name; });
    return c;
  };
  auto* sa = tr_cmd("sync-a", "Definition a) under one input");
  sa->add_option("--u", o.u, "Input literal")->required();
  sa->add_option("--t0", o.t0)->required();
  sa->add_option("--tf", o.tf)->required();
  auto* sb = tr_cmd("sync-b", "Definition b) across a splice");
  sb->add_option("--u", o.u, "Input before the splice")->required();
  sb->add_option("--v", o.v, "Input after the splice")->required();
  sb->add_option("--tf", o.tf)->required();
  sb->add_option("--tf2", o.tf2)->required();
  auto* fm = tr_cmd("fundamental", "Fundamental-mode certificate");
  fm->add_option("--u", o.u, "Input literal")->required();
  auto* hz = tr_cmd("hazard", "Hazard-freedom of a transfer");
  hz->add_option("--u", o.u, "Input literal")->required();
  hz->add_option("--tf", o.tf)->required();
  hz->add_option("--tf2", o.tf2)->required();
  tr_cmd("controllability", "Reachability and retargeting witnesses");
  auto* bd = tr_cmd("build", "Splice inputs into a fundamental-mode run");
  bd->add_option("--input", o.inputs, "Input literal, repeatable, in order")->required();
  auto* pl = tr_cmd("plan", "Steer the state through target values");
  pl->add_option("--targets", o.targets, "Comma-separated values, starting with the initial state")->required();

  auto* orc = app.add_subcommand("oracle", "Run a theorem suite");
  orc->add_option("--suite", o.suite, "Suite name")->required();
  orc->add_option("--corpus", o.corpus, "small or tiny");
  orc->add_option("--seed", o.seed, "Seed for the random parts");
  orc->add_option("--random", o.random_count, "Number of random tables or operand sets");
  orc->add_option("--threads", o.threads, "Worker threads, 0 for all cores");

  auto* wv = app.add_subcommand("waves", "Dump signals as VCD");
  source(wv);
  wv->add_option("--entry", o.entries, "Input index to dump with its states, repeatable");
  wv->add_option("--signal", o.signals, "Signal literal to dump, repeatable");
  wv->add_option("--until", o.until, "Dump horizon");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string text;
  int status = 0;
  try {
    if (check->parsed()) status = detail::cmd_check(o, text);
    else if (ops->parsed()) status = detail::cmd_ops(o, text);
    else if (gen->parsed()) status = detail::cmd_generate(o, text);
    else if (tr->parsed()) {
      try {
        status = detail::cmd_transitions(tr_sub, o, text);
      } catch (const HypothesisError& e) {
        // The system lacks a property the construction needs: a false verdict.
        KvReport kv;
        kv.set("hypothesis", e.what());
        kv.set("verdict", false);
        text = detail::kv_or_text(kv, o.format, "transitions " + tr_sub);
        status = 1;
      }
    }
    else if (orc->parsed()) status = detail::cmd_oracle(o, text);
    else if (wv->parsed()) status = detail::cmd_waves(o, text);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << o.out << "\n";
      return 2;
    }
    f << text;
  }
  return status;
}

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(std::move(args), out, err);
}

}  // namespace asyncsys::cli
