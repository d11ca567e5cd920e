#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "cli.hpp"

using namespace asyncsys;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run_cli(std::move(args), out, err);
  return {status, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(ASYNCSYS_DATA) + "/" + name; }
std::string fixture(const char* name) { return read_file(std::string(ASYNCSYS_FIXTURES) + "/" + name); }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("asyncsys_cli_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

}  // namespace

TEST_CASE("check on the latch: race-free with singleton limit sets") {
  auto r = run({"check", "--example", "sr_latch", "--flavor", "abs:racefree", "--format", "kv"});
  CHECK(r.status == 0);
  CHECK(r.err.empty());
  CHECK(r.out == fixture("cli_check_sr_latch.kv"));
  for (const auto& line : std::vector<std::string>{"lim.u0", "lim.u2", "lim.u4"}) {
    const auto pos = r.out.find(line + "=");
    REQUIRE(pos != std::string::npos);
    const auto end = r.out.find('\n', pos);
    CHECK(r.out.substr(pos, end - pos).find(',') == std::string::npos);
  }
  CHECK(run({"check", data("sr_latch.sys"), "--flavor", "abs:racefree", "--format", "kv"}).out == r.out);
}

TEST_CASE("check exit status follows the verdicts") {
  CHECK(run({"check", data("sr_latch.sys")}).status == 1);  // abs:constant fails
  CHECK(run({"check", data("sr_latch.sys"), "--flavor", "abs:stable", "--flavor", "abs:racefree"}).status == 0);
  auto race = run({"check", data("two_limit_race.sys"), "--flavor", "abs:racefree", "--format", "kv"});
  CHECK(race.status == 1);
  CHECK(race.out.find("abs:racefree.verdict=false\n") != std::string::npos);
  CHECK(race.out.find("abs:racefree.counterexample=") != std::string::npos);
  CHECK(race.out.find("lim.") == std::string::npos);
  CHECK(run({"check", "--example", "oscillator", "--flavor", "abs:stable"}).status == 1);
}

TEST_CASE("F-relative flavors need a truth table") {
  auto missing = run({"check", data("sr_latch.sys"), "--flavor", "frel:racefree"});
  CHECK(missing.status == 2);
  CHECK(missing.err.find("--F") != std::string::npos);
  auto r = run({"check", data("sr_latch.sys"), "--flavor", "frel:stable", "--F", data("first_input.fn"), "--format", "kv"});
  CHECK(r.status == 0);
  CHECK(r.out.find("frel:stable.verdict=true") != std::string::npos);
  auto bad = temp_file("bad.fn", "fn in=2 out=1\n00 0\n");
  auto e = run({"check", data("sr_latch.sys"), "--flavor", "frel:stable", "--F", bad});
  CHECK(e.status == 2);
  CHECK(e.err.find("missing row") != std::string::npos);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run({}).status == 2);
  CHECK(run({"frobnicate"}).status == 2);
  CHECK(run({"check"}).status == 2);
  CHECK(run({"check", "/nonexistent/x.sys"}).status == 2);
  CHECK(run({"check", data("sr_latch.sys"), "--flavor", "abs:steady"}).status == 2);
  CHECK(run({"check", data("sr_latch.sys"), "--format", "vcd"}).status == 2);
  CHECK(run({"check", "--example", "nope"}).status == 2);
  CHECK(run({"oracle", "--suite", "closure-all"}).status == 2);
  CHECK(run({"oracle", "--suite", "closure", "--corpus", "huge"}).status == 2);
  CHECK(run({"ops", "frob", data("sr_latch.sys")}).status == 2);
  CHECK(run({"ops", "union", data("sr_latch.sys")}).status == 2);
  CHECK(run({"transitions", "sync-a", data("sr_latch.sys"), "--u", "sig 2 init=00", "--t0", "x", "--tf", "1"}).status == 2);

  auto bad = temp_file("dup.sys", "system m=1 n=1\ninput: sig 1 init=0\nstate: sig 1 init=0\ninput: sig 1 init=0\nstate: sig 1 init=1\n");
  auto r = run({"check", bad});
  CHECK(r.status == 2);
  CHECK(r.err.find(bad + ":4:8:") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("help exits with 0") {
  auto r = run({"--help"});
  CHECK(r.status == 0);
  CHECK(r.out.find("oracle") != std::string::npos);
  CHECK(run({"transitions", "--help"}).status == 0);
}

TEST_CASE("ops") {
  auto dual = run({"ops", "dual", data("two_limit_race.sys")});
  CHECK(dual.status == 0);
  CHECK(parse_system_text(dual.out) == asyncsys::dual(parse_system_file(data("two_limit_race.sys"))));

  auto same = run({"ops", "subsystem", data("sr_latch.sys"), data("sr_latch.sys"), "--format", "kv"});
  CHECK(same.status == 0);
  CHECK(same.out == "holds=true\n");
  auto w0 = run({"ops", "initialized", data("sr_latch.sys"), "--format", "kv"});
  CHECK(w0.out == "holds=true\nw0=0\n");
  auto sigma = run({"ops", "sigma", data("sr_latch.sys"), "--input", "sig 2 init=00 @1=10", "--format", "kv"});
  CHECK(sigma.out == "sigma={1}\n");
  auto u = run({"ops", "union", data("sr_latch.sys"), data("sr_latch.sys")});
  CHECK(u.status == 0);
  CHECK(u.out == read_file(data("sr_latch.sys")));
}

TEST_CASE("generate") {
  auto sys = run({"generate", data("sr_latch.gen")});
  CHECK(sys.status == 0);
  CHECK(sys.out == read_file(data("sr_latch.sys")));
  auto gen = run({"generate", "--example", "sr_latch", "--emit", "gen"});
  CHECK(gen.out == read_file(data("sr_latch.gen")));
  for (const auto& m : constructive_family())
    if (m.name == "c_element") CHECK(run({"generate", "--family", "c_element"}).out == to_system_text(generate(m.spec)));
  CHECK(run({"generate", "--example", "oscillator", "--emit", "gen"}).status == 2);
}

TEST_CASE("transitions") {
  auto plan = run({"transitions", "plan", "--family", "sr_latch", "--targets", "0,1,0,1", "--format", "kv"});
  CHECK(plan.status == 0);
  CHECK(plan.out == fixture("cli_plan_sr_latch.kv"));

  auto blocked = run({"transitions", "plan", "--family", "delay_chain", "--targets", "00,11", "--format", "kv"});
  CHECK(blocked.status == 1);
  CHECK(blocked.out.find("verdict=false") != std::string::npos);

  auto a = run({"transitions", "sync-a", data("sr_latch.sys"), "--u", "sig 2 init=00 @1=10", "--t0", "1", "--tf", "4",
                "--format", "kv"});
  CHECK(a.status == 0);
  CHECK(a.out.find("cert.step.0.w=1\n") != std::string::npos);
  // The second state jumps at 3, so its left limit there is still 0.
  CHECK(run({"transitions", "sync-a", data("sr_latch.sys"), "--u", "sig 2 init=00 @1=10", "--t0", "1", "--tf", "3"}).status == 1);

  CHECK(run({"transitions", "hazard", "--family", "glitch_net", "--u", "sig 1 init=0 @1=1", "--tf", "1", "--tf2", "6"}).status == 1);
  CHECK(run({"transitions", "controllability", "--family", "sr_latch"}).status == 0);
  CHECK(run({"transitions", "controllability", "--family", "delay_chain"}).status == 1);

  auto build = run({"transitions", "build", "--family", "sr_latch", "--input", "sig 2 init=10", "--input", "sig 2 init=00",
                    "--input", "sig 2 init=01", "--format", "kv"});
  CHECK(build.status == 0);
  CHECK(build.out.find("replay=true\n") != std::string::npos);
  CHECK(build.out.find("input=sig 2 init=10 @3=00 @4=01\n") != std::string::npos);

  auto fm = run({"transitions", "fundamental", "--gen", data("sr_latch.gen"), "--u", "sig 2 init=00 @1=10"});
  CHECK(fm.status == 0);
}

TEST_CASE("oracle") {
  auto clean = run({"oracle", "--suite", "lim-determinism", "--corpus", "tiny", "--format", "kv"});
  CHECK(clean.status == 0);
  CHECK(clean.out.find("clean=true\n") != std::string::npos);
  auto again = run({"oracle", "--suite", "lim-determinism", "--corpus", "tiny", "--format", "kv"});
  CHECK(again.out == clean.out);

  auto closure = run({"oracle", "--suite", "closure", "--corpus", "tiny", "--random", "300", "--seed", "4", "--format", "kv"});
  CHECK(closure.status == 1);
  CHECK(closure.out.find("clean=false\n") != std::string::npos);
  CHECK(closure.out.find("seed=4\n") != std::string::npos);
}

TEST_CASE("waves") {
  auto sys = temp_file("one.sys", "system m=2 n=1\ninput: sig 2 init=00 @1=10\nstate: sig 1 init=0 @3/2=1\n");
  auto r = run({"waves", sys});
  CHECK(r.status == 0);
  CHECK(r.out.find("$var wire 2 ! u0 $end\n$var wire 1 \" u0_x0 $end\n") != std::string::npos);
  CHECK(r.out.find("1 tick = 1/2") != std::string::npos);
  CHECK(r.out.find("$timescale") != std::string::npos);
  CHECK(r.out.find("#2\nb10 !\n#3\n1\"\n") != std::string::npos);

  auto sig = run({"waves", "--signal", "sig 2 init=01 @1=11", "--until", "3"});
  CHECK(sig.out.find("$var wire 2 ! s0 $end") != std::string::npos);
  CHECK(sig.out.substr(sig.out.size() - 3) == "#3\n");
  CHECK(run({"waves", sys, "--entry", "1"}).status == 2);
  CHECK(run({"waves", sys, "--format", "kv"}).status == 2);
}

TEST_CASE("--out writes the report to a file") {
  const auto path = (std::filesystem::temp_directory_path() / "asyncsys_cli_out.kv").string();
  std::remove(path.c_str());
  auto r = run({"--out", path, "check", "--example", "sr_latch", "--flavor", "abs:racefree", "--format", "kv"});
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  CHECK(read_file(path) == fixture("cli_check_sr_latch.kv"));
  auto after = run({"check", "--example", "sr_latch", "--flavor", "abs:racefree", "--format", "kv", "--out", path});
  CHECK(after.status == 0);
  CHECK(read_file(path) == fixture("cli_check_sr_latch.kv"));
}
