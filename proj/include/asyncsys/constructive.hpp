#pragma once

#include <functional>
#include <string>
#include <vector>

#include "asyncsys/generator.hpp"
#include "asyncsys/transitions.hpp"

namespace asyncsys {

/// A named generator whose input set is the splice closure of the constant
/// signals of width m.
struct FamilyMember {
  std::string name;
  GeneratorSpec spec;

  ClosedSystem closed() const { return ClosedSystem::of(spec, constant_basis(spec.m)); }
};

/// Small gate-level circuits on an integer grid 1..16 with up to 8 switches per
/// run, sampled on the constant inputs. Phi reads concat(x, u), state first.
inline std::vector<FamilyMember> constructive_family() {
  std::vector<FamilyMember> out;
  auto add = [&](std::string name, int n, int m, std::function<Bits(const Bits&)> phi) {
    GeneratorSpec g;
    g.n = n;
    g.m = m;
    g.phi = BoolFn::from(n + m, n, phi);
    g.init = Bits(n);
    for (int t = 1; t <= 16; ++t) g.policy.grid.push_back(Time(t));
    g.policy.max_steps = 8;
    g.inputs = constant_basis(m);
    out.push_back({std::move(name), std::move(g)});
  };
  auto one = [](bool v) { return Bits(1, v); };
  auto two = [](bool a, bool b) {
    Bits r(2);
    r.set(0, a);
    r.set(1, b);
    return r;
  };
  add("buffer", 1, 1, [&](const Bits& b) { return one(b[1]); });
  add("inverter", 1, 1, [&](const Bits& b) { return one(!b[1]); });
  add("and2", 1, 2, [&](const Bits& b) { return one(b[1] && b[2]); });
  add("or2", 1, 2, [&](const Bits& b) { return one(b[1] || b[2]); });
  add("xor2", 1, 2, [&](const Bits& b) { return one(b[1] != b[2]); });
  add("nand2", 1, 2, [&](const Bits& b) { return one(!(b[1] && b[2])); });
  add("nor2", 1, 2, [&](const Bits& b) { return one(!(b[1] || b[2])); });
  add("xnor2", 1, 2, [&](const Bits& b) { return one(b[1] == b[2]); });
  add("sr_latch", 1, 2, [&](const Bits& b) { return one(b[1] || (b[0] && !b[2])); });
  add("c_element", 1, 2, [&](const Bits& b) { return one((b[1] && b[2]) || (b[0] && (b[1] || b[2]))); });
  add("two_buffers", 2, 2, [&](const Bits& b) { return two(b[2], b[3]); });
  add("buffer_inverter", 2, 1, [&](const Bits& b) { return two(b[2], !b[2]); });
  add("delay_chain", 2, 1, [&](const Bits& b) { return two(b[2], b[0]); });
  add("latch_follower", 2, 2, [&](const Bits& b) { return two(b[2] || (b[0] && !b[3]), b[0]); });
  add("glitch_net", 2, 1, [&](const Bits& b) { return two(b[2], b[2] && !b[0]); });
  return out;
}

}  // namespace asyncsys
