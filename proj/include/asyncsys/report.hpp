#pragma once

#include <map>
#include <string>

#include "asyncsys/stability.hpp"
#include "asyncsys/transitions.hpp"

namespace asyncsys {

/// Flat key-value block, one `key=value` line per entry in sorted key order.
class KvReport {
 public:
  KvReport& set(const std::string& key, std::string value) {
    kv_[key] = std::move(value);
    return *this;
  }
  KvReport& set(const std::string& key, const char* value) { return set(key, std::string(value)); }
  KvReport& set(const std::string& key, bool value) { return set(key, std::string(value ? "true" : "false")); }
  template <typename N, typename = std::enable_if_t<std::is_arithmetic_v<N>>>
  KvReport& set(const std::string& key, N value) {
    return set(key, std::to_string(value));
  }
  KvReport& merge(const std::string& prefix, const KvReport& other) {
    for (const auto& [k, v] : other.kv_) kv_[prefix + k] = v;
    return *this;
  }

  const std::map<std::string, std::string>& entries() const { return kv_; }
  std::string get(const std::string& key) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? std::string() : it->second;
  }
  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string str() const {
    std::string s;
    for (const auto& [k, v] : kv_) s += k + "=" + v + "\n";
    return s;
  }

 private:
  std::map<std::string, std::string> kv_;
};

inline std::string witness_str(const TimeWitness& w) { return w.any ? "any" : w.at.str(); }

inline KvReport to_kv(const SystemTable& f, const StabilityReport& r) {
  KvReport kv;
  kv.set("flavor", r.flavor.str());
  kv.set("verdict", r.verdict);
  kv.set("trivial", r.trivial);
  kv.set("scoped", r.scoped.size());
  for (const auto& w : r.per_state) {
    const std::string key = "witness.u" + std::to_string(w.input) + ".x" + std::to_string(w.state);
    kv.set(key + ".w", w.w.str());
    kv.set(key + ".tf", witness_str(w.tf));
  }
  for (const auto& w : r.per_input) {
    const std::string key = "witness.u" + std::to_string(w.input);
    kv.set(key, to_literal(f.entries()[w.input].input));
    kv.set(key + ".w", w.w.str());
    kv.set(key + ".tf", witness_str(w.tf));
  }
  for (const auto& w : r.per_state) kv.set("witness.u" + std::to_string(w.input), to_literal(f.entries()[w.input].input));
  if (r.global_w) kv.set("witness.w", r.global_w->str());
  if (r.counterexample) {
    std::string c = "u=" + to_literal(r.counterexample->u);
    if (r.counterexample->x) c += "; x=" + to_literal(*r.counterexample->x);
    c += "; " + r.counterexample->reason;
    kv.set("counterexample", c);
  }
  return kv;
}

inline KvReport to_kv(const SystemTable& f, const SystemTable& lim) {
  KvReport kv;
  for (std::size_t i = 0; i < lim.size(); ++i) {
    std::string vals;
    for (const auto& x : lim.entries()[i].states) vals += (vals.empty() ? "" : ",") + x.initial().str();
    kv.set("lim.u" + std::to_string(i), vals);
  }
  (void)f;
  return kv;
}

inline void add_steps(KvReport& kv, const std::vector<SyncStep>& steps) {
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string p = "cert.step." + std::to_string(k);
    kv.set(p + ".kind", std::string(1, steps[k].kind));
    kv.set(p + ".from", steps[k].w.str());
    kv.set(p + ".w", steps[k].w2.str());
    kv.set(p + ".t", steps[k].hi.str());
    kv.set(p + ".lo", steps[k].lo.str());
  }
}

inline KvReport to_kv(const FundamentalModeCert& c) {
  KvReport kv;
  add_steps(kv, c.steps);
  kv.set("cert.t0", c.cuts.front().str());
  kv.set("cert.tail.step", c.tail_step.str());
  return kv;
}

inline KvReport to_kv(const SplicedRun& r) {
  KvReport kv;
  add_steps(kv, r.steps);
  kv.set("cert.t0", r.cuts.front().str());
  kv.set("cert.w0", r.values.front().str());
  kv.set("input", to_literal(r.u));
  return kv;
}

inline KvReport to_kv(const ControllabilityReport& r) {
  KvReport kv;
  kv.set("c1", r.c1);
  kv.set("c2", r.c2);
  for (const auto& w : r.reach) {
    kv.set("reach." + w.w.str() + ".u", to_literal(w.u));
    kv.set("reach." + w.w.str() + ".tf", w.tf.str());
  }
  std::string miss;
  for (const auto& w : r.unreachable) miss += (miss.empty() ? "" : ",") + w.str();
  if (!miss.empty()) kv.set("unreachable", miss);
  kv.set("retarget.count", r.retarget.size());
  if (r.blocked)
    kv.set("blocked", "w=" + r.blocked->first.w.str() + "; u=" + to_literal(r.blocked->first.u) +
                          "; tf=" + r.blocked->first.tf.str() + "; target=" + r.blocked->second.str());
  return kv;
}

}  // namespace asyncsys
