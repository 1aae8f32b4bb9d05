#pragma once

// Synchronous product of finite labeled transition systems. Rules that share
// a label fire jointly; the others interleave. Every admitted step must land
// in a pair of states that agree on all propositions both sides declare.

#include "rtlha/rational.hpp"
#include "rtlha/system.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rtlha {

struct Rule {
  std::string label;
  std::string from;
  std::string to;
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct TickRule {
  std::string from;
  std::string to;
  Time duration;
  friend bool operator==(const TickRule&, const TickRule&) = default;
};

struct Component {
  std::vector<std::string> states;
  std::string initial;
  std::vector<Rule> rules;
  std::vector<std::string> props;
  std::map<std::string, std::set<std::string>> holds_at;  // prop -> states
  /// For product states: the pair of component states it was built from.
  std::map<std::string, std::pair<std::string, std::string>> factors;

  bool has_state(const std::string& s) const { return std::find(states.begin(), states.end(), s) != states.end(); }
  bool has_prop(const std::string& p) const { return std::find(props.begin(), props.end(), p) != props.end(); }

  bool valuation(const std::string& s, const std::string& p) const {
    auto it = holds_at.find(p);
    if (!has_prop(p)) throw ModelError("unknown proposition '" + p + "'");
    return it != holds_at.end() && it->second.contains(s);
  }

  std::set<std::string> labels() const {
    std::set<std::string> out;
    for (const auto& r : rules) out.insert(r.label);
    return out;
  }

  void validate() const {
    std::set<std::string> seen;
    for (const auto& s : states) {
      if (s.empty()) throw ModelError("component: empty state name");
      if (!seen.insert(s).second) throw ModelError("component: duplicate state '" + s + "'");
    }
    if (!seen.contains(initial)) throw ModelError("component: initial state '" + initial + "' is not a state");
    for (const auto& r : rules) {
      if (r.label.empty()) throw ModelError("component: rule with empty label");
      if (!seen.contains(r.from) || !seen.contains(r.to))
        throw ModelError("component: rule " + r.label + " (" + r.from + " -> " + r.to + ") uses an unknown state");
    }
    validate_propositions(props);
    for (const auto& [p, at] : holds_at) {
      if (!has_prop(p)) throw ModelError("component: valuation for undeclared proposition '" + p + "'");
      for (const auto& s : at)
        if (!seen.contains(s)) throw ModelError("component: proposition " + p + " holds at unknown state '" + s + "'");
    }
  }

  friend bool operator==(const Component&, const Component&) = default;
};

struct TimedComponent {
  Component base;
  std::vector<TickRule> ticks;

  void validate() const {
    base.validate();
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& t : ticks) {
      if (!base.has_state(t.from) || !base.has_state(t.to))
        throw ModelError("component: tick (" + t.from + " -> " + t.to + ") uses an unknown state");
      if (t.duration.is_zero()) throw ModelError("component: tick (" + t.from + " -> " + t.to + ") has duration 0");
      if (!seen.insert({t.from, t.duration.str()}).second)
        throw ModelError("component: two ticks of duration " + t.duration.str() + " leave state '" + t.from + "'");
    }
  }

  friend bool operator==(const TimedComponent&, const TimedComponent&) = default;
};

inline std::vector<std::string> shared_props(const Component& c1, const Component& c2) {
  std::vector<std::string> out;
  for (const auto& p : c1.props)
    if (c2.has_prop(p)) out.push_back(p);
  return out;
}

/// Both states agree on every proposition in `shared`.
inline bool compatible(const Component& c1, const std::string& s1, const Component& c2, const std::string& s2,
                       const std::vector<std::string>& shared) {
  for (const auto& p : shared)
    if (c1.valuation(s1, p) != c2.valuation(s2, p)) return false;
  return true;
}

inline bool compatible(const Component& c1, const std::string& s1, const Component& c2, const std::string& s2) {
  return compatible(c1, s1, c2, s2, shared_props(c1, c2));
}

inline std::string product_state(const std::string& s1, const std::string& s2) { return "< " + s1 + "," + s2 + " >"; }

inline Component sync_product(const Component& c1, const Component& c2) {
  const auto shared = shared_props(c1, c2);
  auto ok = [&](const std::string& s1, const std::string& s2) { return compatible(c1, s1, c2, s2, shared); };

  Component p;
  for (const auto& s1 : c1.states)
    for (const auto& s2 : c2.states) {
      auto name = product_state(s1, s2);
      p.states.push_back(name);
      p.factors[name] = {s1, s2};
    }
  p.initial = product_state(c1.initial, c2.initial);

  const auto labels1 = c1.labels();
  const auto labels2 = c2.labels();
  for (const auto& r1 : c1.rules) {
    if (labels2.contains(r1.label)) {
      for (const auto& r2 : c2.rules)
        if (r2.label == r1.label && ok(r1.to, r2.to))
          p.rules.push_back({r1.label, product_state(r1.from, r2.from), product_state(r1.to, r2.to)});
    } else {
      for (const auto& x2 : c2.states)
        if (ok(r1.to, x2)) p.rules.push_back({r1.label, product_state(r1.from, x2), product_state(r1.to, x2)});
    }
  }
  for (const auto& r2 : c2.rules) {
    if (labels1.contains(r2.label)) continue;
    for (const auto& x1 : c1.states)
      if (ok(x1, r2.to)) p.rules.push_back({r2.label, product_state(x1, r2.from), product_state(x1, r2.to)});
  }

  // Shared propositions are read from the left; compatible states agree.
  for (const auto& prop : c1.props) {
    p.props.push_back(prop);
    auto& at = p.holds_at[prop];
    for (const auto& [name, pair] : p.factors)
      if (c1.valuation(pair.first, prop)) at.insert(name);
  }
  for (const auto& prop : c2.props) {
    if (c1.has_prop(prop)) continue;
    p.props.push_back(prop);
    auto& at = p.holds_at[prop];
    for (const auto& [name, pair] : p.factors)
      if (c2.valuation(pair.second, prop)) at.insert(name);
  }
  return p;
}

/// Instantaneous rules as in `sync_product`; ticks pair up only with equal
/// durations and only between compatible endpoints.
inline TimedComponent rt_sync_product(const TimedComponent& c1, const TimedComponent& c2) {
  TimedComponent p{sync_product(c1.base, c2.base), {}};
  const auto shared = shared_props(c1.base, c2.base);
  for (const auto& t1 : c1.ticks)
    for (const auto& t2 : c2.ticks) {
      if (t1.duration != t2.duration) continue;
      if (!compatible(c1.base, t1.from, c2.base, t2.from, shared)) continue;
      if (!compatible(c1.base, t1.to, c2.base, t2.to, shared)) continue;
      p.ticks.push_back({product_state(t1.from, t2.from), product_state(t1.to, t2.to), t1.duration});
    }
  return p;
}

/// Left-nested product ((c1 || c2) || c3) ...
inline TimedComponent rt_sync_product(const std::vector<TimedComponent>& cs) {
  if (cs.empty()) throw ModelError("product of no components");
  TimedComponent acc = cs.front();
  for (std::size_t i = 1; i < cs.size(); ++i) acc = rt_sync_product(acc, cs[i]);
  return acc;
}

/// Reservoir i as a two-state component: the clock may push it from ok to
/// below, refilling brings it back.
inline Component abstract_reservoir(int i) {
  if (i < 1) throw ModelError("abstract_reservoir: index must be >= 1");
  const auto n = std::to_string(i);
  Component c;
  c.states = {"below", "ok"};
  c.initial = "ok";
  c.rules = {{"tick", "ok", "below"}, {"fill" + n, "below", "ok"}};
  c.props = {"refill" + n + "?"};
  c.holds_at["refill" + n + "?"] = {"below"};
  return c;
}

inline constexpr const char* kSafe = "safe";

/// Adds `safe`, true where not every one of `refill_props` holds.
inline Component safe_prop(Component product, const std::vector<std::string>& refill_props = {"refill1?", "refill2?"}) {
  for (const auto& p : refill_props)
    if (!product.has_prop(p)) throw ModelError("safe: product does not expose '" + p + "'");
  if (product.has_prop(kSafe)) throw ModelError("safe: proposition already defined");
  auto& at = product.holds_at[kSafe];
  for (const auto& s : product.states) {
    bool all = std::all_of(refill_props.begin(), refill_props.end(),
                           [&](const std::string& p) { return product.valuation(s, p); });
    if (!all) at.insert(s);
  }
  product.props.push_back(kSafe);
  return product;
}

/// A timed component driven through the TimedTransitionSystem contract.
class ComponentSystem {
public:
  using State = std::string;

  explicit ComponentSystem(TimedComponent c) : c_(std::move(c)) { c_.validate(); }
  explicit ComponentSystem(Component c) : ComponentSystem(TimedComponent{std::move(c), {}}) {}

  const TimedComponent& component() const { return c_; }

  std::string initial() const { return c_.base.initial; }

  std::vector<Step<std::string>> discrete_successors(const std::string& s) const {
    std::vector<Step<std::string>> out;
    for (const auto& r : c_.base.rules)
      if (r.from == s) out.push_back({r.label, r.to});
    sort_steps(out, std::less<std::string>{});
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) { return a.label == b.label && a.state == b.state; }),
              out.end());
    return out;
  }

  std::optional<std::string> timed_successor(const std::string& s, const Time& d) const {
    if (d.is_zero()) return s;
    for (const auto& t : c_.ticks)
      if (t.from == s && t.duration == d) return t.to;
    return std::nullopt;
  }

  std::vector<std::string> propositions() const { return c_.base.props; }
  bool holds(const std::string& s, const std::string& p) const { return c_.base.valuation(s, p); }
  std::string serialize(const std::string& s) const { return s; }
  std::string render(const std::string& s) const { return s; }
  json state_json(const std::string& s) const { return s; }

private:
  TimedComponent c_;
};

// JSON

inline TimedComponent component_from_json(const json& j) {
  auto strings = [](const json& arr, const std::string& where) {
    if (!arr.is_array()) throw ModelError(where + ": expected an array");
    std::vector<std::string> out;
    for (const auto& s : arr) {
      if (!s.is_string()) throw ModelError(where + ": expected strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  };
  auto str = [](const json& v, const std::string& where) {
    if (!v.is_string()) throw ModelError(where + ": expected a string");
    return v.get<std::string>();
  };

  TimedComponent c;
  c.base.states = strings(require(j, "states", "component"), "component.states");
  c.base.initial = str(require(j, "initial", "component"), "component.initial");
  if (j.contains("rules")) {
    const auto& jr = j.at("rules");
    if (!jr.is_array()) throw ModelError("component.rules: expected an array");
    for (std::size_t i = 0; i < jr.size(); ++i) {
      std::string where = "component.rules[" + std::to_string(i) + "]";
      c.base.rules.push_back({str(require(jr[i], "label", where), where + ".label"),
                              str(require(jr[i], "from", where), where + ".from"),
                              str(require(jr[i], "to", where), where + ".to")});
    }
  }
  if (j.contains("ticks")) {
    const auto& jt = j.at("ticks");
    if (!jt.is_array()) throw ModelError("component.ticks: expected an array");
    for (std::size_t i = 0; i < jt.size(); ++i) {
      std::string where = "component.ticks[" + std::to_string(i) + "]";
      Rat d = rat_from_json(require(jt[i], "duration", where), where + ".duration");
      if (d.sign() <= 0) throw ModelError(where + ".duration: must be > 0");
      c.ticks.push_back({str(require(jt[i], "from", where), where + ".from"),
                         str(require(jt[i], "to", where), where + ".to"), Time(d)});
    }
  }
  if (j.contains("props")) {
    const auto& jp = j.at("props");
    if (!jp.is_array()) throw ModelError("component.props: expected an array");
    for (std::size_t i = 0; i < jp.size(); ++i) {
      std::string where = "component.props[" + std::to_string(i) + "]";
      auto name = str(require(jp[i], "name", where), where + ".name");
      c.base.props.push_back(name);
      auto at = jp[i].contains("holds_at") ? strings(jp[i].at("holds_at"), where + ".holds_at")
                                           : std::vector<std::string>{};
      c.base.holds_at[name].insert(at.begin(), at.end());
    }
  }
  c.validate();
  return c;
}

inline json to_json(const TimedComponent& c) {
  json rules = json::array();
  for (const auto& r : c.base.rules) rules.push_back(json{{"label", r.label}, {"from", r.from}, {"to", r.to}});
  json ticks = json::array();
  for (const auto& t : c.ticks) ticks.push_back(json{{"from", t.from}, {"to", t.to}, {"duration", t.duration.str()}});
  json props = json::array();
  for (const auto& p : c.base.props) {
    auto it = c.base.holds_at.find(p);
    std::vector<std::string> at;
    if (it != c.base.holds_at.end()) at.assign(it->second.begin(), it->second.end());
    props.push_back(json{{"name", p}, {"holds_at", at}});
  }
  return json{{"kind", "component"}, {"states", c.base.states}, {"initial", c.base.initial},
              {"rules", rules},      {"ticks", ticks},            {"props", props}};
}

}  // namespace rtlha
