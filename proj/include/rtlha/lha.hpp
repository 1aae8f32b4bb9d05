#pragma once

// Linear hybrid automata with constant-rate flows, affine guards, invariants
// and resets, driven through the TimedTransitionSystem contract.

#include "rtlha/rational.hpp"
#include "rtlha/system.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace rtlha {

using Valuation = std::map<std::string, Rat>;

/// constant + sum of coeff * var. Zero coefficients may be left out.
struct AffineExpr {
  std::map<std::string, Rat> coeffs;
  Rat constant{0};

  static AffineExpr var(const std::string& name, Rat coeff = 1) { return AffineExpr{{{name, coeff}}, 0}; }
  static AffineExpr constant_of(Rat c) { return AffineExpr{{}, std::move(c)}; }

  friend AffineExpr operator-(AffineExpr e, const Rat& c) {
    e.constant -= c;
    return e;
  }
  friend bool operator==(const AffineExpr&, const AffineExpr&) = default;
};

enum class Relation { Less, LessEq, Equal, GreaterEq, Greater };

inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::Less: return "<";
    case Relation::LessEq: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEq: return ">=";
    case Relation::Greater: return ">";
  }
  return "?";
}

inline Relation parse_relation(const std::string& text) {
  if (text == "<") return Relation::Less;
  if (text == "<=") return Relation::LessEq;
  if (text == "=") return Relation::Equal;
  if (text == ">=") return Relation::GreaterEq;
  if (text == ">") return Relation::Greater;
  throw ModelError("unknown relation '" + text + "'");
}

/// `expr ~ 0`.
struct AffineConstraint {
  AffineExpr expr;
  Relation rel;
  friend bool operator==(const AffineConstraint&, const AffineConstraint&) = default;
};

struct Assignment {
  std::string target;
  AffineExpr value;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Location {
  std::string name;
  std::map<std::string, Rat> rates;
  std::vector<AffineConstraint> invariant;
  /// Must hold at the start of any time step taken in this location.
  std::vector<AffineConstraint> flow_guard;
  friend bool operator==(const Location&, const Location&) = default;
};

struct Edge {
  std::string source;
  std::string target;
  std::string label;
  std::vector<AffineConstraint> guard;
  std::vector<Assignment> assignments;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct LhaState {
  std::string location;
  Valuation valuation;
  friend bool operator==(const LhaState&, const LhaState&) = default;
};

inline std::string to_string(const AffineExpr& e) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [var, c] : e.coeffs) {
    if (c.is_zero()) continue;
    if (first) {
      if (c == Rat(-1)) os << "-";
      else if (c != Rat(1)) os << c << "*";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
      Rat abs = c.sign() < 0 ? -c : c;
      if (abs != Rat(1)) os << abs << "*";
    }
    os << var;
    first = false;
  }
  if (first) {
    os << e.constant;
  } else if (!e.constant.is_zero()) {
    os << (e.constant.sign() < 0 ? " - " : " + ") << (e.constant.sign() < 0 ? -e.constant : e.constant);
  }
  return os.str();
}

inline std::string to_string(const AffineConstraint& c) { return to_string(c.expr) + " " + to_string(c.rel) + " 0"; }

inline Rat eval_affine(const AffineExpr& expr, const Valuation& valuation) {
  Rat sum = expr.constant;
  for (const auto& [var, c] : expr.coeffs) {
    if (c.is_zero()) continue;
    auto it = valuation.find(var);
    if (it == valuation.end()) throw ModelError("unknown variable '" + var + "'");
    sum += c * it->second;
  }
  return sum;
}

inline bool holds(const AffineConstraint& c, const Valuation& valuation) {
  int s = eval_affine(c.expr, valuation).sign();
  switch (c.rel) {
    case Relation::Less: return s < 0;
    case Relation::LessEq: return s <= 0;
    case Relation::Equal: return s == 0;
    case Relation::GreaterEq: return s >= 0;
    case Relation::Greater: return s > 0;
  }
  return false;
}

inline bool holds_all(const std::vector<AffineConstraint>& cs, const Valuation& valuation) {
  for (const auto& c : cs)
    if (!holds(c, valuation)) return false;
  return true;
}

/// valuation + delta * rates, exactly.
inline Valuation flow(const Location& loc, const Valuation& valuation, const Time& delta) {
  Valuation out = valuation;
  for (auto& [var, value] : out) {
    auto it = loc.rates.find(var);
    if (it != loc.rates.end()) value += delta.value() * it->second;
  }
  return out;
}

class Lha {
public:
  using State = LhaState;

  Lha(std::vector<std::string> variables, std::vector<Location> locations, std::vector<Edge> edges,
      LhaState initial)
      : variables_(std::move(variables)),
        locations_(std::move(locations)),
        edges_(std::move(edges)),
        initial_(std::move(initial)) {
    validate();
  }

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<Location>& locations() const { return locations_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Location& location(const std::string& name) const {
    for (const auto& l : locations_)
      if (l.name == name) return l;
    throw ModelError("unknown location '" + name + "'");
  }

  // TimedTransitionSystem

  LhaState initial() const { return initial_; }

  /// Endpoint checks suffice: along a straight-line trajectory an affine
  /// constraint holds on [0, delta] iff it holds at both ends.
  std::optional<LhaState> timed_successor(const LhaState& s, const Time& delta) const {
    if (delta.is_zero()) return s;
    const Location& loc = location(s.location);
    if (!holds_all(loc.flow_guard, s.valuation) || !holds_all(loc.invariant, s.valuation)) return std::nullopt;
    LhaState next{s.location, flow(loc, s.valuation, delta)};
    if (!holds_all(loc.invariant, next.valuation)) return std::nullopt;
    return next;
  }

  std::vector<Step<LhaState>> discrete_successors(const LhaState& s) const {
    std::vector<Step<LhaState>> out;
    for (const auto& e : edges_) {
      if (e.source != s.location || !holds_all(e.guard, s.valuation)) continue;
      LhaState next{e.target, s.valuation};
      for (const auto& a : e.assignments) next.valuation[a.target] = eval_affine(a.value, s.valuation);
      if (!holds_all(location(e.target).invariant, next.valuation)) continue;
      out.push_back({e.label, std::move(next)});
    }
    sort_steps(out, [this](const LhaState& a, const LhaState& b) { return less(a, b); });
    return out;
  }

  /// Location names double as propositions: `q` holds exactly at location q.
  std::vector<std::string> propositions() const {
    std::vector<std::string> out;
    for (const auto& l : locations_) out.push_back(l.name);
    return out;
  }

  bool holds(const LhaState& s, const std::string& prop) const {
    location(prop);
    return s.location == prop;
  }

  std::string serialize(const LhaState& s) const {
    std::string out = s.location;
    for (const auto& v : variables_) out += "|" + s.valuation.at(v).str();
    return out;
  }

  std::string render(const LhaState& s) const {
    std::string out = s.location;
    for (const auto& v : variables_) out += ", " + v + ": " + s.valuation.at(v).str();
    return out;
  }

  json state_json(const LhaState& s) const {
    json val = json::object();
    for (const auto& v : variables_) val[v] = s.valuation.at(v).str();
    return json{{"location", s.location}, {"valuation", val}};
  }

  bool less(const LhaState& a, const LhaState& b) const {
    if (a.location != b.location) return a.location < b.location;
    for (const auto& v : variables_) {
      const auto& x = a.valuation.at(v);
      const auto& y = b.valuation.at(v);
      if (x != y) return x < y;
    }
    return false;
  }

  friend bool operator==(const Lha&, const Lha&) = default;

private:
  void check_vars(const AffineExpr& e, const std::string& where) const {
    for (const auto& [var, c] : e.coeffs)
      if (!declared_.contains(var)) throw ModelError(where + ": undeclared variable '" + var + "'");
  }

  void validate() {
    for (const auto& v : variables_) {
      if (v.empty()) throw ModelError("empty variable name");
      if (!declared_.insert(v).second) throw ModelError("duplicate variable '" + v + "'");
    }
    std::set<std::string> names;
    for (auto& loc : locations_) {
      if (!names.insert(loc.name).second) throw ModelError("duplicate location '" + loc.name + "'");
      for (const auto& [var, r] : loc.rates)
        if (!declared_.contains(var)) throw ModelError("location " + loc.name + ": rate for undeclared variable '" + var + "'");
      for (const auto& v : variables_) loc.rates.try_emplace(v, Rat(0));
      for (const auto& c : loc.invariant) check_vars(c.expr, "location " + loc.name + " invariant");
      for (const auto& c : loc.flow_guard) check_vars(c.expr, "location " + loc.name + " flow guard");
    }
    for (const auto& e : edges_) {
      std::string where = "edge " + e.label + " (" + e.source + " -> " + e.target + ")";
      if (!names.contains(e.source)) throw ModelError(where + ": unknown source location");
      if (!names.contains(e.target)) throw ModelError(where + ": unknown target location");
      for (const auto& c : e.guard) check_vars(c.expr, where + " guard");
      std::set<std::string> assigned;
      for (const auto& a : e.assignments) {
        if (!declared_.contains(a.target)) throw ModelError(where + ": assignment to undeclared variable '" + a.target + "'");
        if (!assigned.insert(a.target).second) throw ModelError(where + ": variable '" + a.target + "' assigned twice");
        check_vars(a.value, where + " assignment");
      }
    }
    if (!names.contains(initial_.location)) throw ModelError("initial location '" + initial_.location + "' does not exist");
    for (const auto& [var, value] : initial_.valuation)
      if (!declared_.contains(var)) throw ModelError("initial valuation: undeclared variable '" + var + "'");
    for (const auto& v : variables_)
      if (!initial_.valuation.contains(v)) throw ModelError("initial valuation: missing variable '" + v + "'");
    for (const auto& c : location(initial_.location).invariant)
      if (!rtlha::holds(c, initial_.valuation))
        throw ModelError("initial valuation violates invariant " + to_string(c));
  }

  std::vector<std::string> variables_;
  std::vector<Location> locations_;
  std::vector<Edge> edges_;
  LhaState initial_;
  std::set<std::string> declared_;
};

inline std::optional<LhaState> timed_successor(const Lha& lha, const LhaState& s, const Time& delta) {
  return lha.timed_successor(s, delta);
}

inline std::vector<Step<LhaState>> discrete_successors(const Lha& lha, const LhaState& s) {
  return lha.discrete_successors(s);
}

/// The two-reservoir automaton. q1 has the hose over reservoir 1, q2 over
/// reservoir 2. Time may pass in q1 only while x2 > r2 and in q2 only while
/// x1 > r1; every invariant also keeps both levels nonnegative.
inline Lha two_reservoir(const Rat& w, const Rat& v1, const Rat& v2, const Rat& r1, const Rat& r2, const Rat& x1,
                         const Rat& x2, const std::string& initial_location = "q1") {
  const std::pair<const char*, const Rat*> args[] = {{"w", &w},   {"v1", &v1}, {"v2", &v2}, {"r1", &r1},
                                                     {"r2", &r2}, {"x1", &x1}, {"x2", &x2}};
  for (const auto& [name, value] : args)
    if (value->sign() < 0) throw ModelError(std::string("two_reservoir: ") + name + " must be >= 0");
  if (x1 < r1) throw ModelError("two_reservoir: initial levels violate x1 >= r1");
  if (x2 < r2) throw ModelError("two_reservoir: initial levels violate x2 >= r2");

  auto x1_e = AffineExpr::var("x1");
  auto x2_e = AffineExpr::var("x2");
  const AffineConstraint nonneg1{x1_e, Relation::GreaterEq};
  const AffineConstraint nonneg2{x2_e, Relation::GreaterEq};
  const std::vector<Assignment> keep{{"x1", x1_e}, {"x2", x2_e}};

  Location q1{"q1",
              {{"x1", w - v1}, {"x2", -v2}},
              {{x2_e - r2, Relation::GreaterEq}, nonneg1, nonneg2},
              {{x2_e - r2, Relation::Greater}}};
  Location q2{"q2",
              {{"x1", -v1}, {"x2", w - v2}},
              {{x1_e - r1, Relation::GreaterEq}, nonneg1, nonneg2},
              {{x1_e - r1, Relation::Greater}}};
  std::vector<Edge> edges{
      {"q1", "q2", "moveright", {{x2_e - r2, Relation::LessEq}}, keep},
      {"q2", "q1", "moveleft", {{x1_e - r1, Relation::LessEq}}, keep},
  };
  return Lha({"x1", "x2"}, {q1, q2}, std::move(edges), LhaState{initial_location, {{"x1", x1}, {"x2", x2}}});
}

// JSON

inline AffineExpr affine_from_json(const json& j, const std::string& where) {
  AffineExpr e;
  if (j.contains("coeffs")) {
    const auto& cs = j.at("coeffs");
    if (!cs.is_object()) throw ModelError(where + ".coeffs: expected an object");
    for (const auto& [var, c] : cs.items()) e.coeffs[var] = rat_from_json(c, where + ".coeffs." + var);
  }
  if (j.contains("const")) e.constant = rat_from_json(j.at("const"), where + ".const");
  return e;
}

inline json affine_to_json(const AffineExpr& e) {
  json cs = json::object();
  for (const auto& [var, c] : e.coeffs) cs[var] = c.str();
  return json{{"coeffs", cs}, {"const", e.constant.str()}};
}

inline AffineConstraint constraint_from_json(const json& j, const std::string& where) {
  AffineConstraint c{affine_from_json(require(j, "expr", where), where + ".expr"), Relation::Equal};
  const auto& rel = require(j, "rel", where);
  if (!rel.is_string()) throw ModelError(where + ".rel: expected a string");
  try {
    c.rel = parse_relation(rel.get<std::string>());
  } catch (const ModelError& e) {
    throw ModelError(where + ".rel: " + e.what());
  }
  return c;
}

inline json constraint_to_json(const AffineConstraint& c) {
  return json{{"expr", affine_to_json(c.expr)}, {"rel", to_string(c.rel)}};
}

inline std::vector<AffineConstraint> constraints_from_json(const json& j, const std::string& where) {
  std::vector<AffineConstraint> out;
  if (!j.is_array()) throw ModelError(where + ": expected an array");
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(constraint_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline json constraints_to_json(const std::vector<AffineConstraint>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(constraint_to_json(c));
  return out;
}

inline Lha lha_from_json(const json& j) {
  std::vector<std::string> vars;
  const auto& jv = require(j, "variables", "lha");
  if (!jv.is_array()) throw ModelError("lha.variables: expected an array");
  for (const auto& v : jv) {
    if (!v.is_string()) throw ModelError("lha.variables: expected strings");
    vars.push_back(v.get<std::string>());
  }

  std::vector<Location> locs;
  const auto& jl = require(j, "locations", "lha");
  if (!jl.is_array()) throw ModelError("lha.locations: expected an array");
  for (std::size_t i = 0; i < jl.size(); ++i) {
    std::string where = "lha.locations[" + std::to_string(i) + "]";
    Location loc;
    loc.name = require(jl[i], "name", where).get<std::string>();
    if (jl[i].contains("rates"))
      for (const auto& [var, r] : jl[i].at("rates").items()) loc.rates[var] = rat_from_json(r, where + ".rates." + var);
    if (jl[i].contains("invariant")) loc.invariant = constraints_from_json(jl[i].at("invariant"), where + ".invariant");
    if (jl[i].contains("flow_guard"))
      loc.flow_guard = constraints_from_json(jl[i].at("flow_guard"), where + ".flow_guard");
    locs.push_back(std::move(loc));
  }

  std::vector<Edge> edges;
  if (j.contains("edges")) {
    const auto& je = j.at("edges");
    if (!je.is_array()) throw ModelError("lha.edges: expected an array");
    for (std::size_t i = 0; i < je.size(); ++i) {
      std::string where = "lha.edges[" + std::to_string(i) + "]";
      Edge e;
      e.source = require(je[i], "from", where).get<std::string>();
      e.target = require(je[i], "to", where).get<std::string>();
      e.label = require(je[i], "label", where).get<std::string>();
      if (je[i].contains("guard")) e.guard = constraints_from_json(je[i].at("guard"), where + ".guard");
      if (je[i].contains("assign"))
        for (const auto& [var, ex] : je[i].at("assign").items())
          e.assignments.push_back({var, affine_from_json(ex, where + ".assign." + var)});
      edges.push_back(std::move(e));
    }
  }

  const auto& ji = require(j, "init", "lha");
  LhaState init;
  init.location = require(ji, "location", "lha.init").get<std::string>();
  for (const auto& [var, v] : require(ji, "valuation", "lha.init").items())
    init.valuation[var] = rat_from_json(v, "lha.init.valuation." + var);
  return Lha(std::move(vars), std::move(locs), std::move(edges), std::move(init));
}

inline json to_json(const Lha& lha) {
  json locs = json::array();
  for (const auto& l : lha.locations()) {
    json rates = json::object();
    for (const auto& [var, r] : l.rates) rates[var] = r.str();
    json jl{{"name", l.name}, {"rates", rates}, {"invariant", constraints_to_json(l.invariant)}};
    if (!l.flow_guard.empty()) jl["flow_guard"] = constraints_to_json(l.flow_guard);
    locs.push_back(std::move(jl));
  }
  json edges = json::array();
  for (const auto& e : lha.edges()) {
    json assign = json::object();
    for (const auto& a : e.assignments) assign[a.target] = affine_to_json(a.value);
    edges.push_back(json{{"from", e.source}, {"to", e.target}, {"label", e.label},
                         {"guard", constraints_to_json(e.guard)}, {"assign", assign}});
  }
  auto init = lha.state_json(lha.initial());
  return json{{"kind", "lha"}, {"variables", lha.variables()}, {"locations", locs}, {"edges", edges}, {"init", init}};
}

}  // namespace rtlha
