#pragma once

#include "rtlha/rational.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <concepts>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rtlha {

using json = nlohmann::json;

/// One instantaneous step: the rule that fired and the state it produced.
template <class State>
struct Step {
  std::string label;
  State state;
};

/// Contract shared by every model the exploration engine can drive.
///
/// Discrete successors must come back in a fixed order (by rule label, then
/// by the model's canonical state order) so that exploration is repeatable.
/// `timed_successor(s, 0)` returns `s` whenever time may pass at `s`.
/// `serialize` is the canonical key: equal strings iff equal states.
template <class M>
concept TimedTransitionSystem = requires(const M& m, const typename M::State& s, const Time& d,
                                         const std::string& p) {
  { m.initial() } -> std::convertible_to<typename M::State>;
  { m.discrete_successors(s) } -> std::convertible_to<std::vector<Step<typename M::State>>>;
  { m.timed_successor(s, d) } -> std::convertible_to<std::optional<typename M::State>>;
  { m.propositions() } -> std::convertible_to<std::vector<std::string>>;
  { m.holds(s, p) } -> std::convertible_to<bool>;
  { m.serialize(s) } -> std::convertible_to<std::string>;
  { m.render(s) } -> std::convertible_to<std::string>;
  { m.state_json(s) } -> std::convertible_to<json>;
};

/// Checks a proposition set: names nonempty and pairwise distinct.
inline void validate_propositions(const std::vector<std::string>& props) {
  std::set<std::string> seen;
  for (const auto& p : props) {
    if (p.empty()) throw ModelError("empty proposition name");
    if (!seen.insert(p).second) throw ModelError("duplicate proposition '" + p + "'");
  }
}

/// Reads a rational from a JSON string (`"p"`, `"-p"`, `"p/q"`) or integer.
inline Rat rat_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Rat::parse(j.get<std::string>());
    } catch (const ModelError& e) {
      throw ModelError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
  throw ModelError(where + ": expected a rational, got " + j.dump());
}

inline json rat_to_json(const Rat& r) { return r.str(); }

/// Fetches a required member of a JSON object, naming the path on failure.
inline const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ModelError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ModelError(where + ": missing field '" + key + "'");
  return *it;
}

template <class State>
void sort_steps(std::vector<Step<State>>& steps, auto&& state_less) {
  std::stable_sort(steps.begin(), steps.end(), [&](const Step<State>& a, const Step<State>& b) {
    if (a.label != b.label) return a.label < b.label;
    return state_less(a.state, b.state);
  });
}

}  // namespace rtlha
