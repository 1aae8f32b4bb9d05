#pragma once

// Time-bounded breadth-first exploration of a TimedTransitionSystem, used
// both for timed search and for building the Kripke structure handed to the
// LTL checker.

#include "rtlha/kripke.hpp"
#include "rtlha/rational.hpp"
#include "rtlha/system.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace rtlha {

using Bindings = std::map<std::string, std::string>;

template <class State>
struct TimedState {
  State state;
  Time elapsed;
};

/// One step of a recorded path: the rule fired and the canonical key of the
/// state it led to.
struct PathStep {
  std::string label;
  std::string key;
};

template <class State>
struct Solution {
  TimedState<State> timed;
  Bindings bindings;
  std::vector<PathStep> path;  // from the initial state
};

struct ExploreOptions {
  Time time_bound;
  Time increment;
};

namespace detail {

template <class State>
struct Node {
  State state;
  Time elapsed;
  std::string key;
  std::size_t parent;  // == self for the root
  std::string via;
};

struct Transition {
  std::size_t from;
  std::size_t to;
  std::string label;
  Time duration;
};

template <class State>
struct Exploration {
  std::vector<Node<State>> nodes;
  std::vector<Transition> transitions;
};

inline void check_options(const ExploreOptions& opt) {
  if (opt.increment.is_zero()) throw std::invalid_argument("increment must be > 0");
  if (opt.time_bound.is_zero()) throw std::invalid_argument("time bound must be > 0");
}

/// Discrete successors first (duration 0), then one tick of exactly
/// `increment`, taken only while elapsed + increment < time_bound.
template <TimedTransitionSystem M>
Exploration<typename M::State> explore(const M& model, const ExploreOptions& opt) {
  check_options(opt);
  Exploration<typename M::State> ex;
  std::unordered_map<std::string, std::size_t> index;

  auto visit = [&](typename M::State s, Time elapsed, std::size_t parent, std::string via) -> std::size_t {
    std::string key = model.serialize(s);
    std::string id = key + "@" + elapsed.str();
    auto [it, fresh] = index.try_emplace(std::move(id), ex.nodes.size());
    if (fresh) {
      std::size_t self = ex.nodes.size();
      ex.nodes.push_back({std::move(s), std::move(elapsed), std::move(key), parent == SIZE_MAX ? self : parent,
                          std::move(via)});
    }
    return it->second;
  };

  visit(model.initial(), Time(0), SIZE_MAX, "");
  for (std::size_t i = 0; i < ex.nodes.size(); ++i) {
    // copies: ex.nodes may reallocate while visiting
    auto state = ex.nodes[i].state;
    auto elapsed = ex.nodes[i].elapsed;
    for (auto& step : model.discrete_successors(state)) {
      std::size_t to = visit(std::move(step.state), elapsed, i, step.label);
      ex.transitions.push_back({i, to, step.label, Time(0)});
    }
    Time later = elapsed + opt.increment;
    if (later < opt.time_bound) {
      if (auto next = model.timed_successor(state, opt.increment)) {
        std::size_t to = visit(std::move(*next), later, i, kTickLabel);
        ex.transitions.push_back({i, to, kTickLabel, opt.increment});
      }
    }
  }
  return ex;
}

template <class State>
std::vector<PathStep> path_to(const Exploration<State>& ex, std::size_t i) {
  std::vector<PathStep> path;
  while (ex.nodes[i].parent != i) {
    path.push_back({ex.nodes[i].via, ex.nodes[i].key});
    i = ex.nodes[i].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

/// Timed reachability search. `match` maps a state to bindings, or nullopt
/// when the state does not match. Results are ordered by elapsed time, then
/// by discovery order.
template <TimedTransitionSystem M, class Matcher>
std::vector<Solution<typename M::State>> search(const M& model, Matcher&& match, const ExploreOptions& opt) {
  auto ex = detail::explore(model, opt);
  std::vector<std::size_t> order(ex.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ex.nodes[a].elapsed < ex.nodes[b].elapsed; });
  std::vector<Solution<typename M::State>> out;
  for (auto i : order) {
    std::optional<Bindings> b = match(ex.nodes[i].state);
    if (!b) continue;
    out.push_back({{ex.nodes[i].state, ex.nodes[i].elapsed}, std::move(*b), detail::path_to(ex, i)});
  }
  return out;
}

template <TimedTransitionSystem M>
Kripke build_kripke(const M& model, const ExploreOptions& opt) {
  auto ex = detail::explore(model, opt);
  Kripke k;
  k.propositions = model.propositions();
  validate_propositions(k.propositions);
  for (const auto& n : ex.nodes) {
    KripkeState ks{n.key, model.render(n.state), model.state_json(n.state), n.elapsed, {}};
    for (const auto& p : k.propositions)
      if (model.holds(n.state, p)) ks.labels.insert(p);
    k.add_state(std::move(ks));
  }
  for (const auto& t : ex.transitions) k.add_edge({t.from, t.to, t.label, t.duration});
  k.totalize();
  return k;
}

/// Number of distinct timed states reachable within the bound.
template <TimedTransitionSystem M>
std::size_t count_reachable(const M& model, const ExploreOptions& opt) {
  return detail::explore(model, opt).nodes.size();
}

}  // namespace rtlha
