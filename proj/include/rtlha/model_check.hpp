#pragma once

// Automata-theoretic LTL model checking over a Kripke structure: product
// with the automaton for the negated property, nested depth-first search for
// an accepting lasso, projection back to Kripke states and rule labels.

#include "rtlha/buchi.hpp"
#include "rtlha/kripke.hpp"
#include "rtlha/ltl.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace rtlha {

/// A Kripke state and the label of the edge taken out of it.
struct TraceEntry {
  std::size_t state = 0;
  std::string label;
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Lasso-shaped run: prefix once, then cycle forever. The last cycle entry's
/// edge leads back to the first cycle entry.
struct Counterexample {
  std::vector<TraceEntry> prefix;
  std::vector<TraceEntry> cycle;
};

struct CheckResult {
  std::optional<Counterexample> counterexample;
  bool holds() const { return !counterexample; }
};

namespace detail {

class NestedDfs {
public:
  NestedDfs(const Kripke& k, const BuchiAutomaton& a) : k_(k), a_(a), out_(a.outgoing()) {
    nb_ = a.num_states;
    color_.assign(k.states.size() * nb_, Color::White);
    red_.assign(k.states.size() * nb_, false);
  }

  std::optional<Counterexample> run() {
    for (std::size_t b0 : a_.initial)
      for (auto t : out_[b0]) {
        const auto& tr = a_.transitions[t];
        if (!satisfies(k_.states[k_.initial].labels, tr.label)) continue;
        std::size_t p = id(k_.initial, tr.to);
        if (color_[p] != Color::White) continue;
        if (blue(p)) return project();
      }
    return std::nullopt;
  }

private:
  enum class Color { White, Cyan, Blue };

  struct Succ {
    std::size_t state;
    std::size_t edge;  // Kripke edge index
  };

  struct Frame {
    std::size_t state;
    std::size_t via;  // Kripke edge into this state, SIZE_MAX at the root
    std::vector<Succ> succ;
    std::size_t next = 0;
  };

  std::size_t id(std::size_t ks, std::size_t bs) const { return ks * nb_ + bs; }
  std::size_t kstate(std::size_t p) const { return p / nb_; }
  bool accepting(std::size_t p) const { return a_.accepting[p % nb_]; }

  std::vector<Succ> successors(std::size_t p) const {
    std::vector<Succ> out;
    std::size_t ks = kstate(p), bs = p % nb_;
    for (auto e : k_.out_edges(ks)) {
      std::size_t kt = k_.edges[e].to;
      for (auto t : out_[bs]) {
        const auto& tr = a_.transitions[t];
        if (satisfies(k_.states[kt].labels, tr.label)) out.push_back({id(kt, tr.to), e});
      }
    }
    return out;
  }

  bool blue(std::size_t root) {
    blue_stack_.push_back({root, SIZE_MAX, successors(root)});
    color_[root] = Color::Cyan;
    while (!blue_stack_.empty()) {
      Frame& f = blue_stack_.back();
      if (f.next < f.succ.size()) {
        Succ s = f.succ[f.next++];
        if (color_[s.state] == Color::Cyan && (accepting(f.state) || accepting(s.state))) {
          close_from_blue(s);
          return true;
        }
        if (color_[s.state] == Color::White) {
          color_[s.state] = Color::Cyan;
          blue_stack_.push_back({s.state, s.edge, successors(s.state)});
        }
        continue;
      }
      if (accepting(f.state) && red(f.state)) return true;
      color_[f.state] = Color::Blue;
      blue_stack_.pop_back();
    }
    return false;
  }

  bool red(std::size_t seed) {
    red_stack_.clear();
    red_stack_.push_back({seed, SIZE_MAX, successors(seed)});
    red_[seed] = true;
    while (!red_stack_.empty()) {
      Frame& f = red_stack_.back();
      if (f.next < f.succ.size()) {
        Succ s = f.succ[f.next++];
        if (color_[s.state] == Color::Cyan) {
          close_from_red(s);
          return true;
        }
        if (!red_[s.state]) {
          red_[s.state] = true;
          red_stack_.push_back({s.state, s.edge, successors(s.state)});
        }
        continue;
      }
      red_stack_.pop_back();
    }
    return false;
  }

  // The lasso as product states with the Kripke edge leaving each one.
  void close_from_blue(const Succ& back) {
    std::size_t i = position_on_blue(back.state);
    for (std::size_t j = 0; j < blue_stack_.size(); ++j) {
      std::size_t edge = j + 1 < blue_stack_.size() ? blue_stack_[j + 1].via : back.edge;
      (j < i ? prefix_ : cycle_).push_back({blue_stack_[j].state, edge});
    }
  }

  void close_from_red(const Succ& back) {
    std::size_t i = position_on_blue(back.state);
    for (std::size_t j = 0; j < blue_stack_.size(); ++j) {
      std::size_t edge = j + 1 < blue_stack_.size() ? blue_stack_[j + 1].via
                         : red_stack_.size() > 1   ? red_stack_[1].via
                                                   : back.edge;
      (j < i ? prefix_ : cycle_).push_back({blue_stack_[j].state, edge});
    }
    for (std::size_t j = 1; j < red_stack_.size(); ++j) {
      std::size_t edge = j + 1 < red_stack_.size() ? red_stack_[j + 1].via : back.edge;
      cycle_.push_back({red_stack_[j].state, edge});
    }
  }

  std::size_t position_on_blue(std::size_t p) const {
    for (std::size_t j = 0; j < blue_stack_.size(); ++j)
      if (blue_stack_[j].state == p) return j;
    throw std::logic_error("cycle target not on the search stack");
  }

  Counterexample project() const {
    Counterexample c;
    for (const auto& s : prefix_) c.prefix.push_back({kstate(s.state), k_.edges[s.edge].label});
    for (const auto& s : cycle_) c.cycle.push_back({kstate(s.state), k_.edges[s.edge].label});
    return c;
  }

  const Kripke& k_;
  const BuchiAutomaton& a_;
  std::vector<std::vector<std::size_t>> out_;
  std::size_t nb_ = 0;
  std::vector<Color> color_;
  std::vector<bool> red_;
  std::vector<Frame> blue_stack_;
  std::vector<Frame> red_stack_;
  std::vector<Succ> prefix_;
  std::vector<Succ> cycle_;
};

inline void check_propositions(const Kripke& k, const Formula& f) {
  std::set<std::string> used;
  f.collect_props(used);
  std::set<std::string> known(k.propositions.begin(), k.propositions.end());
  for (const auto& p : used)
    if (!known.contains(p)) throw ModelError("unknown proposition '" + p + "'");
}

}  // namespace detail

/// The lasso as a standalone Kripke structure: one state per trace entry.
inline Kripke lasso_kripke(const Kripke& k, const Counterexample& c) {
  Kripke lasso;
  lasso.propositions = k.propositions;
  std::vector<TraceEntry> all = c.prefix;
  all.insert(all.end(), c.cycle.begin(), c.cycle.end());
  for (const auto& e : all) lasso.add_state(k.states.at(e.state));
  for (std::size_t i = 0; i + 1 < all.size(); ++i) lasso.add_edge({i, i + 1, all[i].label, Time(0)});
  if (!all.empty()) lasso.add_edge({all.size() - 1, c.prefix.size(), all.back().label, Time(0)});
  return lasso;
}

namespace detail {

inline bool lasso_violates(const Kripke& k, const Counterexample& c, const BuchiAutomaton& negated) {
  return NestedDfs(lasso_kripke(k, c), negated).run().has_value();
}

}  // namespace detail

/// True iff `c` is a path of `k` from its initial state whose cycle closes,
/// and the infinite run prefix . cycle^omega violates `f`.
inline bool validate_counterexample(const Kripke& k, const Counterexample& c, const Formula& f) {
  if (c.cycle.empty()) return false;
  std::vector<TraceEntry> all = c.prefix;
  all.insert(all.end(), c.cycle.begin(), c.cycle.end());
  for (const auto& e : all)
    if (e.state >= k.states.size()) return false;
  if (all.front().state != k.initial) return false;
  for (std::size_t i = 0; i + 1 < all.size(); ++i)
    if (!k.has_edge(all[i].state, all[i + 1].state, all[i].label)) return false;
  if (!k.has_edge(all.back().state, c.cycle.front().state, all.back().label)) return false;
  detail::check_propositions(k, f);
  return detail::lasso_violates(k, c, to_buchi(to_nnf(!f)));
}

namespace detail {

/// Folds the lasso at the earliest repeated (state, label) entry that still
/// yields a violating run. The automaton's bookkeeping can make the search
/// unroll a Kripke cycle several times.
inline Counterexample shorten(const Kripke& k, Counterexample c, const BuchiAutomaton& negated) {
  constexpr std::size_t kMaxEntries = 256;
  std::vector<TraceEntry> all = c.prefix;
  all.insert(all.end(), c.cycle.begin(), c.cycle.end());
  if (all.size() > kMaxEntries) return c;
  for (std::size_t j = 1; j < all.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      if (!(all[i] == all[j])) continue;
      Counterexample folded{{all.begin(), all.begin() + i}, {all.begin() + i, all.begin() + j}};
      if (lasso_violates(k, folded, negated)) return folded;
    }
  return c;
}

}  // namespace detail

/// Holds, or a lasso of `k` violating `f`. `k` must be total.
inline CheckResult model_check(const Kripke& k, const Formula& f) {
  detail::check_propositions(k, f);
  if (k.states.empty()) throw ModelError("empty Kripke structure");
  if (k.min_out_degree() == 0) throw ModelError("Kripke structure is not total");
  BuchiAutomaton negated = to_buchi(to_nnf(!f));
  auto found = detail::NestedDfs(k, negated).run();
  if (found) found = detail::shorten(k, std::move(*found), negated);
  return {std::move(found)};
}

/// `counterexample({{state} in time t,'label}...,{...}...)`, one entry per
/// line; the comma separates prefix from cycle.
inline void print_counterexample(std::ostream& os, const Kripke& k, const Counterexample& c) {
  auto entry = [&](const TraceEntry& e) {
    const auto& s = k.states.at(e.state);
    os << "{{" << s.text << "} in time " << s.elapsed << ",'" << e.label << "}";
  };
  os << "counterexample(\n";
  for (const auto& e : c.prefix) {
    os << "  ";
    entry(e);
    os << "\n";
  }
  for (std::size_t i = 0; i < c.cycle.size(); ++i) {
    os << (i == 0 ? "  ," : "  ");
    entry(c.cycle[i]);
    os << (i + 1 == c.cycle.size() ? ")\n" : "\n");
  }
}

inline json counterexample_json(const Kripke& k, const Counterexample& c) {
  auto entries = [&](const std::vector<TraceEntry>& es) {
    json out = json::array();
    for (const auto& e : es) {
      const auto& s = k.states.at(e.state);
      out.push_back(json{{"state", s.data}, {"text", s.text}, {"elapsed", s.elapsed.str()}, {"label", e.label}});
    }
    return out;
  };
  return json{{"prefix", entries(c.prefix)}, {"cycle", entries(c.cycle)}};
}

}  // namespace rtlha
