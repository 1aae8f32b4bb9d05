#pragma once

// On-the-fly tableau translation of NNF LTL to a generalized Buchi automaton,
// followed by counter-based degeneralization.

#include "rtlha/ltl.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace rtlha {

struct Literal {
  std::string prop;
  bool positive = true;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// All literals must hold in the state being read.
using LiteralSet = std::set<Literal>;

inline bool satisfies(const std::set<std::string>& labels, const LiteralSet& lits) {
  for (const auto& l : lits)
    if (labels.contains(l.prop) != l.positive) return false;
  return true;
}

struct BuchiTransition {
  std::size_t from = 0;
  std::size_t to = 0;
  LiteralSet label;
};

struct BuchiAutomaton {
  std::size_t num_states = 0;
  std::vector<std::size_t> initial;
  std::vector<BuchiTransition> transitions;
  std::vector<bool> accepting;

  std::vector<std::vector<std::size_t>> outgoing() const {
    std::vector<std::vector<std::size_t>> out(num_states);
    for (std::size_t i = 0; i < transitions.size(); ++i) out[transitions[i].from].push_back(i);
    return out;
  }
};

namespace detail {

using FormulaSet = std::set<Formula>;

struct TableauNode {
  std::size_t id;
  std::set<std::size_t> incoming;
  std::vector<Formula> fresh;  // still to be processed
  FormulaSet old;
  FormulaSet next;
};

inline constexpr std::size_t kTableauInit = 0;

class Tableau {
public:
  explicit Tableau(const Formula& f) {
    TableauNode start{fresh_id(), {kTableauInit}, {f}, {}, {}};
    expand(std::move(start));
  }

  std::vector<TableauNode> nodes;

private:
  std::size_t fresh_id() { return ++counter_; }

  static bool contains(const FormulaSet& s, const Formula& f) { return s.contains(f); }

  static Formula negate_literal(const Formula& f) {
    if (f.op() == LtlOp::Not) return f.arg();
    return !f;
  }

  void expand(TableauNode node) {
    if (node.fresh.empty()) {
      for (auto& n : nodes) {
        if (n.old == node.old && n.next == node.next) {
          n.incoming.insert(node.incoming.begin(), node.incoming.end());
          return;
        }
      }
      TableauNode succ{fresh_id(), {node.id}, {node.next.begin(), node.next.end()}, {}, {}};
      nodes.push_back(std::move(node));
      expand(std::move(succ));
      return;
    }

    Formula f = node.fresh.back();
    node.fresh.pop_back();
    if (contains(node.old, f)) {
      expand(std::move(node));
      return;
    }

    switch (f.op()) {
      case LtlOp::False: return;
      case LtlOp::True:
        // recorded so that `g U true` counts as fulfilled here
        node.old.insert(f);
        expand(std::move(node));
        return;
      case LtlOp::Prop:
      case LtlOp::Not:
        if (contains(node.old, negate_literal(f))) return;
        node.old.insert(f);
        expand(std::move(node));
        return;
      case LtlOp::And:
        node.fresh.push_back(f.lhs());
        node.fresh.push_back(f.rhs());
        node.old.insert(f);
        expand(std::move(node));
        return;
      case LtlOp::Next:
        node.old.insert(f);
        node.next.insert(f.arg());
        expand(std::move(node));
        return;
      case LtlOp::Always:
        node.fresh.push_back(f.arg());
        node.old.insert(f);
        node.next.insert(f);
        expand(std::move(node));
        return;
      case LtlOp::Or:
      case LtlOp::Until:
      case LtlOp::Release:
      case LtlOp::Eventually: {
        TableauNode a{fresh_id(), node.incoming, node.fresh, node.old, node.next};
        TableauNode b{fresh_id(), node.incoming, node.fresh, node.old, node.next};
        a.old.insert(f);
        b.old.insert(f);
        if (f.op() == LtlOp::Or) {
          a.fresh.push_back(f.lhs());
          b.fresh.push_back(f.rhs());
        } else if (f.op() == LtlOp::Until) {
          a.fresh.push_back(f.lhs());
          a.next.insert(f);
          b.fresh.push_back(f.rhs());
        } else if (f.op() == LtlOp::Release) {
          a.fresh.push_back(f.rhs());
          a.next.insert(f);
          b.fresh.push_back(f.lhs());
          b.fresh.push_back(f.rhs());
        } else {  // <>g: postpone, or g now
          a.next.insert(f);
          b.fresh.push_back(f.arg());
        }
        expand(std::move(a));
        expand(std::move(b));
        return;
      }
      case LtlOp::Implies: throw std::invalid_argument("tableau input must be in negation normal form");
    }
  }

  std::size_t counter_ = kTableauInit;
};

inline void collect_eventualities(const Formula& f, FormulaSet& out) {
  if (f.op() == LtlOp::Until || f.op() == LtlOp::Eventually) out.insert(f);
  if (f.op() == LtlOp::Prop || f.op() == LtlOp::True || f.op() == LtlOp::False) return;
  collect_eventualities(f.arg(0), out);
  if (f.op() != LtlOp::Not && f.op() != LtlOp::Next && f.op() != LtlOp::Always && f.op() != LtlOp::Eventually)
    collect_eventualities(f.arg(1), out);
}

}  // namespace detail

/// Automaton accepting exactly the infinite proposition sequences that
/// satisfy `f`. State 0 is the unique initial state and reads the first
/// letter on its outgoing transitions.
inline BuchiAutomaton to_buchi(const Formula& f) {
  if (!is_nnf(f)) throw std::invalid_argument("to_buchi expects a formula in negation normal form");
  detail::Tableau tab(f);
  const auto& nodes = tab.nodes;

  detail::FormulaSet eventualities;
  detail::collect_eventualities(f, eventualities);
  std::vector<Formula> evs(eventualities.begin(), eventualities.end());
  // in_set[i][n]: node n fulfils eventuality i
  std::vector<std::vector<bool>> in_set(evs.size(), std::vector<bool>(nodes.size()));
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const Formula& target = evs[i].op() == LtlOp::Until ? evs[i].rhs() : evs[i].arg();
    for (std::size_t n = 0; n < nodes.size(); ++n)
      in_set[i][n] = !nodes[n].old.contains(evs[i]) || nodes[n].old.contains(target);
  }

  std::map<std::size_t, std::size_t> by_id;
  for (std::size_t n = 0; n < nodes.size(); ++n) by_id[nodes[n].id] = n;

  std::vector<LiteralSet> labels(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n)
    for (const auto& g : nodes[n].old) {
      if (g.op() == LtlOp::Prop) labels[n].insert({g.name(), true});
      else if (g.op() == LtlOp::Not) labels[n].insert({g.arg().name(), false});
    }

  const std::size_t layers = std::max<std::size_t>(evs.size(), 1);
  auto state_of = [&](std::size_t node, std::size_t layer) { return 1 + node * layers + layer; };

  BuchiAutomaton a;
  a.num_states = 1 + nodes.size() * layers;
  a.initial = {0};
  a.accepting.assign(a.num_states, false);
  for (std::size_t n = 0; n < nodes.size(); ++n)
    for (std::size_t layer = 0; layer < layers; ++layer)
      a.accepting[state_of(n, layer)] = evs.empty() ? true : (layer == layers - 1 && in_set[layer][n]);

  for (std::size_t to = 0; to < nodes.size(); ++to) {
    for (std::size_t pred_id : nodes[to].incoming) {
      if (pred_id == detail::kTableauInit) {
        a.transitions.push_back({0, state_of(to, 0), labels[to]});
        continue;
      }
      std::size_t from = by_id.at(pred_id);
      for (std::size_t layer = 0; layer < layers; ++layer) {
        std::size_t next_layer = evs.empty() ? 0 : (in_set[layer][from] ? (layer + 1) % layers : layer);
        a.transitions.push_back({state_of(from, layer), state_of(to, next_layer), labels[to]});
      }
    }
  }
  return a;
}

}  // namespace rtlha
