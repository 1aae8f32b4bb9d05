#pragma once

#include "rtlha/rational.hpp"
#include "rtlha/system.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rtlha {

inline constexpr const char* kTickLabel = "tick";
inline constexpr const char* kStutterLabel = "stutter";

struct KripkeState {
  std::string key;   // canonical serialization of the model state
  std::string text;  // human-readable rendering
  json data;         // machine-readable rendering
  Time elapsed;
  std::set<std::string> labels;  // propositions true here
};

struct KripkeEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string label;
  Time duration;
};

/// Finite state graph with proposition labels. Model checking expects it to
/// be total; `totalize` adds stutter self-loops where needed.
struct Kripke {
  std::vector<std::string> propositions;
  std::vector<KripkeState> states;
  std::size_t initial = 0;
  std::vector<KripkeEdge> edges;

  std::size_t add_state(KripkeState s) {
    states.push_back(std::move(s));
    out_.emplace_back();
    return states.size() - 1;
  }

  void add_edge(KripkeEdge e) {
    if (e.from >= states.size() || e.to >= states.size()) throw ModelError("kripke edge endpoint out of range");
    out_[e.from].push_back(edges.size());
    edges.push_back(std::move(e));
  }

  /// Edge indices leaving `s`, in insertion order.
  const std::vector<std::size_t>& out_edges(std::size_t s) const { return out_.at(s); }

  void totalize() {
    for (std::size_t s = 0; s < states.size(); ++s)
      if (out_[s].empty()) add_edge({s, s, kStutterLabel, Time(0)});
  }

  std::size_t min_out_degree() const {
    std::size_t m = states.empty() ? 0 : SIZE_MAX;
    for (const auto& o : out_) m = std::min(m, o.size());
    return m;
  }

  std::optional<std::size_t> find(const std::string& key, const Time& elapsed) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].key == key && states[i].elapsed == elapsed) return i;
    return std::nullopt;
  }

  bool has_edge(std::size_t from, std::size_t to, const std::string& label) const {
    if (from >= states.size()) return false;
    for (auto e : out_[from])
      if (edges[e].to == to && edges[e].label == label) return true;
    return false;
  }

private:
  std::vector<std::vector<std::size_t>> out_;
};

}  // namespace rtlha
