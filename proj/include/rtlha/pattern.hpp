#pragma once

// Search patterns over n-reservoir states.
//
//   *                       matches every state
//   hose=N                  hose over reservoir N
//   R<id>.hth=<rat>|*       level of reservoir <id>; also rte, lower, upper
//
// Terms are separated by commas or whitespace; the whole pattern may be
// wrapped in parentheses.

#include "rtlha/explore.hpp"
#include "rtlha/reservoir.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace rtlha {

struct AttributePattern {
  std::optional<Rat> level;
  std::optional<Rat> leak;
  std::optional<Rat> lower;
  std::optional<Rat> upper;
};

struct SearchPattern {
  std::optional<ReservoirId> hose;
  std::map<ReservoirId, AttributePattern> reservoirs;

  bool is_wildcard() const { return !hose && reservoirs.empty(); }

  static SearchPattern parse(std::string_view text) {
    SearchPattern p;
    std::size_t pos = 0;
    auto fail = [&](const std::string& what) -> void {
      throw ModelError("pattern: " + what + " at column " + std::to_string(pos + 1));
    };
    auto skip = [&] {
      while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ','))
        ++pos;
    };
    auto word = [&] {
      std::size_t start = pos;
      while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != ',' &&
             text[pos] != ')')
        ++pos;
      return text.substr(start, pos - start);
    };
    auto natural = [&](std::string_view s) -> ReservoirId {
      if (s.empty() || s.size() > 18) fail("expected a reservoir id");
      for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail("expected a reservoir id");
      return std::stoull(std::string(s));
    };

    skip();
    bool paren = pos < text.size() && text[pos] == '(';
    if (paren) ++pos;
    bool any = false, star = false;
    for (skip(); pos < text.size() && text[pos] != ')'; skip()) {
      std::size_t term_start = pos;
      std::string_view term = word();
      any = true;
      if (term == "*") {
        star = true;
        continue;
      }
      auto eq = term.find('=');
      if (eq == std::string_view::npos) {
        pos = term_start;
        fail("expected '='");
      }
      auto lhs = term.substr(0, eq);
      auto rhs = term.substr(eq + 1);
      pos = term_start;
      if (lhs == "hose") {
        p.hose = natural(rhs);
      } else if (lhs.size() > 1 && lhs.front() == 'R' && lhs.find('.') != std::string_view::npos) {
        auto dot = lhs.find('.');
        ReservoirId id = natural(lhs.substr(1, dot - 1));
        auto attr = lhs.substr(dot + 1);
        std::optional<Rat> value;
        if (rhs != "*") {
          try {
            value = Rat::parse(rhs);
          } catch (const ModelError&) {
            fail("malformed rational '" + std::string(rhs) + "'");
          }
        }
        auto& ap = p.reservoirs[id];
        if (attr == "hth") ap.level = value;
        else if (attr == "rte") ap.leak = value;
        else if (attr == "lower") ap.lower = value;
        else if (attr == "upper") ap.upper = value;
        else fail("unknown attribute '" + std::string(attr) + "'");
      } else {
        fail("unknown term '" + std::string(term) + "'");
      }
      pos = term_start + term.size();
    }
    if (paren) {
      if (pos >= text.size()) fail("missing ')'");
      ++pos;
      skip();
    } else if (pos < text.size()) {
      fail("unexpected ')'");
    }
    if (pos < text.size()) fail("trailing input");
    if (!any) fail("empty pattern");
    if (star && !p.is_wildcard()) fail("'*' cannot be combined with other terms");
    return p;
  }

  /// Referenced reservoir ids must exist in the model.
  void validate(const NResState& s) const {
    if (hose && !s.find(*hose)) throw ModelError("pattern: no reservoir " + std::to_string(*hose));
    for (const auto& [id, ap] : reservoirs)
      if (!s.find(id)) throw ModelError("pattern: no reservoir " + std::to_string(id));
  }
};

/// Wildcarded attributes of every reservoir named in the pattern bind to
/// `RA<id>`.
inline std::optional<Bindings> match(const SearchPattern& p, const NResState& s) {
  if (p.hose && s.hose().position != *p.hose) return std::nullopt;
  Bindings b;
  for (const auto& [id, ap] : p.reservoirs) {
    const Reservoir* r = s.find(id);
    if (!r) return std::nullopt;
    std::string rest;
    auto field = [&](const std::optional<Rat>& want, const Rat& have, const std::string& rendered) {
      if (want) return *want == have;
      rest += (rest.empty() ? "" : ", ") + rendered;
      return true;
    };
    if (!field(ap.lower, r->lower, "lower: " + r->lower.str())) return std::nullopt;
    if (!field(ap.upper, r->upper, "upper: " + r->upper.str())) return std::nullopt;
    if (!field(ap.level, r->level, "hth: " + r->level.str())) return std::nullopt;
    if (!field(ap.leak, r->leak, "rte: " + r->leak.str())) return std::nullopt;
    if (!rest.empty()) b["RA" + std::to_string(id)] = rest;
  }
  return b;
}

}  // namespace rtlha
