#pragma once

// The n-reservoir system: one hose over a multiset of leaking reservoirs.

#include "rtlha/rational.hpp"
#include "rtlha/system.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace rtlha {

using ReservoirId = std::uint64_t;

struct Hose {
  Rat rate;  // intake w
  ReservoirId position = 0;
  friend bool operator==(const Hose&, const Hose&) = default;
};

struct Reservoir {
  ReservoirId id = 0;
  Rat lower;
  Rat upper;  // reported, never enforced by any rule
  Rat level;
  Rat leak;
  friend bool operator==(const Reservoir&, const Reservoir&) = default;
};

/// Hose plus reservoirs, kept sorted by id so equal multisets compare and
/// serialize identically.
class NResState {
public:
  NResState(Hose hose, std::vector<Reservoir> reservoirs) : hose_(std::move(hose)), reservoirs_(std::move(reservoirs)) {
    std::sort(reservoirs_.begin(), reservoirs_.end(),
              [](const Reservoir& a, const Reservoir& b) { return a.id < b.id; });
    validate();
  }

  const Hose& hose() const { return hose_; }
  const std::vector<Reservoir>& reservoirs() const { return reservoirs_; }

  const Reservoir* find(ReservoirId id) const {
    auto it = std::lower_bound(reservoirs_.begin(), reservoirs_.end(), id,
                               [](const Reservoir& r, ReservoirId v) { return r.id < v; });
    return it != reservoirs_.end() && it->id == id ? &*it : nullptr;
  }

  const Reservoir& at(ReservoirId id) const {
    if (const auto* r = find(id)) return *r;
    throw ModelError("no reservoir " + std::to_string(id));
  }

  NResState with_hose_at(ReservoirId id) const {
    NResState out = *this;
    out.hose_.position = id;
    out.validate();
    return out;
  }

  friend bool operator==(const NResState&, const NResState&) = default;

private:
  void validate() const {
    if (reservoirs_.empty()) throw ModelError("at least one reservoir");
    if (hose_.rate.sign() < 0) throw ModelError("hose: rate < 0");
    for (std::size_t i = 0; i < reservoirs_.size(); ++i) {
      const auto& r = reservoirs_[i];
      std::string where = "reservoir " + std::to_string(r.id);
      if (i > 0 && reservoirs_[i - 1].id == r.id) throw ModelError(where + ": duplicate id");
      if (r.lower.sign() < 0) throw ModelError(where + ": lower < 0");
      if (r.upper.sign() < 0) throw ModelError(where + ": upper < 0");
      if (r.level.sign() < 0) throw ModelError(where + ": level < 0");
      if (r.leak.sign() < 0) throw ModelError(where + ": leak < 0");
      if (r.lower > r.upper) throw ModelError(where + ": lower > upper");
    }
    if (!find(hose_.position)) throw ModelError("hose: position " + std::to_string(hose_.position) + " is not a reservoir");
  }

  Hose hose_;
  std::vector<Reservoir> reservoirs_;
};

/// level + (w - leak) * t.
inline Reservoir fill(Reservoir r, const Rat& w, const Time& t) {
  if (w < r.leak)
    throw ModelError("reservoir " + std::to_string(r.id) + ": hose slower than leak (" + w.str() + " < " +
                     r.leak.str() + ")");
  r.level += (w - r.leak) * t.value();
  return r;
}

/// Every level becomes monus(level, leak * t).
inline std::vector<Reservoir> drain(std::span<const Reservoir> rs, const Time& t) {
  std::vector<Reservoir> out(rs.begin(), rs.end());
  for (auto& r : out) r.level = monus(r.level, r.leak * t.value());
  return out;
}

inline bool needs_refill(std::span<const Reservoir> rs) {
  return std::any_of(rs.begin(), rs.end(), [](const Reservoir& r) { return r.level <= r.lower; });
}

/// Moves the hose from a reservoir at or above its lower threshold to any
/// other reservoir at or below its own. Ordered by target id.
inline std::vector<Step<NResState>> move_hose_successors(const NResState& s) {
  std::vector<Step<NResState>> out;
  const auto& here = s.at(s.hose().position);
  if (here.level < here.lower) return out;
  for (const auto& r : s.reservoirs()) {
    if (r.id == here.id || r.level > r.lower) continue;
    out.push_back({"move-hose", s.with_hose_at(r.id)});
  }
  return out;
}

/// Lets t time units pass unless some reservoir other than the hose's needs
/// refilling.
inline std::optional<NResState> tick(const NResState& s, const Time& t) {
  if (t.is_zero()) return s;
  std::vector<Reservoir> others;
  const Reservoir* filled = nullptr;
  for (const auto& r : s.reservoirs()) {
    if (r.id == s.hose().position) filled = &r;
    else others.push_back(r);
  }
  if (needs_refill(others)) return std::nullopt;
  auto next = drain(others, t);
  next.push_back(fill(*filled, s.hose().rate, t));
  return NResState(s.hose(), std::move(next));
}

inline constexpr const char* kOneDown = "one-down";
inline constexpr const char* kMacondo = "macondo";

inline bool valuation(const NResState& s, const std::string& prop) {
  const auto& rs = s.reservoirs();
  auto below = [](const Reservoir& r) { return r.level <= r.lower; };
  if (prop == kOneDown) return std::any_of(rs.begin(), rs.end(), below);
  if (prop == kMacondo) return std::all_of(rs.begin(), rs.end(), below);
  throw ModelError("unknown proposition '" + prop + "'");
}

/// Hose intake equals the total leak.
inline bool well_formed(const NResState& s) {
  Rat total{0};
  for (const auto& r : s.reservoirs()) total += r.leak;
  return total == s.hose().rate;
}

inline std::string render(const NResState& s) {
  std::string out = "hose(" + s.hose().rate.str() + "," + std::to_string(s.hose().position) + ")";
  for (const auto& r : s.reservoirs())
    out += " < " + std::to_string(r.id) + " | thr:(" + r.lower.str() + "," + r.upper.str() + "), hth: " +
           r.level.str() + ", rte: " + r.leak.str() + " >";
  return out;
}

inline json to_json(const NResState& s) {
  json rs = json::array();
  for (const auto& r : s.reservoirs())
    rs.push_back(json{{"id", r.id}, {"lower", r.lower.str()}, {"upper", r.upper.str()}, {"level", r.level.str()},
                      {"leak", r.leak.str()}});
  return json{{"kind", "nres"}, {"hose", {{"rate", s.hose().rate.str()}, {"position", s.hose().position}}},
              {"reservoirs", rs}};
}

inline NResState nres_from_json(const json& j) {
  const auto& jh = require(j, "hose", "nres");
  const auto& jpos = require(jh, "position", "hose");
  if (!jpos.is_number_unsigned()) throw ModelError("hose.position: expected a natural number");
  Hose hose{rat_from_json(require(jh, "rate", "hose"), "hose.rate"), jpos.get<ReservoirId>()};

  const auto& jr = require(j, "reservoirs", "nres");
  if (!jr.is_array()) throw ModelError("reservoirs: expected an array");
  std::vector<Reservoir> rs;
  for (std::size_t i = 0; i < jr.size(); ++i) {
    std::string where = "reservoirs[" + std::to_string(i) + "]";
    const auto& jid = require(jr[i], "id", where);
    if (!jid.is_number_unsigned()) throw ModelError(where + ".id: expected a natural number");
    rs.push_back(Reservoir{jid.get<ReservoirId>(), rat_from_json(require(jr[i], "lower", where), where + ".lower"),
                           rat_from_json(require(jr[i], "upper", where), where + ".upper"),
                           rat_from_json(require(jr[i], "level", where), where + ".level"),
                           rat_from_json(require(jr[i], "leak", where), where + ".leak")});
  }
  return NResState(std::move(hose), std::move(rs));
}

/// The n-reservoir system as a TimedTransitionSystem.
class NReservoirSystem {
public:
  using State = NResState;

  explicit NReservoirSystem(NResState init) : init_(std::move(init)) {}

  NResState initial() const { return init_; }
  std::vector<Step<NResState>> discrete_successors(const NResState& s) const { return move_hose_successors(s); }
  std::optional<NResState> timed_successor(const NResState& s, const Time& t) const { return tick(s, t); }
  std::vector<std::string> propositions() const { return {kOneDown, kMacondo}; }
  bool holds(const NResState& s, const std::string& p) const { return valuation(s, p); }
  std::string serialize(const NResState& s) const { return rtlha::render(s); }
  std::string render(const NResState& s) const { return rtlha::render(s); }
  json state_json(const NResState& s) const { return to_json(s); }

private:
  NResState init_;
};

}  // namespace rtlha
