#pragma once

// Command runner behind the rtlha executable: model loading and the
// simulate / search / check / product-check commands.

#include "rtlha/explore.hpp"
#include "rtlha/lha.hpp"
#include "rtlha/model_check.hpp"
#include "rtlha/pattern.hpp"
#include "rtlha/reservoir.hpp"
#include "rtlha/syncprod.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace rtlha {

/// Exit statuses of `run`.
enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitUsage = 2 };

enum class Command { Simulate, Search, Check, ProductCheck };
enum class OutputFormat { Text, Json };

struct RunConfig {
  Command command = Command::Check;
  std::string model;
  std::vector<std::string> components;
  Time time_bound{10};
  Time increment{1};
  std::optional<std::string> pattern;
  std::optional<std::string> formula;
  OutputFormat format = OutputFormat::Text;
  bool expect_none = false;
};

using Model = std::variant<NResState, Lha, TimedComponent>;

inline json model_to_json(const Model& m) {
  return std::visit([](const auto& v) { return to_json(v); }, m);
}

/// Dispatches on the top-level "kind": "nres", "lha" or "component".
inline Model model_from_json(const json& j) {
  const auto& kind = require(j, "kind", "model");
  if (!kind.is_string()) throw ModelError("model.kind: expected a string");
  auto k = kind.get<std::string>();
  if (k == "nres") return nres_from_json(j);
  if (k == "lha") return lha_from_json(j);
  if (k == "component") return component_from_json(j);
  throw ModelError("model.kind: unknown kind '" + k + "'");
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
    throw ModelError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
  try {
    return model_from_json(j);
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw ModelError(path + ": " + e.what());
  }
}

namespace detail {

inline ExploreOptions options_of(const RunConfig& cfg) { return {cfg.time_bound, cfg.increment}; }

template <TimedTransitionSystem M>
int simulate(const M& model, const RunConfig& cfg, std::ostream& out) {
  auto state = model.initial();
  Time elapsed{0};
  json steps = json::array();
  std::string stop;
  for (;;) {
    std::vector<std::string> enabled;
    for (const auto& s : model.discrete_successors(state))
      if (std::find(enabled.begin(), enabled.end(), s.label) == enabled.end()) enabled.push_back(s.label);
    steps.push_back(json{{"state", model.state_json(state)}, {"elapsed", elapsed.str()}, {"enabled", enabled}});
    if (cfg.format == OutputFormat::Text) {
      out << "{" << model.render(state) << "} in time " << elapsed;
      if (!enabled.empty()) {
        out << "  enabled:";
        for (const auto& l : enabled) out << " '" << l;
      }
      out << "\n";
    }
    if (!(elapsed + cfg.increment < cfg.time_bound)) {
      stop = "time bound reached";
      break;
    }
    auto next = model.timed_successor(state, cfg.increment);
    if (!next) {
      stop = "time cannot advance";
      break;
    }
    state = std::move(*next);
    elapsed = elapsed + cfg.increment;
  }
  if (cfg.format == OutputFormat::Text) out << stop << " at time " << elapsed << "\n";
  else out << json{{"trace", steps}, {"stop", stop}}.dump(2) << "\n";
  return kExitOk;
}

template <TimedTransitionSystem M, class Matcher>
int search(const M& model, Matcher&& match, const RunConfig& cfg, std::ostream& out) {
  auto solutions = rtlha::search(model, std::forward<Matcher>(match), options_of(cfg));
  if (cfg.format == OutputFormat::Text) {
    for (std::size_t i = 0; i < solutions.size(); ++i) {
      const auto& s = solutions[i];
      out << "Solution " << i + 1 << "\n";
      out << "S:System --> " << model.render(s.timed.state) << "; TIME_ELAPSED:Time --> " << s.timed.elapsed << "\n";
      for (const auto& [name, value] : s.bindings) out << name << " --> " << value << "\n";
      out << "\n";
    }
    out << (solutions.empty() ? "No solution" : "No more solutions") << "\n";
  } else {
    json js = json::array();
    for (const auto& s : solutions)
      js.push_back(json{{"state", model.state_json(s.timed.state)},
                        {"text", model.render(s.timed.state)},
                        {"elapsed", s.timed.elapsed.str()},
                        {"bindings", s.bindings}});
    out << json{{"solutions", js}}.dump(2) << "\n";
  }
  return cfg.expect_none && !solutions.empty() ? kExitViolation : kExitOk;
}

inline int report(const Kripke& k, const Formula& f, const RunConfig& cfg, std::ostream& out) {
  auto result = model_check(k, f);
  if (cfg.format == OutputFormat::Text) {
    if (result.holds()) {
      out << "Result Bool :\n  true\n";
    } else {
      out << "Result ModelCheckResult :\n";
      print_counterexample(out, k, *result.counterexample);
    }
  } else {
    json j{{"result", result.holds()}};
    if (!result.holds()) j["counterexample"] = counterexample_json(k, *result.counterexample);
    out << j.dump(2) << "\n";
  }
  return result.holds() ? kExitOk : kExitViolation;
}

inline void warn_well_formed(const NResState& s, std::ostream& err) {
  if (well_formed(s)) return;
  Rat total{0};
  for (const auto& r : s.reservoirs()) total += r.leak;
  err << "warning: system is not well-formed: total leak " << total << " differs from hose rate "
      << s.hose().rate << "\n";
}

inline bool is_refill_prop(const std::string& p) { return std::regex_match(p, std::regex("refill[0-9]+\\?")); }

}  // namespace detail

inline void validate(const RunConfig& cfg) {
  if (cfg.increment.is_zero()) throw std::invalid_argument("--increment must be > 0");
  if (cfg.time_bound.is_zero()) throw std::invalid_argument("--time-bound must be > 0");
  if ((cfg.command == Command::Check || cfg.command == Command::ProductCheck) && !cfg.formula)
    throw std::invalid_argument("--formula is required");
  if (cfg.command == Command::Search && !cfg.pattern) throw std::invalid_argument("--pattern is required");
  if (cfg.command == Command::ProductCheck && cfg.components.empty())
    throw std::invalid_argument("--components is required");
  if (cfg.command != Command::ProductCheck && cfg.model.empty()) throw std::invalid_argument("--model is required");
}

inline int run_or_throw(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  validate(cfg);
  std::optional<Formula> formula;
  if (cfg.formula) formula = parse_formula(*cfg.formula);

  if (cfg.command == Command::ProductCheck) {
    std::vector<TimedComponent> cs;
    for (const auto& path : cfg.components) {
      auto m = load_model(path);
      if (!std::holds_alternative<TimedComponent>(m)) throw ModelError(path + ": expected a component model");
      cs.push_back(std::get<TimedComponent>(std::move(m)));
    }
    TimedComponent product = rt_sync_product(cs);
    std::vector<std::string> refills;
    for (const auto& p : product.base.props)
      if (detail::is_refill_prop(p)) refills.push_back(p);
    if (!product.base.has_prop(kSafe) && !refills.empty()) product.base = safe_prop(product.base, refills);
    ComponentSystem sys(std::move(product));
    return detail::report(build_kripke(sys, detail::options_of(cfg)), *formula, cfg, out);
  }

  Model model = load_model(cfg.model);
  if (const auto* nres = std::get_if<NResState>(&model)) detail::warn_well_formed(*nres, err);

  return std::visit(
      [&](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        auto system = [&] {
          if constexpr (std::is_same_v<T, NResState>) return NReservoirSystem(m);
          else if constexpr (std::is_same_v<T, Lha>) return m;
          else return ComponentSystem(m);
        }();
        switch (cfg.command) {
          case Command::Simulate: return detail::simulate(system, cfg, out);
          case Command::Search: {
            if constexpr (std::is_same_v<T, NResState>) {
              auto pattern = SearchPattern::parse(*cfg.pattern);
              pattern.validate(m);
              return detail::search(system, [&](const NResState& s) { return match(pattern, s); }, cfg, out);
            } else {
              if (*cfg.pattern != "*") throw ModelError("search patterns other than '*' apply to nres models only");
              return detail::search(system, [](const auto&) { return std::optional<Bindings>(Bindings{}); }, cfg,
                                    out);
            }
          }
          case Command::Check: return detail::report(build_kripke(system, detail::options_of(cfg)), *formula, cfg, out);
          case Command::ProductCheck: break;
        }
        return kExitUsage;
      },
      model);
}

/// Runs one command; errors are reported on `err` with exit status 2.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    return run_or_throw(cfg, out, err);
  } catch (const SyntaxError& e) {
    err << "error: formula: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace rtlha
