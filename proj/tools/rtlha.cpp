#include "rtlha/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

void add_common(CLI::App* cmd, std::string& bound, std::string& increment, std::string& format) {
  cmd->add_option("--time-bound", bound, "strict upper bound on elapsed time (rational)");
  cmd->add_option("--increment", increment, "duration of every tick (rational)");
  cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit-state simulator and LTL model checker for linear hybrid automata"};
  app.require_subcommand(1);

  rtlha::RunConfig cfg;
  std::string bound = cfg.time_bound.str();
  std::string increment = cfg.increment.str();
  std::string format = "text";
  std::string pattern, formula;

  auto* simulate = app.add_subcommand("simulate", "print the tick-only trace from the initial state");
  simulate->add_option("--model", cfg.model, "model file")->required();
  add_common(simulate, bound, increment, format);

  auto* search = app.add_subcommand("search", "timed reachability search");
  search->add_option("--model", cfg.model, "model file")->required();
  search->add_option("--pattern", pattern, "search pattern, e.g. '*' or 'R0.hth=45, R1.hth=10'")->required();
  search->add_flag("--expect-none", cfg.expect_none, "exit 1 if any solution is found");
  add_common(search, bound, increment, format);

  auto* check = app.add_subcommand("check", "time-bounded LTL model check");
  check->add_option("--model", cfg.model, "model file")->required();
  check->add_option("--formula", formula, "LTL formula, e.g. '[]~ <> one-down'")->required();
  add_common(check, bound, increment, format);

  auto* product = app.add_subcommand("product-check", "compose components synchronously, then model check");
  product->add_option("--components", cfg.components, "component files")->required()->expected(1, -1);
  product->add_option("--formula", formula, "LTL formula, e.g. '[] safe'")->required();
  add_common(product, bound, increment, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : rtlha::kExitUsage;
  }

  if (*simulate) cfg.command = rtlha::Command::Simulate;
  else if (*search) cfg.command = rtlha::Command::Search;
  else if (*check) cfg.command = rtlha::Command::Check;
  else cfg.command = rtlha::Command::ProductCheck;
  if (!pattern.empty()) cfg.pattern = pattern;
  if (!formula.empty()) cfg.formula = formula;
  cfg.format = format == "json" ? rtlha::OutputFormat::Json : rtlha::OutputFormat::Text;

  try {
    cfg.time_bound = rtlha::Time::parse(bound);
    cfg.increment = rtlha::Time::parse(increment);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rtlha::kExitUsage;
  }
  return rtlha::run(cfg);
}
