#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "linstab/cli.hpp"

namespace {

struct Options {
  linstab::ExperimentConfig config;
  std::map<std::string, std::string> raw;
  std::string output;
  std::size_t window_cap = 0;
  long long period_cap = 0;
};

void add_params(CLI::App* sub, Options& o, const std::vector<std::pair<std::string, std::string>>& names) {
  for (const auto& [name, help] : names) sub->add_option("--" + name, o.raw[name], help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linstab: exact iteration of X -> aX - bX on eventually periodic integer sets"};
  app.require_subcommand(1);
  Options o;
  o.config.threads = std::max(1U, std::thread::hardware_concurrency());

  std::map<std::string, std::vector<std::pair<std::string, std::string>>> params = {
      {"iterate", {{"max_k", "number of steps (default: sequence length, 50 when cyclic)"}}},
      {"residue", {{"g", "modulus (optional, checked against --set)"}, {"a", "coefficient a"}, {"b", "coefficient b"},
                   {"max_k", "orbit step budget"}}},
      {"decompose", {{"g", "modulus (optional, checked against --set)"}, {"a", "coefficient a"}, {"b", "coefficient b"}}},
      {"dplus", {{"max_k", "D+ step budget"}}},
      {"verify-thm61", {{"L", "bound on the coefficients"}, {"c", "constant c (rational)"}, {"max_steps", "step cap"}}},
      {"construct",
       {{"kind", "ap, scaled, bohr, sparse, bohr-iterates, gaps or parity"}, {"a", "coefficient a"}, {"b", "coefficient b"},
        {"d", "scale for kind=scaled"}, {"steps", "iteration steps"}, {"alpha", "surd for kind=bohr-iterates"},
        {"N", "truncation length"}, {"delta", "interval width for kind=gaps"}, {"k", "number of i^i blocks"},
        {"bits", "bit string for kind=parity"}}},
      {"sweep", {{"L", "largest L in the grid"}, {"c", "constant c (rational)"}, {"seed", "seed for random sequences"},
                 {"max_steps", "step cap per cell"}}},
  };
  const std::map<std::string, std::string> descriptions = {
      {"iterate", "iterate a set under an operation sequence"},
      {"residue", "cardinality and orbit of a residue set under (a,b)"},
      {"decompose", "structure certificate for |aU+bU| = |U|"},
      {"dplus", "positive difference set iteration and its stability time"},
      {"verify-thm61", "check periodicity onset and the stability bound"},
      {"construct", "build and check one of the explicit constructions"},
      {"sweep", "run the periodicity/stability verifier over the fixture grid"},
  };

  for (const auto& name : linstab::command_names()) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--set", o.config.set_expr, "set expression");
    sub->add_option("--ops", o.config.ops_expr, "operation sequence, e.g. (3,1)^5 or cyc[(2,1)(3,2)]");
    add_params(sub, o, params.at(name));
    sub->add_option("--format", o.config.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--output,-o", o.output, "write the report here instead of stdout");
    sub->add_option("--threads", o.config.threads, "worker threads for sweep")->check(CLI::PositiveNumber);
    sub->add_option("--window-cap", o.window_cap, "window length cap (default from LINSTAB_WINDOW_CAP)");
    sub->add_option("--period-cap", o.period_cap, "period cap (default from LINSTAB_PERIOD_CAP)");
    sub->callback([&o, name] { o.config.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return linstab::kExitUsage;
  }

  for (const auto& [k, v] : o.raw)
    if (!v.empty()) o.config.params[k] = v;
  linstab::Limits limits = linstab::limits_from_environment();
  if (o.window_cap > 0) limits.window_cap = o.window_cap;
  if (o.period_cap > 0) limits.period_cap = o.period_cap;

  const linstab::RunResult result = linstab::run(o.config, limits);
  if (o.output.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream out(o.output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << o.output << "\n";
      return linstab::kExitUsage;
    }
    out << result.output;
  }
  return result.exit_code;
}
