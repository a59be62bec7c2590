// mfcoop: scenario runner for the LQ mean field cooperation lab.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mfcoop/error.hpp"
#include "mfcoop/scenario.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> n_steps;
  std::optional<double> tol;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Scenario file with dotted key = value lines")->required();
  cmd->add_option("--out", f.out, "Output file (directory for figures); '-' for stdout");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--n-steps", f.n_steps, "Time steps on [0, T]");
  cmd->add_option("--tol", f.tol, "Tolerance for p* bisection and deviation stopping");
}

int run(const std::string& task, const Flags& f) {
  mfcoop::Config config = mfcoop::Config::load(f.config);
  config.set("task", task);
  if (f.out) config.set("output.path", *f.out);
  if (f.format) config.set("output.format", *f.format);
  if (f.n_steps) config.set("grid.n_steps", std::to_string(*f.n_steps));
  if (f.tol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *f.tol);
    config.set("pstar.tol", buf);
    config.set("deviate.tol", buf);
  }
  const mfcoop::Scenario scenario = mfcoop::scenario_from_config(config);
  mfcoop::RunResult result;
  try {
    result = mfcoop::run_scenario(scenario);
  } catch (const mfcoop::Error& e) {
    std::cerr << "mfcoop " << task << ": " << e.what() << " [" << mfcoop::provenance_line(scenario).substr(2)
              << "]\n";
    return mfcoop::exit_code_for(e.code());
  }
  for (const std::string& s : result.skipped) std::cerr << "skipped " << s << '\n';
  mfcoop::write_outputs(scenario, result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-quadratic mean field cooperation lab"};
  app.require_subcommand(1);
  Flags flags;
  const char* tasks[] = {"solve", "sweep", "poi", "pstar", "deviate", "figures"};
  const char* help[] = {"Solve one equilibrium (solve.kind)",
                        "Sweep p, lambda or q (sweep.axis)",
                        "Price of individualism and adjoint diagnostic",
                        "Free-rider threshold p*",
                        "Deviation iterations (deviate.schedule)",
                        "Figure tables for each q in figures.q_list"};
  for (int i = 0; i < 6; ++i) add_flags(app.add_subcommand(tasks[i], help[i]), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string task = app.get_subcommands().front()->get_name();
  try {
    return run(task, flags);
  } catch (const mfcoop::Error& e) {
    std::cerr << "mfcoop " << task << ": " << e.what() << '\n';
    return mfcoop::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "mfcoop " << task << ": " << e.what() << '\n';
    return 2;
  }
}
