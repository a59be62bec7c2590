#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mfcoop/error.hpp"
#include "mfcoop/model.hpp"

namespace mfcoop {

/// Flat "dotted.key = value" configuration. '#' starts a comment line.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);
  /// Parses a provenance line "# config: k=v; k=v; ...".
  static Config from_provenance(const std::string& line);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const& { return values_; }
  std::map<std::string, std::string> values() && { return std::move(values_); }

 private:
  std::map<std::string, std::string> values_;
};

enum class TaskKind { kSolve, kSweep, kPoi, kPStar, kDeviate, kFigures };
enum class OutputFormat { kCsv, kJson };

const char* to_string(TaskKind kind);
TaskKind task_from_string(const std::string& name);

struct Scenario {
  ModelParams model;
  int n_steps = 2000;
  TaskKind task = TaskKind::kSolve;

  std::string solve_kind = "mfc";  // mfg | mfc | lambda | p_partial | best_response
  double solve_p = 0.0;
  double solve_lambda = 0.0;
  double solve_env = 0.0;

  std::string sweep_axis = "p";  // p | lambda | q
  double sweep_from = 0.0;
  double sweep_to = 1.0;
  int sweep_points = 101;

  double poi_p = 0.0;
  double pstar_tol = 1e-12;

  std::string deviate_schedule = "constant";  // constant | sequence | fictitious
  double deviate_p = 0.5;
  std::vector<double> deviate_p_sequence;
  double deviate_q_tilde = 0.5;
  int deviate_N = 100;
  double deviate_tol = 1e-12;

  std::vector<double> figures_q_list;
  int figures_points = 101;

  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;

  /// Resolved computation keys (output destination excluded), in key order.
  Config resolved() const;
  bool operator==(const Scenario&) const = default;
};

/// Throws Error(kConfig) naming the offending key.
Scenario scenario_from_config(const Config& config);

std::string provenance_line(const Scenario& scenario);

struct Table {
  std::string name;  // file stem for multi-table tasks
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunResult {
  std::vector<Table> tables;
  std::vector<std::string> skipped;  // "axis=value: reason"
};

RunResult run_scenario(const Scenario& scenario);

std::string format_csv(const Table& table, const std::string& provenance);
std::string format_json(const Table& table, const Scenario& scenario);

/// Writes every table; single-table tasks go to output_path, figures to
/// files inside the output_path directory. Throws Error(kIo).
std::vector<std::string> write_outputs(const Scenario& scenario, const RunResult& result);

/// 0 success, 2 config, 3 solver, 4 IO.
int exit_code_for(ErrorCode code);

}  // namespace mfcoop
