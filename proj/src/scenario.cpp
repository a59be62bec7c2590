#include "mfcoop/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mfcoop/costs.hpp"
#include "mfcoop/deviation.hpp"
#include "mfcoop/equilibria.hpp"

namespace mfcoop {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// Shortest text that parses back to the same double.
std::string exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += exact(xs[i]);
  }
  return out;
}

[[noreturn]] void config_error(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::kConfig, key + ": " + why);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) config_error(key, "expected a number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    config_error(key, "expected a finite number, got '" + t + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || v < INT32_MIN ||
      v > INT32_MAX) {
    config_error(key, "expected an integer, got '" + t + "'");
  }
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  if (trim(t).empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model.q", "model.T", "model.x0", "model.sigma", "grid.n_steps", "task",
      "solve.kind", "solve.p", "solve.lambda", "solve.env",
      "sweep.axis", "sweep.from", "sweep.to", "sweep.points",
      "poi.p", "pstar.tol",
      "deviate.schedule", "deviate.p", "deviate.p_sequence", "deviate.q_tilde", "deviate.N",
      "deviate.tol",
      "figures.q_list", "figures.points",
      "output.path", "output.format"};
  return keys;
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

// Runs f(i) for i in [0, n) over a few threads; results land by index.
template <class F>
void parallel_for(int n, F f) {
  const int workers = std::max(1, std::min<int>(n, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([=] {
      for (int i = w; i < n; i += workers) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<double> axis_points(double from, double to, int points) {
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = points == 1 ? from : from + (to - from) * static_cast<double>(i) / (points - 1);
  }
  return xs;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::kConfig, "line " + std::to_string(lineno) + ": empty key");
    c.values_[key] = trim(t.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Config Config::from_provenance(const std::string& line) {
  std::string t = trim(line);
  const std::string prefix = "# config:";
  if (t.rfind(prefix, 0) != 0) throw Error(ErrorCode::kConfig, "not a provenance line");
  t = t.substr(prefix.size());
  Config c;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kConfig, "bad provenance entry '" + item + "'");
    c.values_[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return c;
}

const char* to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kSolve: return "solve";
    case TaskKind::kSweep: return "sweep";
    case TaskKind::kPoi: return "poi";
    case TaskKind::kPStar: return "pstar";
    case TaskKind::kDeviate: return "deviate";
    case TaskKind::kFigures: return "figures";
  }
  return "unknown";
}

TaskKind task_from_string(const std::string& name) {
  for (TaskKind k : {TaskKind::kSolve, TaskKind::kSweep, TaskKind::kPoi, TaskKind::kPStar,
                     TaskKind::kDeviate, TaskKind::kFigures}) {
    if (name == to_string(k)) return k;
  }
  config_error("task", "unknown task '" + name + "'");
}

Scenario scenario_from_config(const Config& config) {
  const auto& v = config.values();
  for (const auto& [key, value] : v) {
    if (!known_keys().count(key)) config_error(key, "unknown key");
  }
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = v.find(key);
    return it == v.end() ? nullptr : &it->second;
  };
  auto real = [&](const std::string& key, double& out) {
    if (auto s = get(key)) out = parse_real(key, *s);
  };
  auto integer = [&](const std::string& key, int& out) {
    if (auto s = get(key)) out = parse_int(key, *s);
  };
  auto text = [&](const std::string& key, std::string& out) {
    if (auto s = get(key)) out = *s;
  };

  Scenario sc;
  if (!get("model.T")) config_error("model.T", "missing");
  if (!get("model.x0")) config_error("model.x0", "missing");
  real("model.q", sc.model.q);
  real("model.T", sc.model.T);
  real("model.x0", sc.model.x0);
  real("model.sigma", sc.model.sigma);
  if (sc.model.T <= 0.0) config_error("model.T", "must be positive");
  if (sc.model.sigma <= 0.0) config_error("model.sigma", "must be positive");
  integer("grid.n_steps", sc.n_steps);
  if (sc.n_steps < 2) config_error("grid.n_steps", "must be >= 2");
  if (auto s = get("task")) sc.task = task_from_string(*s);

  text("solve.kind", sc.solve_kind);
  real("solve.p", sc.solve_p);
  real("solve.lambda", sc.solve_lambda);
  real("solve.env", sc.solve_env);
  static const std::set<std::string> kinds = {"mfg", "mfc", "lambda", "p_partial", "best_response"};
  if (!kinds.count(sc.solve_kind)) config_error("solve.kind", "unknown kind '" + sc.solve_kind + "'");
  if (!in_unit(sc.solve_p)) config_error("solve.p", "must lie in [0, 1]");
  if (!in_unit(sc.solve_lambda)) config_error("solve.lambda", "must lie in [0, 1]");

  text("sweep.axis", sc.sweep_axis);
  real("sweep.from", sc.sweep_from);
  real("sweep.to", sc.sweep_to);
  integer("sweep.points", sc.sweep_points);
  if (sc.sweep_axis != "p" && sc.sweep_axis != "lambda" && sc.sweep_axis != "q") {
    config_error("sweep.axis", "expected p, lambda or q");
  }
  if (sc.task == TaskKind::kSweep) {
    if (sc.sweep_points < 1) throw Error(ErrorCode::kEmptyRange, "sweep.points: must be >= 1");
    if (sc.sweep_from > sc.sweep_to) throw Error(ErrorCode::kEmptyRange, "sweep.from exceeds sweep.to");
    if (sc.sweep_axis != "q" && !(in_unit(sc.sweep_from) && in_unit(sc.sweep_to))) {
      config_error("sweep.from", "range must lie in [0, 1] for axis " + sc.sweep_axis);
    }
  }

  real("poi.p", sc.poi_p);
  if (!in_unit(sc.poi_p)) config_error("poi.p", "must lie in [0, 1]");
  real("pstar.tol", sc.pstar_tol);
  if (sc.pstar_tol <= 0.0) config_error("pstar.tol", "must be positive");

  text("deviate.schedule", sc.deviate_schedule);
  real("deviate.p", sc.deviate_p);
  if (auto s = get("deviate.p_sequence")) sc.deviate_p_sequence = parse_list("deviate.p_sequence", *s);
  real("deviate.q_tilde", sc.deviate_q_tilde);
  integer("deviate.N", sc.deviate_N);
  real("deviate.tol", sc.deviate_tol);
  if (sc.deviate_schedule != "constant" && sc.deviate_schedule != "sequence" &&
      sc.deviate_schedule != "fictitious") {
    config_error("deviate.schedule", "expected constant, sequence or fictitious");
  }
  if (!in_unit(sc.deviate_p)) config_error("deviate.p", "must lie in [0, 1]");
  for (double p : sc.deviate_p_sequence) {
    if (!in_unit(p)) config_error("deviate.p_sequence", "entries must lie in [0, 1]");
  }
  if (!(sc.deviate_q_tilde > 0.0 && sc.deviate_q_tilde < 1.0)) {
    config_error("deviate.q_tilde", "must lie in (0, 1)");
  }
  if (sc.deviate_N < 2) config_error("deviate.N", "must be >= 2");
  if (sc.deviate_tol < 0.0) config_error("deviate.tol", "must be >= 0");

  if (auto s = get("figures.q_list")) sc.figures_q_list = parse_list("figures.q_list", *s);
  integer("figures.points", sc.figures_points);
  if (sc.task == TaskKind::kFigures && sc.figures_q_list.empty()) {
    config_error("figures.q_list", "missing or empty");
  }
  if (sc.figures_points < 2) config_error("figures.points", "must be >= 2");

  text("output.path", sc.output_path);
  if (auto s = get("output.format")) {
    if (*s == "csv") sc.format = OutputFormat::kCsv;
    else if (*s == "json") sc.format = OutputFormat::kJson;
    else config_error("output.format", "expected csv or json");
  }
  return sc;
}

Config Scenario::resolved() const {
  Config c;
  c.set("model.q", exact(model.q));
  c.set("model.T", exact(model.T));
  c.set("model.x0", exact(model.x0));
  c.set("model.sigma", exact(model.sigma));
  c.set("grid.n_steps", std::to_string(n_steps));
  c.set("task", to_string(task));
  switch (task) {
    case TaskKind::kSolve:
      c.set("solve.kind", solve_kind);
      c.set("solve.p", exact(solve_p));
      c.set("solve.lambda", exact(solve_lambda));
      c.set("solve.env", exact(solve_env));
      break;
    case TaskKind::kSweep:
      c.set("sweep.axis", sweep_axis);
      c.set("sweep.from", exact(sweep_from));
      c.set("sweep.to", exact(sweep_to));
      c.set("sweep.points", std::to_string(sweep_points));
      c.set("pstar.tol", exact(pstar_tol));
      break;
    case TaskKind::kPoi:
      c.set("poi.p", exact(poi_p));
      break;
    case TaskKind::kPStar:
      c.set("pstar.tol", exact(pstar_tol));
      break;
    case TaskKind::kDeviate:
      c.set("deviate.schedule", deviate_schedule);
      c.set("deviate.p", exact(deviate_p));
      c.set("deviate.p_sequence", join(deviate_p_sequence));
      c.set("deviate.q_tilde", exact(deviate_q_tilde));
      c.set("deviate.N", std::to_string(deviate_N));
      c.set("deviate.tol", exact(deviate_tol));
      break;
    case TaskKind::kFigures:
      c.set("figures.q_list", join(figures_q_list));
      c.set("figures.points", std::to_string(figures_points));
      c.set("pstar.tol", exact(pstar_tol));
      break;
  }
  return c;
}

std::string provenance_line(const Scenario& scenario) {
  std::string out = "# config:";
  bool first = true;
  const Config resolved = scenario.resolved();
  for (const auto& [k, v] : resolved.values()) {
    out += first ? " " : "; ";
    out += k + "=" + v;
    first = false;
  }
  return out;
}

namespace {

Table solve_table(const Scenario& sc) {
  const TimeGrid grid = make_grid(sc.model, sc.n_steps);
  Table t;
  t.columns = {"q", "parameter", "xbar_T", "cost"};
  double parameter = 0.0;
  double xbar = 0.0;
  double cost = 0.0;
  if (sc.solve_kind == "mfg" || sc.solve_kind == "mfc") {
    const Equilibrium e = sc.solve_kind == "mfg" ? solve_mfg(sc.model, grid) : solve_mfc(sc.model, grid);
    xbar = e.xbar_T;
    cost = e.cost;
  } else if (sc.solve_kind == "lambda") {
    const Equilibrium e = solve_lambda_interpolated(sc.model, sc.solve_lambda, grid);
    parameter = sc.solve_lambda;
    xbar = e.xbar_T;
    cost = e.cost;
  } else if (sc.solve_kind == "p_partial") {
    const PPartialEquilibrium e = solve_p_partial(sc.model, sc.solve_p, grid);
    parameter = sc.solve_p;
    xbar = e.deviator.xbar_T;
    cost = e.hat_J_p;
    t.columns = {"q", "parameter", "xbar_T", "cost", "population_xbar_T", "star_J_p"};
    t.rows.push_back({sc.model.q, parameter, xbar, cost, e.population_xbar_T, e.star_J_p});
    return t;
  } else {
    const Equilibrium e = best_response(sc.model, EnvironmentMean{sc.solve_env}, grid);
    parameter = sc.solve_env;
    xbar = e.xbar_T;
    cost = e.cost;
  }
  t.rows.push_back({sc.model.q, parameter, xbar, cost});
  return t;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Evaluates rows[i] = f(xs[i]) concurrently; failing points are dropped and
// described in skipped, keeping the axis order.
template <class F>
void sweep_rows(const std::string& axis, const std::vector<double>& xs, F f, Table& t,
                std::vector<std::string>& skipped) {
  const int n = static_cast<int>(xs.size());
  std::vector<std::vector<double>> rows(n);
  std::vector<std::string> errors(n);
  std::vector<std::exception_ptr> fatal(n);
  parallel_for(n, [&](int i) {
    try {
      rows[i] = f(xs[i]);
    } catch (const Error& e) {
      if (is_solver_failure(e.code())) {
        errors[i] = e.what();
      } else {
        fatal[i] = std::current_exception();
      }
    } catch (...) {
      fatal[i] = std::current_exception();
    }
  });
  for (int i = 0; i < n; ++i) {
    if (fatal[i]) std::rethrow_exception(fatal[i]);
    if (!errors[i].empty()) {
      skipped.push_back(axis + "=" + fmt("%.12g", xs[i]) + ": " + errors[i]);
      continue;
    }
    t.rows.push_back(std::move(rows[i]));
  }
}

Table p_sweep_table(const ModelParams& model, int n_steps, const std::vector<double>& ps,
                    std::vector<std::string>& skipped) {
  const TimeGrid grid = make_grid(model, n_steps);
  const Equilibrium mfc = solve_mfc(model, grid);
  Table t;
  t.columns = {"p", "hat_J_p", "star_J_p", "J_star"};
  sweep_rows("p", ps, [&](double p) {
    const PPartialEquilibrium e = solve_p_partial(model, p, grid, mfc);
    return std::vector<double>{p, e.hat_J_p, e.star_J_p, mfc.cost};
  }, t, skipped);
  return t;
}

std::vector<double> q_row(const ModelParams& base, int n_steps, double q, double tol) {
  ModelParams m = base;
  m.q = q;
  const TimeGrid grid = make_grid(m, n_steps);
  const CostReport c = cost_report(m, 0.0, grid);
  const PStarResult ps = p_star(m, grid, tol);
  return {q, c.J_star, c.hat_J_0, c.hat_J_1, c.PoI, c.PoA.value_or(kNaN), ps.p_star,
          ps.status == PStarStatus::kNoSignChange ? 0.0 : 1.0};
}

const std::vector<std::string> kQColumns = {"q", "J_star", "hat_J_0", "hat_J_1", "PoI", "PoA",
                                            "p_star", "p_star_found"};

}  // namespace

RunResult run_scenario(const Scenario& sc) {
  check_params(sc.model);
  RunResult res;
  switch (sc.task) {
    case TaskKind::kSolve:
      res.tables.push_back(solve_table(sc));
      break;
    case TaskKind::kSweep: {
      const std::vector<double> xs = axis_points(sc.sweep_from, sc.sweep_to, sc.sweep_points);
      if (sc.sweep_axis == "p") {
        res.tables.push_back(p_sweep_table(sc.model, sc.n_steps, xs, res.skipped));
      } else if (sc.sweep_axis == "lambda") {
        const TimeGrid grid = make_grid(sc.model, sc.n_steps);
        Table t;
        t.columns = {"lambda", "xbar_T", "J_lambda"};
        sweep_rows("lambda", xs, [&](double lam) {
          const Equilibrium e = solve_lambda_interpolated(sc.model, lam, grid);
          return std::vector<double>{lam, e.xbar_T, e.cost};
        }, t, res.skipped);
        res.tables.push_back(std::move(t));
      } else {
        Table t;
        t.columns = kQColumns;
        sweep_rows("q", xs, [&](double q) { return q_row(sc.model, sc.n_steps, q, sc.pstar_tol); },
                   t, res.skipped);
        res.tables.push_back(std::move(t));
      }
      break;
    }
    case TaskKind::kPoi: {
      const TimeGrid grid = make_grid(sc.model, sc.n_steps);
      const CostReport c = cost_report(sc.model, sc.poi_p, grid);
      const AdjointDiagnostic y = poi_adjoint(sc.model, grid);
      Table t;
      t.columns = {"q", "p", "hat_J_p", "star_J_p", "J_star", "hat_J_0", "hat_J_1", "PoI", "PoA",
                   "integral_Y_sq", "Y_vanishes"};
      t.rows.push_back({sc.model.q, c.p, c.hat_J_p, c.star_J_p, c.J_star, c.hat_J_0, c.hat_J_1, c.PoI,
                        c.PoA.value_or(kNaN), y.integral_Y_sq, y.vanishes ? 1.0 : 0.0});
      res.tables.push_back(std::move(t));
      break;
    }
    case TaskKind::kPStar: {
      const TimeGrid grid = make_grid(sc.model, sc.n_steps);
      const PStarResult ps = p_star(sc.model, grid, sc.pstar_tol);
      Table t;
      t.columns = {"q", "p_star", "gap", "J_star", "found", "identically_equal"};
      t.rows.push_back({sc.model.q, ps.p_star, ps.gap, ps.J_star,
                        ps.status == PStarStatus::kNoSignChange ? 0.0 : 1.0,
                        ps.status == PStarStatus::kIdenticallyEqual ? 1.0 : 0.0});
      res.tables.push_back(std::move(t));
      break;
    }
    case TaskKind::kDeviate: {
      const TimeGrid grid = make_grid(sc.model, sc.n_steps);
      IterationTrace trace;
      if (sc.deviate_schedule == "constant") {
        trace = run_fixed_point(sc.model, WeightSchedule::constant(sc.deviate_p), sc.deviate_N,
                                sc.deviate_tol, grid);
      } else if (sc.deviate_schedule == "sequence") {
        trace = run_fixed_point(sc.model, sc.deviate_p_sequence, sc.deviate_N, sc.deviate_tol, grid);
      } else {
        trace = run_fictitious_play(sc.model, sc.deviate_q_tilde, sc.deviate_N, grid);
      }
      Table t;
      t.columns = {"n", "Q_n", "population_xbar_T", "best_response_xbar_T", "residual"};
      for (const IterationRecord& r : trace.records) {
        t.rows.push_back({static_cast<double>(r.n), r.Q_n, r.population_xbar_T,
                          r.best_response_xbar_T, r.residual});
      }
      res.tables.push_back(std::move(t));
      break;
    }
    case TaskKind::kFigures: {
      const std::vector<double> ps = axis_points(0.0, 1.0, sc.figures_points);
      for (double q : sc.figures_q_list) {
        ModelParams m = sc.model;
        m.q = q;
        try {
          Table t = p_sweep_table(m, sc.n_steps, ps, res.skipped);
          t.name = "costs_q" + fmt("%g", q);
          res.tables.push_back(std::move(t));
        } catch (const Error& e) {
          if (!is_solver_failure(e.code())) throw;
          res.skipped.push_back("q=" + fmt("%.12g", q) + ": " + e.what());
        }
      }
      Table t;
      t.name = "pstar";
      t.columns = kQColumns;
      sweep_rows("q", sc.figures_q_list,
                 [&](double q) { return q_row(sc.model, sc.n_steps, q, sc.pstar_tol); }, t,
                 res.skipped);
      res.tables.push_back(std::move(t));
      break;
    }
  }
  return res;
}

std::string format_csv(const Table& table, const std::string& provenance) {
  std::string out = provenance + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt("%.12g", row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_json(const Table& table, const Scenario& scenario) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  const Config resolved = scenario.resolved();
  for (const auto& [k, v] : resolved.values()) prov[k] = v;
  doc["provenance"] = prov;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      // Same 12 significant digits as the CSV; NaN becomes null.
      if (std::isfinite(row[i])) {
        obj[table.columns[i]] = std::strtod(fmt("%.12g", row[i]).c_str(), nullptr);
      } else {
        obj[table.columns[i]] = nullptr;
      }
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::vector<std::string> write_outputs(const Scenario& scenario, const RunResult& result) {
  namespace fs = std::filesystem;
  const std::string ext = scenario.format == OutputFormat::kJson ? ".json" : ".csv";
  const std::string prov = provenance_line(scenario);
  std::vector<std::string> written;
  auto emit = [&](const fs::path& path, const Table& t) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
    out << (scenario.format == OutputFormat::kJson ? format_json(t, scenario) : format_csv(t, prov));
    out.close();
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
    written.push_back(path.string());
  };

  if (scenario.task == TaskKind::kFigures) {
    const fs::path dir = scenario.output_path.empty() ? fs::path(".") : fs::path(scenario.output_path);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::kIo, "cannot create directory " + dir.string());
    for (const Table& t : result.tables) emit(dir / (t.name + ext), t);
    return written;
  }
  if (scenario.output_path.empty() || scenario.output_path == "-") {
    for (const Table& t : result.tables) {
      std::cout << (scenario.format == OutputFormat::kJson ? format_json(t, scenario)
                                                          : format_csv(t, prov));
    }
    return written;
  }
  for (const Table& t : result.tables) emit(scenario.output_path, t);
  return written;
}

int exit_code_for(ErrorCode code) {
  if (code == ErrorCode::kIo) return 4;
  if (is_solver_failure(code)) return 3;
  return 2;
}

}  // namespace mfcoop
