// qsatbench: generate k-SAT instances, run the backtracking solver, evaluate
// quantum query/gate bounds, and aggregate scaling fits and regime grids.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qsat/backtracker.hpp"
#include "qsat/cost_model.hpp"
#include "qsat/dimacs.hpp"
#include "qsat/fitting.hpp"
#include "qsat/harness.hpp"
#include "qsat/instance_gen.hpp"
#include "qsat/oracles.hpp"
#include "qsat/quantum_bounds.hpp"
#include "qsat/records.hpp"
#include "qsat/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 2;
constexpr int kExitPartial = 3;

double parse_beta(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::string beta_label(double beta) {
  if (std::isinf(beta)) return "inf";
  std::ostringstream s;
  s << beta;
  return s.str();
}

int cmd_gen(int n, int k, const std::string& beta_str, double ratio, int count,
            std::uint64_t seed, const std::string& out_dir) {
  const double beta = parse_beta(beta_str);
  const int m = ratio > 0 ? static_cast<int>(std::floor(ratio * n + 0.5))
                          : qsat::clauses_for_threshold(n, k);
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t inst_seed =
        count == 1 ? seed : qsat::rng::derive(seed, {static_cast<std::uint64_t>(i)});
    const qsat::CnfFormula f = qsat::sample_powerlaw_ksat(n, k, m, beta, inst_seed);
    std::ostringstream name;
    name << "k" << k << "_b" << beta_label(beta) << "_n" << n << "_i" << i << ".cnf";
    const std::string path = (fs::path(out_dir) / name.str()).string();
    qsat::write_dimacs_file(f, path);
    std::cout << path << "\n";
  }
  return kExitOk;
}

int cmd_solve(const std::vector<std::string>& files, double delta,
              std::uint64_t node_budget, const std::string& out,
              const std::string& solver, double timeout_s) {
  std::ofstream out_file;
  std::ostream* sink = &std::cout;
  if (!out.empty()) {
    out_file.open(out);
    if (!out_file) {
      std::cerr << "cannot open " << out << "\n";
      return kExitBadConfig;
    }
    sink = &out_file;
  }
  int skipped = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const qsat::CnfFormula f = qsat::read_dimacs_file(files[i]);
    qsat::validate(f);
    try {
      qsat::ExperimentRecord rec = qsat::evaluate_instance(
          f, static_cast<int>(i), delta, qsat::default_cost_profile(), node_budget);
      if (!solver.empty())
        rec.classical = qsat::run_external_solver(f, solver, timeout_s);
      *sink << qsat::to_json_line(rec) << "\n";
    } catch (const qsat::NodeBudgetExceeded& e) {
      std::cerr << files[i] << ": " << e.what() << "\n";
      ++skipped;
    }
  }
  return skipped == 0 ? kExitOk : kExitPartial;
}

int cmd_bounds(const std::string& in_path, double delta) {
  std::string text;
  if (in_path.empty() || in_path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(in_path);
    if (!in) {
      std::cerr << "cannot open " << in_path << "\n";
      return kExitBadConfig;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  const json j = json::parse(text);
  // Accepts either a full record or a bare stats object.
  const json& b = j.contains("backtrack") ? j["backtrack"] : j;
  const int n = j.at("n").get<int>();
  const std::uint64_t tree_size = b.at("tree_size").get<std::uint64_t>();
  const std::uint64_t num_solutions = b.value("num_solutions", std::uint64_t{0});
  std::optional<int> depth;
  if (b.contains("first_solution_depth"))
    depth = b["first_solution_depth"].get<int>();

  const qsat::DetectionConfig config = qsat::optimize_detection_config(delta);
  const qsat::DetectionQueries det =
      qsat::detection_queries(config, n, static_cast<double>(tree_size));
  const double search =
      qsat::search_queries(delta, n, tree_size, n, depth);
  qsat::GroverParams grover;
  grover.delta = delta;
  const double grover_q = qsat::grover_expected_queries(
      grover, std::uint64_t{1} << n, num_solutions);

  std::cout << "delta                " << delta << "\n"
            << "config               C=" << config.C << " l=" << config.l
            << " coefficient=" << config.coefficient << "\n"
            << "detection (rounded)  " << det.rounded << "\n"
            << "detection (smooth)   " << det.smooth << "\n"
            << "precision bits       " << det.precision_bits << "\n"
            << "search               " << search << "\n"
            << "grover               " << grover_q << "\n";
  return kExitOk;
}

int cmd_run(const std::string& plan_path, std::optional<double> delta,
            std::optional<std::uint64_t> seed, std::string solver, double timeout_s,
            int jobs, const std::string& out_dir) {
  qsat::ExperimentPlan plan = qsat::read_plan_file(plan_path);
  if (delta) plan.delta = *delta;
  if (seed) plan.seed = *seed;
  if (solver.empty())
    if (const char* env = std::getenv("QSAT_SOLVER")) solver = env;
  if (!solver.empty()) plan.solver_path = solver;
  if (timeout_s > 0) plan.solver_timeout_s = timeout_s;
  if (jobs > 0) plan.jobs = jobs;

  const qsat::RunOutcome outcome = qsat::run_experiment(plan);
  for (const std::string& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
  const auto written = qsat::emit_report(
      outcome.records, out_dir,
      {qsat::ReportFormat::jsonl, qsat::ReportFormat::csv});
  for (const std::string& path : written) std::cout << path << "\n";
  std::cout << outcome.records.size() << " records, " << outcome.skipped
            << " skipped\n";
  return outcome.skipped == 0 ? kExitOk : kExitPartial;
}

int cmd_fit(const std::string& records_path, const std::string& metric_str,
            const std::string& filter_str, int n_min, int n_max) {
  const auto all = qsat::read_jsonl(records_path);
  std::vector<qsat::ExperimentRecord> records;
  for (const auto& r : all)
    if ((n_min == 0 || r.n >= n_min) && (n_max == 0 || r.n <= n_max))
      records.push_back(r);
  const qsat::Metric metric = qsat::metric_from_string(metric_str);
  const qsat::Filter filter = qsat::filter_from_string(filter_str);
  std::cout << "algorithm,metric,filter,slope,intercept\n";
  for (const qsat::Algorithm a :
       {qsat::Algorithm::classical, qsat::Algorithm::detection,
        qsat::Algorithm::search, qsat::Algorithm::grover}) {
    const qsat::Metric m =
        a == qsat::Algorithm::classical ? qsat::Metric::runtime_s : metric;
    try {
      const auto fit = qsat::fit_log2_linear(qsat::median_by_size(records, a, m, filter));
      std::cout << qsat::to_string(a) << ',' << qsat::to_string(m) << ','
                << qsat::to_string(filter) << ',' << fit.slope << ','
                << fit.intercept << "\n";
    } catch (const std::exception&) {
      // metric not present for this algorithm in the record set
    }
  }
  return kExitOk;
}

int cmd_grid(const std::string& records_path, const std::string& basis_str,
             const std::string& metric_str, const std::string& filter_str,
             const std::string& cost_path, const std::string& out_dir) {
  const auto records = qsat::read_jsonl(records_path);
  const qsat::GridBasis basis = basis_str == "one_day" ? qsat::GridBasis::one_day
                                                       : qsat::GridBasis::scaling;
  const qsat::CostModelSpec cost = cost_path.empty()
                                       ? qsat::default_cost_profile()
                                       : qsat::read_cost_profile_file(cost_path);
  const qsat::GridReport report =
      qsat::build_grid(records, basis, qsat::metric_from_string(metric_str),
                       qsat::filter_from_string(filter_str), cost);
  fs::create_directories(out_dir);
  const auto write = [&](const char* name, const std::string& body) {
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream out(path);
    out << body;
    std::cout << path << "\n";
  };
  write("grid.csv", qsat::grid_to_csv(report));
  write("grid.svg", qsat::grid_to_svg(report));
  write("grid.md", qsat::grid_to_markdown(report));
  return kExitOk;
}

int cmd_crossover(double sc, double ic, double sq, double iq, double cq) {
  qsat::ScalingFit classical{sc, ic, qsat::Metric::runtime_s,
                             qsat::Algorithm::classical};
  qsat::ScalingFit quantum{sq, iq, qsat::Metric::tdepth, qsat::Algorithm::detection};
  const auto x = qsat::crossover_time(classical, quantum, cq);
  if (!x) {
    std::cout << "no crossover: classical slope <= quantum slope\n";
    return kExitOk;
  }
  std::cout << "n*            " << x->n_star << "\n"
            << "t_crossover_s " << x->time_s << "\n";
  return kExitOk;
}

int cmd_oneday(double slope, double intercept, std::optional<double> cq) {
  qsat::ScalingFit fit;
  fit.slope = slope;
  fit.intercept = intercept;
  std::cout << "largest n in one day: " << qsat::largest_in_one_day(fit, cq) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int cases) {
  std::vector<qsat::oracles::OracleReport> reports;
  if (suite == "backtracker" || suite == "all")
    reports.push_back(qsat::oracles::verify_backtracker(seed, cases));
  if (suite == "resistance" || suite == "all")
    reports.push_back(qsat::oracles::verify_resistance(seed, cases));
  if (suite == "bounds" || suite == "all")
    reports.push_back(qsat::oracles::verify_bounds(seed, cases));
  if (suite == "grover" || suite == "all")
    reports.push_back(qsat::oracles::verify_grover(seed, cases));
  bool ok = true;
  for (const auto& report : reports) {
    std::cout << report.subject << ": " << report.cases << " cases, "
              << report.mismatches.size() << " mismatches\n";
    for (const auto& m : report.mismatches) {
      std::cout << "  " << m.input_digest << ": expected " << m.expected
                << ", got " << m.got << "\n";
      ok = false;
    }
  }
  return ok ? kExitOk : 1;
}

int cmd_report(const std::string& records_path, const std::string& out_dir,
               const std::vector<std::string>& formats) {
  const auto records = qsat::read_jsonl(records_path);
  std::vector<qsat::ReportFormat> fmts;
  for (const std::string& f : formats) {
    if (f == "csv") fmts.push_back(qsat::ReportFormat::csv);
    else if (f == "jsonl") fmts.push_back(qsat::ReportFormat::jsonl);
    else if (f == "markdown") fmts.push_back(qsat::ReportFormat::markdown);
    else if (f == "svg") fmts.push_back(qsat::ReportFormat::svg);
    else {
      std::cerr << "unknown format " << f << "\n";
      return kExitBadConfig;
    }
  }
  const auto written = qsat::emit_report(records, out_dir, fmts);
  for (const std::string& path : written) std::cout << path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-SAT quantum-vs-classical resource benchmarking"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate random k-SAT instances");
  int gen_n = 20, gen_k = 3, gen_count = 1;
  std::string gen_beta = "inf", gen_out = ".";
  double gen_ratio = 0.0;
  bool gen_threshold = false;
  std::uint64_t gen_seed = 0;
  gen->add_option("--n", gen_n, "variables")->required();
  gen->add_option("--k", gen_k, "literals per clause")->required();
  gen->add_option("--beta", gen_beta, "structure parameter (number or inf)");
  gen->add_option("--ratio", gen_ratio, "clause/variable ratio");
  gen->add_flag("--threshold", gen_threshold, "use the satisfiability threshold ratio");
  gen->add_option("--count", gen_count, "instances to generate");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--out-dir", gen_out, "output directory");

  // solve
  auto* solve = app.add_subcommand("solve", "explore DIMACS instances and emit records");
  std::vector<std::string> solve_files;
  double solve_delta = 1e-3, solve_timeout = 600.0;
  std::uint64_t solve_budget = 100'000'000;
  std::string solve_out, solve_solver;
  solve->add_option("files", solve_files, "DIMACS files")->required();
  solve->add_option("--delta", solve_delta, "target error probability");
  solve->add_option("--budget", solve_budget, "node budget");
  solve->add_option("--out", solve_out, "output file (default stdout)");
  solve->add_option("--solver", solve_solver, "external solver binary");
  solve->add_option("--timeout", solve_timeout, "solver timeout seconds");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "print query bounds for a stats record");
  std::string bounds_in;
  double bounds_delta = 1e-3;
  bounds->add_option("--in", bounds_in, "JSON record file ('-' = stdin)");
  bounds->add_option("--delta", bounds_delta, "target error probability");

  // run
  auto* run = app.add_subcommand("run", "run an experiment plan");
  std::string run_plan, run_solver, run_out = "out";
  double run_timeout = 0.0;
  int run_jobs = 0;
  std::optional<double> run_delta;
  std::optional<std::uint64_t> run_seed;
  double run_delta_raw = -1.0;
  std::uint64_t run_seed_raw = 0;
  bool run_seed_set = false;
  run->add_option("--plan", run_plan, "plan JSON file")->required();
  run->add_option("--delta", run_delta_raw, "override plan delta");
  auto* seed_opt = run->add_option("--seed", run_seed_raw, "override plan seed");
  run->add_option("--solver", run_solver, "external solver (or QSAT_SOLVER env)");
  run->add_option("--timeout", run_timeout, "solver timeout seconds");
  run->add_option("--jobs", run_jobs, "worker threads");
  run->add_option("--out", run_out, "output directory");
  run->callback([&] { run_seed_set = seed_opt->count() > 0; });

  // fit
  auto* fit = app.add_subcommand("fit", "fit log2-linear scaling of medians");
  std::string fit_records, fit_metric = "queries", fit_filter = "mixed";
  int fit_nmin = 0, fit_nmax = 0;
  fit->add_option("--records", fit_records, "records.jsonl")->required();
  fit->add_option("--metric", fit_metric, "queries|tdepth|tcount|runtime");
  fit->add_option("--filter", fit_filter, "sat|unsat|mixed");
  fit->add_option("--n-min", fit_nmin, "restrict to n >= this");
  fit->add_option("--n-max", fit_nmax, "restrict to n <= this");

  // grid
  auto* grid = app.add_subcommand("grid", "build the colored (k, beta) grid");
  std::string grid_records, grid_basis = "scaling", grid_metric = "tdepth";
  std::string grid_filter = "mixed", grid_cost, grid_out = "out";
  grid->add_option("--records", grid_records, "records.jsonl")->required();
  grid->add_option("--basis", grid_basis, "scaling|one_day");
  grid->add_option("--metric", grid_metric, "queries|tdepth|tcount");
  grid->add_option("--filter", grid_filter, "sat|unsat|mixed");
  grid->add_option("--cost", grid_cost, "cost profile file");
  grid->add_option("--out", grid_out, "output directory");

  // crossover
  auto* crossover = app.add_subcommand("crossover", "closed-form crossover time");
  double x_sc = 0, x_ic = 0, x_sq = 0, x_iq = 0, x_cq = 1e-9;
  crossover->add_option("--sc", x_sc, "classical slope")->required();
  crossover->add_option("--ic", x_ic, "classical intercept")->required();
  crossover->add_option("--sq", x_sq, "quantum slope")->required();
  crossover->add_option("--iq", x_iq, "quantum intercept")->required();
  crossover->add_option("--cq", x_cq, "measurement time seconds");

  // oneday
  auto* oneday = app.add_subcommand("oneday", "largest instance solvable in one day");
  double od_slope = 0, od_intercept = 0, od_cq = -1.0;
  oneday->add_option("--slope", od_slope, "fit slope")->required();
  oneday->add_option("--intercept", od_intercept, "fit intercept")->required();
  oneday->add_option("--cq", od_cq, "measurement time (omit for classical runtime)");

  // verify
  auto* verify = app.add_subcommand("verify", "cross-check modules against oracles");
  std::string verify_suite = "all";
  std::uint64_t verify_seed = 20240901;
  int verify_cases = 100;
  verify->add_option("--suite", verify_suite, "backtracker|bounds|resistance|grover|all");
  verify->add_option("--seed", verify_seed, "oracle seed");
  verify->add_option("--cases", verify_cases, "cases per suite");

  // report
  auto* report = app.add_subcommand("report", "emit record reports");
  std::string report_records, report_out = "out";
  std::vector<std::string> report_formats = {"csv", "jsonl", "markdown"};
  report->add_option("--records", report_records, "records.jsonl")->required();
  report->add_option("--out", report_out, "output directory");
  report->add_option("--format", report_formats, "csv jsonl markdown svg");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_n, gen_k, gen_beta, gen_threshold ? 0.0 : gen_ratio,
                     gen_count, gen_seed, gen_out);
    if (solve->parsed())
      return cmd_solve(solve_files, solve_delta, solve_budget, solve_out,
                       solve_solver, solve_timeout);
    if (bounds->parsed()) return cmd_bounds(bounds_in, bounds_delta);
    if (run->parsed()) {
      if (run_delta_raw > 0) run_delta = run_delta_raw;
      if (run_seed_set) run_seed = run_seed_raw;
      return cmd_run(run_plan, run_delta, run_seed, run_solver, run_timeout,
                     run_jobs, run_out);
    }
    if (fit->parsed())
      return cmd_fit(fit_records, fit_metric, fit_filter, fit_nmin, fit_nmax);
    if (grid->parsed())
      return cmd_grid(grid_records, grid_basis, grid_metric, grid_filter,
                      grid_cost, grid_out);
    if (crossover->parsed()) return cmd_crossover(x_sc, x_ic, x_sq, x_iq, x_cq);
    if (oneday->parsed())
      return cmd_oneday(od_slope, od_intercept,
                        od_cq > 0 ? std::optional<double>(od_cq) : std::nullopt);
    if (verify->parsed()) return cmd_verify(verify_suite, verify_seed, verify_cases);
    if (report->parsed()) return cmd_report(report_records, report_out, report_formats);
  } catch (const qsat::PlanError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const qsat::CostProfileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
