#include "mlab/experiments.hpp"
#include "mlab/funcspec.hpp"
#include "mlab/norms.hpp"
#include "mlab/operators.hpp"
#include "mlab/parallel.hpp"
#include "mlab/poisson.hpp"
#include "mlab/random.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace mlab;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdictFailed = 2;

std::pair<int, int> parse_range(const std::string& text, const std::string& flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError(flag, "expected A:B");
  const int a = std::stoi(text.substr(0, colon)), b = std::stoi(text.substr(colon + 1));
  if (a > b) throw CLI::ValidationError(flag, "empty range " + text);
  return {a, b};
}

json parse_thresholds(const std::vector<std::string>& items) {
  json t = json::object();
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--threshold", "expected key=value, got " + item);
    t[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return t;
}

void print_outputs(const OutputPaths& paths, const ExperimentReport& report) {
  std::cout << "report: " << paths.report.string() << "\n";
  if (!paths.csv.empty()) std::cout << "tables: " << paths.csv.string() << "\n";
  for (const auto& v : report.verdicts)
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << " measured=" << v.measured << "\n";
  std::cout << "status: " << (report.passed() ? "pass" : "fail") << "\n";
}

int finish(const ExperimentReport& report) {
  print_outputs(write_outputs(report), report);
  return report.passed() ? kExitPass : kExitVerdictFailed;
}

// ---- run ----

struct RunArgs {
  std::string config;
  std::string output_dir;
  bool no_csv = false;
};

int cmd_run(const RunArgs& a) {
  ExperimentConfig c = ExperimentConfig::load(a.config);
  if (!a.output_dir.empty()) c.output_directory = a.output_dir;
  if (a.no_csv) c.write_csv = false;
  return finish(run(c));
}

// ---- norm ----

struct NormArgs {
  std::string kind;
  double alpha = 1.0;
  std::string q = "1";
  std::string expr;
  std::string input;
  double origin = -64.0, step = 1.0 / 16;
  std::size_t points = 2048;
  std::optional<int> n_max;
  double x_min = -30.0, x_max = 30.0;
  int mihlin_n_max = 8;
  bool log_periodic = false, accept_tail = false;
  int order = 2;
  double sharpness = 1.0;
};

int cmd_norm(const NormArgs& a) {
  const auto func = [&] {
    if (a.expr.empty()) throw CLI::ValidationError("--expr", "required for --kind " + a.kind);
    return parse(a.expr);
  };
  const auto sampled = [&] {
    if (!a.input.empty()) {
      std::ifstream in(a.input);
      if (!in) throw std::runtime_error("cannot open " + a.input);
      return read_csv(in);
    }
    return sample(func(), a.origin, a.step, a.points);
  };
  json out;
  if (a.kind == "besov") {
    out = besov_norm(sampled(), a.alpha, a.q == "inf" ? BesovQ::Infinity : BesovQ::One, a.n_max, a.sharpness).to_json();
  } else if (a.kind == "einf") {
    out = e_infty_norm(sampled(), a.alpha, a.n_max, a.sharpness).to_json();
  } else if (a.kind == "mihlin") {
    MihlinGrid g;
    g.x_min = a.x_min;
    g.x_max = a.x_max;
    g.n_max = a.mihlin_n_max;
    g.log_periodic = a.log_periodic;
    g.accept_tail = a.accept_tail;
    g.sharpness = a.sharpness;
    out = mihlin_norm(func(), a.alpha, g).to_json();
  } else if (a.kind == "eunif") {
    out = e_unif_norm(func(), a.alpha).to_json();
  } else {
    out = classical_mihlin_seminorm(func(), a.order).to_json();
  }
  std::cout << out.dump(2) << "\n";
  return kExitPass;
}

// ---- poisson ----

struct PoissonArgs {
  std::string which;
  int d = 2;
  double delta = 0.5, epsilon = 0.1, tau = 1.0, y = 1.0, tolerance = 1e-8;
  std::optional<double> c;
  std::optional<double> theta;
  bool theta_sweep = false;
  std::string j_range = "2:10";
  std::string k_range = "-8:8";
  std::string target_form = "stated";
  std::string output_dir = ".";
  std::vector<std::string> thresholds;
};

int cmd_poisson(const PoissonArgs& a) {
  if (a.theta && !a.theta_sweep) {
    const double cc = a.c.value_or(a.d + 0.5);
    json out;
    if (a.which == "c4") {
      const QuadResult r = c4_integral(*a.theta, a.d, a.delta, a.tolerance);
      out = {{"value", r.value}, {"error_estimate", r.error_estimate}, {"converged", r.converged}};
    } else if (a.which == "c2") {
      out = c2_integral(cplx(1.0, a.tau), *a.theta, a.d, cc, a.tolerance).to_json();
    } else {
      out = c3_integral(a.epsilon, *a.theta, a.d, cc, a.tolerance).to_json();
    }
    std::cout << out.dump(2) << "\n";
    return kExitPass;
  }
  const auto [j_min, j_max] = parse_range(a.j_range, "--j-range");
  json p{{"d", a.d}, {"j_min", j_min}, {"j_max", j_max}, {"tolerance", a.tolerance}};
  if (a.c) p["c"] = *a.c;
  std::string scenario = a.which + "-sweep";
  if (a.which == "c4") p["delta"] = a.delta;
  if (a.which == "c2") p["tau"] = a.tau;
  if (a.which == "c3") p["epsilon"] = a.epsilon;
  if (a.which == "hormander") {
    const auto [k_min, k_max] = parse_range(a.k_range, "--k-range");
    p["y"] = a.y;
    p["k_min"] = k_min;
    p["k_max"] = k_max;
  }
  if (a.which == "dini") {
    scenario = "dini";
    p["delta"] = a.delta;
    p["epsilon"] = a.epsilon;
    p["target_form"] = a.target_form;
  }
  const json cfg{{"name", "poisson-" + a.which + "-d" + std::to_string(a.d)},
                 {"scenario", scenario},
                 {"seed", 0},
                 {"poisson", p},
                 {"thresholds", parse_thresholds(a.thresholds)},
                 {"output", {{"directory", a.output_dir}}}};
  return finish(run(ExperimentConfig::from_json(cfg)));
}

// ---- operators ----

struct OperatorArgs {
  std::string which;
  int dimension = 1;
  std::size_t points = 1024;
  double period = 2 * kPi * 8;
  double p = 4.0;
  std::uint64_t seed = 1;
  std::string expr;
  bool project = false;
  int iterations = 200, starts = 4;
  std::string k_range = "0:4";
  int trials = 32;
  bool gaussian = false;
  int count = 100;
  std::string partition_range = "-2:9";
  double theta = 0.0;
  std::vector<double> radii{0.5, 1.0, 2.0, 4.0};
  std::string output_dir = ".";
};

int cmd_operators(const OperatorArgs& a) {
  const TorusGrid g{a.dimension, a.points, a.period};
  g.validate();
  const json cfg{{"name", "operators-" + a.which},
                 {"scenario", "noop"},
                 {"seed", a.seed},
                 {"description", "mlab operators " + a.which},
                 {"grid", {{"dimension", a.dimension}, {"points", a.points}, {"period", a.period}}},
                 {"operator", {{"p", a.p}}},
                 {"thresholds", json::object()},
                 {"output", {{"directory", a.output_dir}}}};
  ExperimentReport report;
  report.config = ExperimentConfig::from_json(cfg);
  const Deadline clock(std::nullopt);
  const SymbolOperator A = laplacian_halfpower_symbol(g);
  const ZeroFrequency zero = a.project ? ZeroFrequency::Project : ZeroFrequency::Evaluate;
  const auto need_expr = [&] {
    if (a.expr.empty()) throw CLI::ValidationError("--expr", "required for operators " + a.which);
    return parse(a.expr);
  };
  const OpNormBudget budget{a.iterations, 1e-12, a.starts, a.seed};

  if (a.which == "opnorm") {
    const SymbolOperator t = multiplier(need_expr(), A, zero);
    const OpNormEstimate e = opnorm_estimate(t, a.p, budget);
    report.tables.push_back({"opnorm", {"expr", "p", "lower_bound", "converged", "iterations", "start", "sup_symbol"}, {}});
    report.tables.back().add({a.expr, a.p, e.lower_bound, e.converged, e.iterations, e.start, t.sup_abs()});
  } else if (a.which == "gamma") {
    const FuncExpr f = need_expr();
    const auto [k_min, k_max] = parse_range(a.k_range, "--k-range");
    OperatorFamily fam;
    for (int k = k_min; k <= k_max; ++k) {
      fam.members.push_back(multiplier(f.dilate(std::ldexp(1.0, -k)), A, zero));
      fam.parameters.push_back({{"k", k}});
    }
    GammaOptions o;
    o.trials = a.trials;
    o.gaussian = a.gaussian;
    o.seed = a.seed;
    const GammaEstimate e = gamma_bound_estimate(fam, a.p, o);
    report.tables.push_back({"gamma", {"expr", "p", "k_min", "k_max", "estimate", "standard_error", "square_function_ratio"}, {}});
    report.tables.back().add({a.expr, a.p, k_min, k_max, e.estimate, e.standard_error, e.square_function_ratio});
    report.fits["selection"] = e.selection;
  } else if (a.which == "pl-ratio") {
    const auto [n_min, n_max] = parse_range(a.partition_range, "--partition-range");
    const PartitionFamily fam = dyadic_partition(n_min, n_max);
    Rng rng(a.seed);
    report.tables.push_back({"ratios", {"field", "ratio"}, {}});
    for (int i = 0; i < a.count; ++i) {
      GridField x = GridField::zeros(g);
      for (auto& v : x.values) v = rng.complex_normal();
      report.tables.back().add({i, paley_littlewood_ratio(A, fam, project_mean_zero(x), a.p)});
    }
  } else {
    std::vector<cplx> lambdas;
    for (double r : a.radii) lambdas.push_back(std::polar(r, a.theta));
    const ResolventReport r = resolvent_check(A, a.theta, lambdas, a.p, budget);
    report.tables.push_back({"resolvent", {"lambda_re", "lambda_im", "value"}, {}});
    for (std::size_t i = 0; i < r.lambdas.size(); ++i)
      report.tables.back().add({r.lambdas[i].real(), r.lambdas[i].imag(), r.values[i]});
    report.fits["max_value"] = r.max_value;
  }
  report.wall_seconds = clock.elapsed();
  return finish(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional-calculus norms, operator estimates and Poisson-kernel sweeps"};
  app.require_subcommand(1);
  app.footer("Threads: set MLAB_THREADS (default: hardware concurrency).");
  int status = kExitPass;

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a configured experiment; exit 0 pass, 2 verdict failed, 1 error");
  run_cmd->add_option("config", run_args.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--output-dir", run_args.output_dir, "Override output.directory");
  run_cmd->add_flag("--no-csv", run_args.no_csv, "Skip the CSV tables");
  run_cmd->callback([&] { status = cmd_run(run_args); });

  NormArgs norm;
  auto* norm_cmd = app.add_subcommand("norm", "Evaluate one norm and print its report as JSON");
  norm_cmd->add_option("--kind", norm.kind)->required()->check(CLI::IsMember({"besov", "mihlin", "einf", "eunif", "classical"}));
  norm_cmd->add_option("--alpha", norm.alpha, "Order")->check(CLI::PositiveNumber);
  norm_cmd->add_option("--q", norm.q, "Besov summation index")->check(CLI::IsMember({"1", "inf"}));
  norm_cmd->add_option("--expr", norm.expr, "Function expression, e.g. '(1+x)^(-1)*exp(i*4*x)'");
  norm_cmd->add_option("--input", norm.input, "Sampled function CSV (besov, einf)");
  norm_cmd->add_option("--origin", norm.origin, "Sampling origin (besov, einf)");
  norm_cmd->add_option("--step", norm.step, "Sampling step (besov, einf)")->check(CLI::PositiveNumber);
  norm_cmd->add_option("--points", norm.points, "Sample count (besov, einf)");
  norm_cmd->add_option("--n-max", norm.n_max, "Highest band (besov, einf)");
  norm_cmd->add_option("--x-min", norm.x_min, "Mihlin log-grid start");
  norm_cmd->add_option("--x-max", norm.x_max, "Mihlin log-grid end");
  norm_cmd->add_option("--mihlin-n-max", norm.mihlin_n_max, "Mihlin highest band");
  norm_cmd->add_flag("--log-periodic", norm.log_periodic, "Mihlin: treat the log-grid as one period");
  norm_cmd->add_flag("--accept-tail", norm.accept_tail, "Mihlin: report instead of failing on a large tail");
  norm_cmd->add_option("--order", norm.order, "Classical seminorm order");
  norm_cmd->add_option("--sharpness", norm.sharpness, "Partition window sharpness")->check(CLI::PositiveNumber);
  norm_cmd->callback([&] { status = cmd_norm(norm); });

  PoissonArgs pa;
  auto* poisson_cmd = app.add_subcommand("poisson", "Poisson-kernel integrals over the theta sweep");
  poisson_cmd->require_subcommand(1);
  for (const std::string which : {"c4", "c2", "c3", "hormander", "dini"}) {
    auto* sub = poisson_cmd->add_subcommand(which, which + " sweep; writes <name>.report.json and .tables.csv");
    sub->add_option("--d", pa.d, "Dimension")->check(CLI::Range(1, 8));
    sub->add_option("--tolerance", pa.tolerance, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--c", pa.c, "Weight exponent c (default d + 1/2)");
    sub->add_option("--j-range", pa.j_range, "theta_j = pi/2 - 2^-j for j in A:B");
    sub->add_flag("--theta-sweep", pa.theta_sweep, "Sweep theta (the default unless --theta is given)");
    sub->add_option("--output-dir", pa.output_dir, "Output directory");
    sub->add_option("--threshold", pa.thresholds, "Verdict threshold key=value (repeatable)");
    if (which == "c4" || which == "dini") sub->add_option("--delta", pa.delta)->check(CLI::Range(0.0, 0.999999));
    if (which == "c3" || which == "dini") sub->add_option("--epsilon", pa.epsilon)->check(CLI::PositiveNumber);
    if (which == "c2") sub->add_option("--tau", pa.tau, "Im s with Re s = 1");
    if (which == "c4" || which == "c2" || which == "c3") sub->add_option("--theta", pa.theta, "Single angle");
    if (which == "hormander") {
      sub->add_option("--k-range", pa.k_range, "Scales 2^k for k in A:B");
      sub->add_option("--y", pa.y, "|y|")->check(CLI::PositiveNumber);
    }
    if (which == "dini") sub->add_option("--target-form", pa.target_form)->check(CLI::IsMember({"stated", "simplified", "identity"}));
    sub->callback([&pa, &status, which] {
      pa.which = which;
      status = cmd_poisson(pa);
    });
  }

  OperatorArgs oa;
  auto* op_cmd = app.add_subcommand("operators", "Operator-norm and gamma estimates on the torus");
  op_cmd->require_subcommand(1);
  for (const std::string which : {"opnorm", "gamma", "pl-ratio", "resolvent"}) {
    auto* sub = op_cmd->add_subcommand(which);
    sub->add_option("--dimension", oa.dimension)->check(CLI::Range(1, 3));
    sub->add_option("--points", oa.points, "Grid points per axis");
    sub->add_option("--period", oa.period)->check(CLI::PositiveNumber);
    sub->add_option("--p", oa.p)->check(CLI::Range(1.0, 1e300));
    sub->add_option("--seed", oa.seed);
    sub->add_option("--output-dir", oa.output_dir);
    if (which == "opnorm" || which == "gamma") {
      sub->add_option("--expr", oa.expr, "Multiplier function of A")->required();
      sub->add_flag("--project", oa.project, "Act on mean-zero fields only");
    }
    if (which == "opnorm" || which == "resolvent") {
      sub->add_option("--iterations", oa.iterations)->check(CLI::PositiveNumber);
      sub->add_option("--starts", oa.starts);
    }
    if (which == "gamma") {
      sub->add_option("--k-range", oa.k_range, "Members f(2^-k A) for k in A:B");
      sub->add_option("--trials", oa.trials)->check(CLI::PositiveNumber);
      sub->add_flag("--gaussian", oa.gaussian, "Score with Gaussian sums");
    }
    if (which == "pl-ratio") {
      sub->add_option("--count", oa.count, "Random fields")->check(CLI::PositiveNumber);
      sub->add_option("--partition-range", oa.partition_range, "Dyadic windows n in A:B");
    }
    if (which == "resolvent") {
      sub->add_option("--theta", oa.theta, "arg lambda");
      sub->add_option("--radii", oa.radii, "|lambda| values");
    }
    sub->callback([&oa, &status, which] {
      oa.which = which;
      status = cmd_operators(oa);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return status;
}
