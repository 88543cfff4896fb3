#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "arakelov/commands.hpp"

using namespace arakelov;

int main(int argc, char** argv) {
  CLI::App app{"Arakelov invariants of hyperelliptic curves and principally polarized abelian varieties"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::string kind = "low-discrepancy";
  std::string format = "json";
  std::string out_path;
  app.add_option("--eps", config.eps, "theta truncation tolerance")->check(CLI::PositiveNumber);
  app.add_option("--samples", config.samples, "Monte Carlo samples per integral")->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "base seed");
  app.add_option("--quad-order", config.quad_order, "initial period quadrature order")->check(CLI::PositiveNumber);
  app.add_option("--kind", kind, "sample points")->check(CLI::IsMember({"pseudo", "low-discrepancy"}));
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "output file (default: stdout)");

  std::string input;
  auto* periods = app.add_subcommand("periods", "period matrix of a curve");
  periods->add_option("input", input, "curve JSON file or preset xn+1:<n>")->required();

  ReportOptions report;
  bool no_mc = false;
  auto* invariants = app.add_subcommand("invariants", "invariant report for a curve or period matrix");
  invariants->add_option("input", input, "curve JSON, period JSON or preset xn+1:<n>")->required();
  invariants->add_flag("--no-curve-integrals", no_mc, "skip S_1, S_g, B and Lambda");
  invariants->add_option("--green-pairs", report.green_pairs, "random pairs for the Green function bound");
  invariants->add_option("--theta-sup-points", report.theta_sup_points, "points for the sampled sup of log ||theta||");

  VerifyOptions vopts;
  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "property checks");
  verify->add_option("suite", suite, "suite")->check(CLI::IsMember(verify_suites()));
  verify->add_option("--genus", vopts.genus, "rosenhain: genus of the random curves (2 or 3)");
  verify->add_option("--trials", vopts.trials, "rosenhain: number of random curves");
  verify->add_option("--curve", vopts.curve, "curve for the periods, identities and bounds suites");
  verify->add_option("--green-pairs", vopts.green_pairs, "bounds: random pairs for the Green bound");
  verify->add_option("--autissier-points", vopts.autissier_points, "bounds: points for the Autissier bound");
  verify->add_option("--tuples", vopts.decomposition_tuples, "identities: tuples for the decomposition check");

  auto* table1 = app.add_subcommand("table1", "delta and phi of y^2 = x^n + 1 for n = 5..8");

  CLI11_PARSE(app, argc, argv);

  config.kind = kind == "pseudo" ? SampleKind::Pseudo : SampleKind::LowDiscrepancy;
  config.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  report.monte_carlo_curve_integrals = !no_mc;
  vopts.config = config;

  if (*periods) return cmd_periods(input, config, out_path, std::cout, std::cerr);
  if (*invariants) return cmd_invariants(input, config, report, out_path, std::cout, std::cerr);
  if (*verify) return cmd_verify(suite, vopts, out_path, std::cout, std::cerr);
  if (*table1) return cmd_table1(config, out_path, std::cout, std::cerr);
  return kExitValidation;
}
