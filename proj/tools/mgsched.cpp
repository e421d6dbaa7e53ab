// mgsched — day-ahead microgrid scheduling under renewable and load
// uncertainty. Subcommands: solve, sweep, compare, validate, export-mps.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgsched/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Chance-constrained day-ahead microgrid scheduler (discretized "
      "step transformation + MILP, plus a PSO/Monte-Carlo baseline)"};
  app.require_subcommand(1);

  mgsched::cli::SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve one scenario");
  solve->add_option("--scenario", solve_args.scenario_path, "Scenario JSON file")
      ->required();
  solve->add_option("--method", solve_args.method,
                    "dst-quantile | dst-bigm | hia")
      ->default_val("dst-quantile");
  solve->add_option("--alpha", solve_args.alpha,
                    "Override the scenario confidence level");
  solve->add_option("--seed", solve_args.seed, "RNG seed (hia)")
      ->default_val(1);
  solve->add_option("--out", solve_args.out_dir, "Output directory")
      ->default_val(".");

  mgsched::cli::SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Solve across one parameter axis");
  sweep->add_option("--scenario", sweep_args.scenario_path, "Scenario JSON file")
      ->required();
  sweep->add_option("--axis", sweep_args.axis,
                    "alpha | ess_power | ess_capacity | sigma_l | step_q")
      ->required();
  sweep
      ->add_option("--values", sweep_args.values,
                   "Axis values (alpha and step_q absolute; ess_* and "
                   "sigma_l as scale fractions)")
      ->required()
      ->expected(-1);
  sweep->add_option("--alpha", sweep_args.alpha,
                    "Override the scenario confidence level");
  sweep->add_option("--jobs", sweep_args.jobs, "Concurrent solves")
      ->default_val(1);
  sweep->add_option("--out", sweep_args.out_dir, "Output directory")
      ->default_val(".");

  mgsched::cli::CompareArgs compare_args;
  auto* compare = app.add_subcommand(
      "compare", "DST vs HIA at confidence levels 0.90 / 0.95 / 1.00");
  compare
      ->add_option("--scenario", compare_args.scenario_path,
                   "Scenario JSON file")
      ->required();
  compare->add_option("--runs", compare_args.runs, "HIA repetitions per level")
      ->default_val(3);
  compare->add_option("--seed", compare_args.seed, "First HIA seed")
      ->default_val(1);
  compare->add_option("--jobs", compare_args.jobs, "Concurrent HIA runs")
      ->default_val(1);
  compare->add_option("--out", compare_args.out_dir, "Output directory")
      ->default_val(".");

  mgsched::cli::ValidateArgs validate_args;
  auto* validate = app.add_subcommand(
      "validate", "Monte-Carlo adequacy check of a schedule CSV");
  validate
      ->add_option("--scenario", validate_args.scenario_path,
                   "Scenario JSON file")
      ->required();
  validate
      ->add_option("--schedule", validate_args.schedule_path,
                   "Schedule CSV produced by solve")
      ->required();
  validate->add_option("--samples", validate_args.n_samples,
                       "Monte-Carlo samples per period")
      ->default_val(100000);
  validate->add_option("--seed", validate_args.seed, "RNG seed")
      ->default_val(1);
  validate->add_option("--alpha", validate_args.alpha,
                       "Override the scenario confidence level");
  validate->add_option("--out", validate_args.out_dir, "Output directory")
      ->default_val(".");

  mgsched::cli::ExportArgs export_args;
  auto* export_mps = app.add_subcommand(
      "export-mps", "Write the transformed MILP in fixed-format MPS");
  export_mps
      ->add_option("--scenario", export_args.scenario_path,
                   "Scenario JSON file")
      ->required();
  export_mps
      ->add_option("--method", export_args.method, "dst-quantile | dst-bigm")
      ->default_val("dst-quantile");
  export_mps->add_option("--alpha", export_args.alpha,
                         "Override the scenario confidence level");
  export_mps->add_option("--out", export_args.out_dir, "Output directory")
      ->default_val(".");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : mgsched::cli::kExitValidation;
  }

  try {
    if (solve->parsed())
      return mgsched::cli::cmd_solve(solve_args, std::cout, std::cerr);
    if (sweep->parsed())
      return mgsched::cli::cmd_sweep(sweep_args, std::cout, std::cerr);
    if (compare->parsed())
      return mgsched::cli::cmd_compare(compare_args, std::cout, std::cerr);
    if (validate->parsed())
      return mgsched::cli::cmd_validate(validate_args, std::cout, std::cerr);
    if (export_mps->parsed())
      return mgsched::cli::cmd_export_mps(export_args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mgsched::cli::kExitValidation;
  }
  return mgsched::cli::kExitValidation;
}
