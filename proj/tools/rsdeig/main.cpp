#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace rsdeig::cli;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--problem", cfg.problem, "problem recipe")->required();
  sub->add_option("--precond", cfg.precond, "preconditioner recipe");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--dense-cap", cfg.dense_cap, "largest dimension for the dense reference eigensolver");
  sub->add_option("--out", cfg.out_path, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preconditioned Riemannian steepest descent for the smallest eigenpair"};
  app.require_subcommand(1);

  RunConfig solve_cfg;
  auto* solve = app.add_subcommand("solve", "run an eigensolver; result JSON, optional trace CSV");
  add_common(solve, solve_cfg);
  solve->add_option("--method", solve_cfg.method, "rsd | pinvit-variant | pinvit-classic");
  solve->add_option("--step", solve_cfg.step, "theory | constant:c | fixed:eta");
  solve->add_option("--tol", solve_cfg.tol, "relative residual tolerance");
  solve->add_option("--maxit", solve_cfg.maxit, "iteration cap");
  solve->add_option("--init", solve_cfg.init, "auto | gaussian | smooth | eigvec");
  solve->add_option("--trace", solve_cfg.trace_path, "trace CSV path");
  solve->add_option("--smoothness-factor", solve_cfg.smoothness_factor, "multiplier on gamma(x)");

  RunConfig phi_cfg;
  auto* phi = app.add_subcommand("phi", "angle of distortion and spectral-equivalence diagnostics");
  add_common(phi, phi_cfg);
  phi->add_flag("--json", phi_cfg.json, "print JSON instead of the text table");

  RunConfig prob_cfg;
  auto* prob = app.add_subcommand("prob", "empirical success probabilities of the start conditions");
  add_common(prob, prob_cfg);
  prob->add_option("--trials", prob_cfg.trials, "number of trials");
  prob->add_option("--sampler", prob_cfg.sampler, "gaussian | smooth");
  prob->add_option("--init", prob_cfg.init, "eigvec forces u0 = u*; otherwise --sampler applies");

  ValidateConfig val_cfg;
  auto* val = app.add_subcommand("validate", "property suite over random dense instances");
  val->add_option("--seeds", val_cfg.seeds, "seeds per (n, B) cell");
  val->add_option("--sizes", val_cfg.sizes, "dimensions")->delimiter(',');
  val->add_option("--kinds", val_cfg.kinds, "identity, random, mp-chol, perturbed")->delimiter(',');
  val->add_option("--samples", val_cfg.samples, "samples per instance");
  val->add_option("--equivalence-steps", val_cfg.equivalence_steps, "steps of the x-space replay (0 disables)");
  val->add_option("--slack", val_cfg.slack, "additive slack");
  val->add_option("--smoothness-factor", val_cfg.smoothness_factor, "multiplier on gamma(x)");
  val->add_option("--out", val_cfg.out_path, "report JSON path");
  val->add_flag("--inject-bug", val_cfg.inject_bug)->group("");

  TableConfigArgs tab_cfg;
  auto* tab = app.add_subcommand("table", "desk-scale experiment table as CSV");
  tab->add_option("name", tab_cfg.name, "phi-ddm-fixedH | phi-ddm-fixedh | prob-ddm | prob-kernel")->required();
  tab->add_option("--config", tab_cfg.config_path, "grid overrides, one `key = v1, v2` per line");
  tab->add_option("--out", tab_cfg.out_path, "CSV path (default stdout)");
  tab->add_option("--timing", tab_cfg.timing_path, "per-row wall time CSV");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return cmd_solve(solve_cfg, std::cout, std::cerr);
  if (phi->parsed()) return cmd_phi(phi_cfg, std::cout, std::cerr);
  if (prob->parsed()) return cmd_prob(prob_cfg, std::cout, std::cerr);
  if (val->parsed()) return cmd_validate(val_cfg, std::cout, std::cerr);
  return cmd_table(tab_cfg, std::cout, std::cerr);
}
