#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsdeig/diagnostics.hpp"
#include "rsdeig/solvers.hpp"
#include "rsdeig/validation.hpp"

namespace rsdeig::cli {

// theory | constant:c | fixed:eta. Throws ParseError.
StepPolicy parse_step(const std::string& s);
// gaussian | smooth
Sampler parse_sampler(const std::string& s);
// identity | random | mp-chol | perturbed
BKind parse_kind(const std::string& s);

struct RunConfig {
  std::string problem;
  std::string precond = "identity";
  std::string method = "rsd";  // rsd | pinvit-variant | pinvit-classic
  std::string step = "theory";  // theory | constant:c | fixed:eta
  double tol = 1e-8;
  std::size_t maxit = 1000;
  std::uint64_t seed = 1;
  std::string init = "auto";  // auto | gaussian | smooth | eigvec
  std::size_t trials = 100;
  std::string sampler = "gaussian";
  std::string trace_path;
  std::string out_path;
  bool json = false;
  std::size_t dense_cap = 5000;
  double smoothness_factor = 1.0;
};

struct ValidateConfig {
  std::size_t seeds = 20;
  std::vector<std::size_t> sizes = {6, 12, 20};
  std::vector<std::string> kinds = {"identity", "random", "mp-chol"};
  std::size_t samples = 500;
  std::size_t equivalence_steps = 50;
  double slack = 1e-10;
  double smoothness_factor = 1.0;
  bool inject_bug = false;
  std::string out_path;
};

struct TableConfigArgs {
  std::string name;
  std::string config_path;
  std::string out_path;
  std::string timing_path;
};

// Exit codes: 0 converged, 2 iteration cap or stagnation, 1 configuration error.
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_phi(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_prob(const RunConfig& cfg, std::ostream& out, std::ostream& err);
// 0 on a clean grid, 3 on any violation.
int cmd_validate(const ValidateConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_table(const TableConfigArgs& cfg, std::ostream& out, std::ostream& err);

}  // namespace rsdeig::cli
