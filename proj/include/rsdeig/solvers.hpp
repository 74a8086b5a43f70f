#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsdeig/diagnostics.hpp"
#include "rsdeig/preconditioner.hpp"
#include "rsdeig/problems.hpp"

namespace rsdeig {

enum class StepKind { TheoryLocal, ConstantCor, Fixed };

struct StepPolicy {
  StepKind kind = StepKind::TheoryLocal;
  double value = 0.0;  // c for ConstantCor, eta for Fixed

  static StepPolicy theory() { return {StepKind::TheoryLocal, 0.0}; }
  // Throws InvalidC unless 0 < c < 1/2.
  static StepPolicy constant(double c);
  // Throws InvalidArgument unless eta > 0.
  static StepPolicy fixed(double eta);
};

// eta = a(x)/gamma(x). Throws OutsideBasin when dist(x, x*) >= phi.
double step_theory(const IterateState& s, const RateContext& ctx);
// eta = c / (kappa^2 (1/lambda_1 - 1/lambda_n)). Throws InvalidC.
double step_constant(const RateContext& ctx, double c);
// 1 - 8 c^2 (1/l1 - 1/l2) / (pi^2 kappa^4 (1/l1 - 1/ln)).
double constant_step_rate(const RateContext& ctx, double c);

enum class Termination { ResidualTol, MaxIters, StagnatedStep };
const char* to_string(Termination t);

struct TraceRecord {
  std::size_t t = 0;
  double lambda = 0.0;
  double f = 0.0;
  double resnorm = 0.0;
  double dist_b = 0.0;  // nan without a rate context
  double eta = 0.0;
  double eta_star = 0.0;
  double beta = 0.0;
  double xi = 0.0;
  double contraction = 0.0;  // dist^2 ratio to the next record
};

struct Trace {
  std::vector<TraceRecord> records;
  std::vector<std::size_t> basin_exits;  // steps taken from dist >= phi
  void write_csv(std::ostream& out) const;
};

struct SolveOptions {
  double tol = 1e-8;
  std::size_t maxit = 1000;
  bool stagnation_guard = true;
  std::size_t stagnation_window = 10;
  // Implicit B: refresh the B-normalization every this many steps.
  std::size_t renorm_refresh = 25;
  bool keep_iterates = false;
};

struct SolveResult {
  Vec u;
  double lambda = 0.0;
  std::size_t iterations = 0;
  Termination reason = Termination::MaxIters;
  Trace trace;
  std::vector<Vec> iterates;  // u_t with ||u_t||_B = 1 when keep_iterates
};

// Riemannian steepest descent in u-space:
// u <- beta (u - eta* B^{-1} r), eta* = 2 tan(eta g) u^T u / (g (u^T A u)^2).
// ctx supplies u* for TheoryLocal/ConstantCor steps and for distances.
SolveResult rsd_solve(const EigenProblem& p, const Preconditioner& b, const Vec& u0, const StepPolicy& policy,
                      const SolveOptions& opts = {}, const RateContext* ctx = nullptr);

// u <- (u - B^{-1} r) / ||u - B^{-1} r||.
SolveResult pinvit_classic_solve(const EigenProblem& p, const Preconditioner& b, const Vec& u0,
                                 const SolveOptions& opts = {}, const RateContext* ctx = nullptr);

}  // namespace rsdeig
