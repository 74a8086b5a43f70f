#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsdeig/diagnostics.hpp"
#include "rsdeig/preconditioner.hpp"
#include "rsdeig/problems.hpp"

namespace rsdeig {

// "2^-4", "1/16" or a plain decimal. Throws ParseError.
double parse_dyadic(std::string_view text);

// "head:k1=v1,k2=v2" split into its parts. Throws ParseError on a malformed pair.
struct Recipe {
  std::string head;
  std::vector<std::pair<std::string, std::string>> args;
  const std::string* find(std::string_view key) const;
};
Recipe parse_recipe(std::string_view text);

enum class ProblemKind { LaplaceFd, LaplaceFem, KernelLaplace, KernelPoly, Mtx };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::LaplaceFd;
  double h = 0.0;
  KernelSpec kernel;
  std::string path;
  std::string mass_path;
};

// laplace-fd:h=2^-k, laplace-fem:h=2^-k, kernel-laplace:n=..,seed=..[,d=..][,tau=..],
// kernel-poly:n=..,seed=..[,d=..][,tau=..], mtx:path[,mass=path].
ProblemSpec parse_problem(std::string_view recipe);
EigenProblem build_problem(const ProblemSpec& spec);

enum class PrecondKind { Identity, Exact, MpChol, Ddm, Scaled };

struct PrecondSpec {
  PrecondKind kind = PrecondKind::Identity;
  double H = 0.0;
  double overlap = 0.5;
  std::shared_ptr<const PrecondSpec> inner;  // Scaled only
};

// identity, exact, mp-chol, ddm:H=2^-k[,overlap=r], scaled:<inner>.
PrecondSpec parse_precond(std::string_view recipe);

// Builds B for `p`. DDM needs a mesh problem and is built on the stiffness
// matrix; for a mass-reduced problem every B is carried to the reduced space.
// Scaled recipes estimate nu_min, nu_max of the inner B first.
PrecondPtr build_precond(const PrecondSpec& spec, const EigenProblem& p);

}  // namespace rsdeig
