#include "rsdeig/recipes.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "rsdeig/error.hpp"
#include "rsdeig/matrix_market.hpp"
#include "rsdeig/mesh.hpp"

namespace rsdeig {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

long long parse_int(std::string_view s, const char* what) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) bad(std::string("bad integer for ") + what + ": '" + std::string(s) + "'");
  return v;
}

double parse_real(std::string_view s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(std::string(s), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) bad(std::string("bad number for ") + what + ": '" + std::string(s) + "'");
  return v;
}

std::size_t parse_count(std::string_view s, const char* what) {
  const long long v = parse_int(s, what);
  if (v < 0) bad(std::string(what) + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

void reject_unknown(const Recipe& r, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : r.args) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) bad("unknown key '" + k + "' in " + r.head + " recipe");
  }
}

const std::string& require(const Recipe& r, std::string_view key) {
  const std::string* v = r.find(key);
  if (v == nullptr) bad(r.head + " recipe needs " + std::string(key) + "=");
  return *v;
}

KernelSpec parse_kernel(const Recipe& r, KernelKind kind) {
  reject_unknown(r, {"n", "seed", "d", "tau"});
  KernelSpec k;
  k.kind = kind;
  k.n = parse_count(require(r, "n"), "n");
  k.seed = static_cast<std::uint64_t>(parse_count(require(r, "seed"), "seed"));
  if (const auto* d = r.find("d")) k.d = parse_count(*d, "d");
  if (const auto* t = r.find("tau")) k.tau = parse_real(*t, "tau");
  if (k.n < 2) bad("kernel recipes need n >= 2");
  if (k.tau < 0.0) bad("tau must be >= 0");
  return k;
}

}  // namespace

double parse_dyadic(std::string_view text) {
  if (text.size() > 2 && text.substr(0, 2) == "2^") {
    const long long k = parse_int(text.substr(2), "dyadic exponent");
    return std::ldexp(1.0, static_cast<int>(k));
  }
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const double num = parse_real(text.substr(0, slash), "fraction");
    const double den = parse_real(text.substr(slash + 1), "fraction");
    if (den == 0.0) bad("zero denominator");
    return num / den;
  }
  return parse_real(text, "mesh width");
}

const std::string* Recipe::find(std::string_view key) const {
  for (const auto& [k, v] : args)
    if (k == key) return &v;
  return nullptr;
}

Recipe parse_recipe(std::string_view text) {
  Recipe r;
  const auto colon = text.find(':');
  r.head = std::string(text.substr(0, colon));
  if (r.head.empty()) bad("empty recipe");
  if (colon == std::string_view::npos) return r;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) bad("expected key=value in '" + std::string(item) + "'");
    r.args.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return r;
}

ProblemSpec parse_problem(std::string_view recipe) {
  ProblemSpec s;
  if (recipe.substr(0, 4) == "mtx:") {
    s.kind = ProblemKind::Mtx;
    std::string_view rest = recipe.substr(4);
    if (const auto m = rest.find(",mass="); m != std::string_view::npos) {
      s.mass_path = std::string(rest.substr(m + 6));
      rest = rest.substr(0, m);
    }
    s.path = std::string(rest);
    if (s.path.empty()) bad("mtx recipe needs a path");
    return s;
  }
  const Recipe r = parse_recipe(recipe);
  if (r.head == "laplace-fd" || r.head == "laplace-fem") {
    reject_unknown(r, {"h"});
    s.kind = r.head == "laplace-fd" ? ProblemKind::LaplaceFd : ProblemKind::LaplaceFem;
    s.h = parse_dyadic(require(r, "h"));
    cells_per_side(s.h);
  } else if (r.head == "kernel-laplace") {
    s.kind = ProblemKind::KernelLaplace;
    s.kernel = parse_kernel(r, KernelKind::Laplacian);
  } else if (r.head == "kernel-poly") {
    s.kind = ProblemKind::KernelPoly;
    s.kernel = parse_kernel(r, KernelKind::PolyComplex);
  } else {
    bad("unknown problem recipe '" + r.head + "'");
  }
  return s;
}

EigenProblem build_problem(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::LaplaceFd:
      return laplace_fd(spec.h);
    case ProblemKind::LaplaceFem:
      return laplace_fem(spec.h);
    case ProblemKind::KernelLaplace:
    case ProblemKind::KernelPoly:
      return kernel_matrix(spec.kernel);
    case ProblemKind::Mtx: {
      SparseSym a = read_matrix_market_file(spec.path);
      if (spec.mass_path.empty()) return make_sparse_problem(std::move(a), "mtx:" + spec.path);
      return generalized_reduce(a, read_matrix_market_file(spec.mass_path), "mtx:" + spec.path);
    }
  }
  bad("unreachable problem kind");
}

PrecondSpec parse_precond(std::string_view recipe) {
  PrecondSpec s;
  if (recipe.substr(0, 7) == "scaled:") {
    s.kind = PrecondKind::Scaled;
    s.inner = std::make_shared<const PrecondSpec>(parse_precond(recipe.substr(7)));
    return s;
  }
  const Recipe r = parse_recipe(recipe);
  if (r.head == "identity" || r.head == "exact" || r.head == "mp-chol") {
    if (!r.args.empty()) bad(r.head + " takes no arguments");
    s.kind = r.head == "identity" ? PrecondKind::Identity
             : r.head == "exact"  ? PrecondKind::Exact
                                  : PrecondKind::MpChol;
  } else if (r.head == "ddm") {
    reject_unknown(r, {"H", "overlap"});
    s.kind = PrecondKind::Ddm;
    s.H = parse_dyadic(require(r, "H"));
    if (const auto* o = r.find("overlap")) s.overlap = parse_real(*o, "overlap");
    if (!(s.overlap > 0.0 && s.overlap <= 1.0)) bad("overlap must lie in (0, 1]");
    cells_per_side(s.H);
  } else {
    bad("unknown preconditioner recipe '" + r.head + "'");
  }
  return s;
}

PrecondPtr build_precond(const PrecondSpec& spec, const EigenProblem& p) {
  switch (spec.kind) {
    case PrecondKind::Identity:
      return make_identity(p.dim);
    case PrecondKind::Exact:
      return make_exact(p.dim, p.apply_a, p.solve_a, "exact");
    case PrecondKind::MpChol:
      return make_mp_cholesky(p.to_dense());
    case PrecondKind::Ddm: {
      if (!p.mesh_width || !p.sparse)
        throw Error(ErrorCode::InvalidArgument, "ddm needs a laplace-fd or laplace-fem problem");
      const MeshHierarchy hier = mesh_hierarchy(spec.H, *p.mesh_width, spec.overlap);
      PrecondPtr ddm = make_ddm(hier, *p.sparse);
      if (p.is_reduced()) return std::make_shared<ReducedPreconditioner>(ddm, p.mass_factor);
      return ddm;
    }
    case PrecondKind::Scaled: {
      PrecondPtr inner = build_precond(*spec.inner, p);
      const SpectralBounds nu = kappa_nu(p, *inner);
      return spectral_scale(inner, nu.nu_min, nu.nu_max);
    }
  }
  bad("unreachable preconditioner kind");
}

}  // namespace rsdeig
