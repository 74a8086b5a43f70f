#include "commands.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "rsdeig/diagnostics.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/mesh.hpp"
#include "rsdeig/parallel.hpp"
#include "rsdeig/recipes.hpp"
#include "rsdeig/solvers.hpp"
#include "rsdeig/tables.hpp"
#include "rsdeig/validation.hpp"

namespace rsdeig::cli {

namespace {

using json = nlohmann::ordered_json;

enum class Method { Rsd, PinvitClassic };

Method parse_method(const std::string& m) {
  if (m == "rsd" || m == "pinvit-variant") return Method::Rsd;
  if (m == "pinvit-classic") return Method::PinvitClassic;
  throw Error(ErrorCode::ParseError, "unknown method '" + m + "'");
}

}  // namespace

StepPolicy parse_step(const std::string& s) {
  if (s == "theory") return StepPolicy::theory();
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  if (colon == std::string::npos || (head != "constant" && head != "fixed"))
    throw Error(ErrorCode::ParseError, "step must be theory, constant:c or fixed:eta");
  const std::string arg = s.substr(colon + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(arg, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != arg.size()) throw Error(ErrorCode::ParseError, "bad step value '" + arg + "'");
  return head == "constant" ? StepPolicy::constant(v) : StepPolicy::fixed(v);
}

namespace {

enum class Init { Auto, Gaussian, Smooth, Eigvec };

Init parse_init(const std::string& s) {
  if (s == "auto") return Init::Auto;
  if (s == "gaussian") return Init::Gaussian;
  if (s == "smooth") return Init::Smooth;
  if (s == "eigvec") return Init::Eigvec;
  throw Error(ErrorCode::ParseError, "init must be auto, gaussian, smooth or eigvec");
}

}  // namespace

Sampler parse_sampler(const std::string& s) {
  if (s == "gaussian") return Sampler::Gaussian;
  if (s == "smooth") return Sampler::Smooth;
  throw Error(ErrorCode::ParseError, "sampler must be gaussian or smooth");
}

BKind parse_kind(const std::string& s) {
  if (s == "identity") return BKind::Identity;
  if (s == "random") return BKind::Random;
  if (s == "mp-chol") return BKind::MpChol;
  if (s == "perturbed") return BKind::Perturbed;
  throw Error(ErrorCode::ParseError, "unknown preconditioner kind '" + s + "'");
}

namespace {

// Problem, B and rate context built from validated recipes.
struct Setup {
  EigenProblem problem;
  PrecondPtr precond;
  SpectralBounds nu;
  RateContext ctx;
};

Setup build(const ProblemSpec& ps, const PrecondSpec& bs, const RunConfig& cfg) {
  Setup s{build_problem(ps), nullptr, {}, {}};
  ReferenceOptions ro;
  ro.dense_cap = cfg.dense_cap;
  const ReferenceSpectrum& ref = s.problem.reference_spectrum(ro);
  s.precond = build_precond(bs, s.problem);
  s.nu = kappa_nu(s.problem, *s.precond);
  s.ctx = make_rate_context(ref, s.problem.apply_a, *s.precond, s.nu);
  s.ctx.smoothness_factor = cfg.smoothness_factor;
  return s;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemSpec ps = parse_problem(cfg.problem);
    const PrecondSpec bs = parse_precond(cfg.precond);
    const Method method = parse_method(cfg.method);
    const StepPolicy policy = parse_step(cfg.step);
    const Init init = parse_init(cfg.init);
    if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    if (cfg.maxit < 1) throw Error(ErrorCode::InvalidArgument, "maxit must be >= 1");
    if (!(cfg.smoothness_factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothness factor must be > 0");

    Setup s = build(ps, bs, cfg);
    const bool needs_basin = method == Method::Rsd && policy.kind != StepKind::Fixed;

    Vec u0;
    std::size_t draws = 0;
    if (init == Init::Eigvec) {
      u0 = s.ctx.u_star;
    } else {
      // auto: smooth draws when the step rule needs a start inside the basin.
      const bool smooth = init == Init::Smooth || (init == Init::Auto && needs_basin);
      const Sampler sampler = smooth ? Sampler::Smooth : Sampler::Gaussian;
      for (;; ++draws) {
        if (draws == 1000) throw Error(ErrorCode::OutsideBasin, "no start inside the basin in 1000 draws");
        auto [u, bu] = sample_start(*s.precond, sampler, cfg.seed, draws);
        if (!needs_basin || check_initial(u, bu, s.ctx, s.problem.apply_a).condition_new) {
          u0 = std::move(u);
          break;
        }
      }
    }

    SolveOptions so;
    so.tol = cfg.tol;
    so.maxit = cfg.maxit;
    const SolveResult r = method == Method::Rsd ? rsd_solve(s.problem, *s.precond, u0, policy, so, &s.ctx)
                                                : pinvit_classic_solve(s.problem, *s.precond, u0, so, &s.ctx);

    if (!cfg.trace_path.empty()) {
      std::ofstream f(cfg.trace_path);
      if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + cfg.trace_path + "'");
      r.trace.write_csv(f);
    }
    const double resnorm = r.trace.records.empty() ? 0.0 : r.trace.records.back().resnorm;
    json j;
    j["problem"] = cfg.problem;
    j["precond"] = cfg.precond;
    j["method"] = cfg.method;
    j["step"] = cfg.step;
    j["seed"] = cfg.seed;
    j["dim"] = s.problem.dim;
    j["termination"] = to_string(r.reason);
    j["converged"] = r.reason == Termination::ResidualTol;
    j["iterations"] = r.iterations;
    j["lambda"] = r.lambda;
    j["lambda_reference"] = s.ctx.lambda1;
    j["lambda_error"] = std::abs(r.lambda - s.ctx.lambda1);
    j["residual_norm"] = resnorm;
    j["start_draws"] = draws + (init == Init::Eigvec ? 0 : 1);
    j["basin_exits"] = r.trace.basin_exits;
    j["phi"] = s.ctx.phi();
    j["cos_phi"] = s.ctx.cos_phi;
    j["kappa_nu"] = s.ctx.kappa;
    j["smoothness_factor"] = cfg.smoothness_factor;
    emit_json(j, cfg.out_path, out);
    return r.reason == Termination::ResidualTol ? 0 : 2;
  });
}

int cmd_phi(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemSpec ps = parse_problem(cfg.problem);
    const PrecondSpec bs = parse_precond(cfg.precond);
    EigenProblem p = build_problem(ps);
    ReferenceOptions ro;
    ro.dense_cap = cfg.dense_cap;
    p.reference_spectrum(ro);
    const PrecondPtr b = build_precond(bs, p);
    const PhiReport r = compute_phi(p, b, bs.kind == PrecondKind::MpChol);
    const PrecondQuality& q = r.quality;

    json j;
    j["problem"] = cfg.problem;
    j["precond"] = cfg.precond;
    j["dim"] = p.dim;
    j["lambda1"] = r.ctx.lambda1;
    j["lambda2"] = r.ctx.lambda2;
    j["lambdan"] = r.ctx.lambdan;
    j["nu_min"] = q.nu_min;
    j["nu_max"] = q.nu_max;
    j["kappa_nu"] = q.kappa_nu;
    j["nu_converged"] = q.nu_converged;
    j["sin_phi"] = q.sin_phi;
    j["cos_phi"] = q.cos_phi;
    j["cos_phi_variational"] = q.cos_phi_variational;
    j["cos2_phi"] = q.cos2_phi;
    j["one_minus_inv_kappa"] = q.one_minus_inv_kappa;
    j["chi"] = opt_json(q.chi);
    j["theta_shao"] = q.theta_shao;
    j["rho_B"] = q.rho_B;
    j["rho"] = q.rho;
    j["xi_inf"] = q.xi_inf;
    if (r.eps) {
      j["epsilon_l"] = r.eps->value;
      j["epsilon_l_applicable"] = r.eps->applicable;
      j["sqrt_2_epsilon_l"] = std::sqrt(2.0 * r.eps->value);
    }
    if (p.imaginary_term) j["imaginary_term"] = *p.imaginary_term;

    if (cfg.json) {
      emit_json(j, "-", out);
    } else {
      std::ostringstream t;
      char line[256];
      std::snprintf(line, sizeof line, "%-10s %-12s %-10s %-10s %-10s\n", "cos2_phi", "1-1/kappa", "chi", "kappa_nu",
                    "cos_phi");
      t << line;
      std::snprintf(line, sizeof line, "%-10s %-12s %-10s %-10s %-10s\n", fmt4(q.cos2_phi).c_str(),
                    fmt4(q.one_minus_inv_kappa).c_str(), q.chi ? fmt4(*q.chi).c_str() : "n/a",
                    fmt4(q.kappa_nu).c_str(), fmt4(q.cos_phi_variational).c_str());
      t << line;
      if (r.eps) {
        t << "epsilon_l " << fmt4(r.eps->value) << "  sqrt(2 epsilon_l) " << fmt4(std::sqrt(2.0 * r.eps->value))
          << "  measured cos_phi " << fmt4(q.cos_phi_variational) << '\n';
      }
      if (!q.nu_converged) t << "warning: kappa_nu estimate did not converge\n";
      out << t.str();
      if (!cfg.out_path.empty()) emit_json(j, cfg.out_path, out);
    }
    return 0;
  });
}

int cmd_prob(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemSpec ps = parse_problem(cfg.problem);
    const PrecondSpec bs = parse_precond(cfg.precond);
    const Sampler sampler = parse_sampler(cfg.sampler);
    const Init init = parse_init(cfg.init);
    if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");

    Setup s = build(ps, bs, cfg);
    SuccessCounts c;
    if (init == Init::Eigvec) {
      const Vec bu = s.precond->apply_fwd(s.ctx.u_star);
      const InitialCheck chk = check_initial(s.ctx.u_star, bu, s.ctx, s.problem.apply_a);
      c.trials = cfg.trials;
      c.new_successes = chk.condition_new ? cfg.trials : 0;
      c.classic_successes = chk.condition_classic ? cfg.trials : 0;
    } else {
      c = success_probability(s.problem, *s.precond, s.ctx, sampler, cfg.trials, cfg.seed);
    }

    std::ostringstream csv;
    csv << "condition,successes,trials,fraction\n";
    csv << "dist_B(u0;u*)<phi," << c.new_successes << ',' << c.trials << ',' << format_double(c.p_new()) << '\n';
    csv << "lambda(u0)<lambda2," << c.classic_successes << ',' << c.trials << ',' << format_double(c.p_classic())
        << '\n';
    if (cfg.out_path.empty() || cfg.out_path == "-") {
      out << csv.str();
    } else {
      std::ofstream f(cfg.out_path);
      if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + cfg.out_path + "'");
      f << csv.str();
    }
    return 0;
  });
}

int cmd_validate(const ValidateConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<BKind> kinds;
  try {
    for (const auto& k : cfg.kinds) kinds.push_back(parse_kind(k));
    if (cfg.seeds < 1 || cfg.sizes.empty() || kinds.empty())
      throw Error(ErrorCode::InvalidArgument, "empty validation grid");
    for (std::size_t n : cfg.sizes)
      if (n < 2) throw Error(ErrorCode::InvalidArgument, "sizes must be >= 2");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  struct Cell {
    std::size_t n;
    BKind kind;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t seed = 1; seed <= cfg.seeds; ++seed)
    for (std::size_t n : cfg.sizes)
      for (BKind k : kinds) cells.push_back({n, k, seed});

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<PropertyReport> reports(cells.size());
  std::vector<EquivalenceReport> equiv(cells.size());
  ValidateOptions vo;
  vo.slack = cfg.slack;
  vo.flip_cos_phi_in_a = cfg.inject_bug;
  try {
    parallel_for(cells.size(), [&](std::size_t i) {
      PreparedInstance inst = prepare(random_instance(cells[i].n, cells[i].kind, cells[i].seed));
      inst.ctx.smoothness_factor = cfg.smoothness_factor;
      reports[i] = validate_properties(inst, cfg.samples, cells[i].seed, vo);
      if (cfg.equivalence_steps > 0) {
        Rng rng(derive_seed(cells[i].seed, 0xe9));
        equiv[i] = equivalence_check(inst, basin_start(inst, rng, 1.0), cfg.equivalence_steps);
      }
    });
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::array<std::size_t, kPropertyCount> total{}, evaluated{};
  double max_gap = 0.0, max_dev = 0.0;
  json inst_json = json::array();
  json failures = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const PropertyReport& r = reports[i];
    for (std::size_t p = 0; p < kPropertyCount; ++p) {
      total[p] += r.violations[p];
      evaluated[p] += r.evaluated[p];
    }
    max_gap = std::max(max_gap, r.cos_phi_gap());
    max_dev = std::max(max_dev, equiv[i].max_deviation);
    json ji;
    ji["instance"] = r.instance;
    ji["violations"] = r.violations;
    ji["cos_phi_gap"] = r.cos_phi_gap();
    ji["equivalence_max_deviation"] = equiv[i].max_deviation;
    inst_json.push_back(ji);
    for (const auto& f : r.failures) {
      json jf;
      jf["instance"] = r.instance;
      jf["property"] = property_name(f.property);
      jf["sample"] = f.sample;
      jf["lhs"] = f.lhs;
      jf["rhs"] = f.rhs;
      jf["x"] = f.x;
      failures.push_back(jf);
    }
  }
  std::size_t violations = 0;
  for (auto v : total) violations += v;
  const bool equiv_ok = max_dev <= 1e-10;
  const bool gap_ok = max_gap <= 1e-8;

  json j;
  j["instances"] = cells.size();
  j["samples"] = cfg.samples;
  j["slack"] = cfg.slack;
  j["smoothness_factor"] = cfg.smoothness_factor;
  json props = json::object();
  for (std::size_t p = 0; p < kPropertyCount; ++p)
    props[property_name(p)] = {{"evaluated", evaluated[p]}, {"violations", total[p]}};
  j["properties"] = props;
  j["max_cos_phi_gap"] = max_gap;
  j["equivalence_max_deviation"] = max_dev;
  j["pass"] = violations == 0 && equiv_ok && gap_ok;
  j["per_instance"] = inst_json;
  j["counterexamples"] = failures;
  if (!cfg.out_path.empty()) emit_json(j, cfg.out_path, out);

  out << "instances " << cells.size() << ", samples " << cfg.samples << ", " << fmt4(seconds) << " s\n";
  for (std::size_t p = 0; p < kPropertyCount; ++p)
    out << "  " << property_name(p) << ": " << total[p] << " / " << evaluated[p] << " violated\n";
  out << "  cos phi gap max " << fmt4(max_gap) << (gap_ok ? "" : " (over 1e-8)") << '\n';
  out << "  equivalence deviation max " << fmt4(max_dev) << (equiv_ok ? "" : " (over 1e-10)") << '\n';
  if (violations == 0 && equiv_ok && gap_ok) {
    out << "PASS\n";
    return 0;
  }
  out << "FAIL\n";
  if (!failures.empty()) err << "counterexample: " << failures.front().dump() << '\n';
  return 3;
}

int cmd_table(const TableConfigArgs& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    TableConfig tc = default_table_config(cfg.name);
    if (!cfg.config_path.empty()) {
      std::ifstream f(cfg.config_path);
      if (!f) throw Error(ErrorCode::ParseError, "cannot read '" + cfg.config_path + "'");
      tc = parse_table_config(f, tc);
    }
    for (double h : tc.h) cells_per_side(h);
    for (double H : tc.H) cells_per_side(H);
    const TableResult r = run_table(cfg.name, tc);
    if (cfg.out_path.empty() || cfg.out_path == "-") {
      r.write_csv(out);
    } else {
      std::ofstream f(cfg.out_path);
      if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + cfg.out_path + "'");
      r.write_csv(f);
    }
    if (!cfg.timing_path.empty()) {
      std::ofstream f(cfg.timing_path);
      if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + cfg.timing_path + "'");
      r.write_timing_csv(f);
    } else {
      double total = 0.0;
      for (double s : r.seconds) total += s;
      err << cfg.name << ": " << r.rows.size() << " rows, " << fmt4(total) << " s\n";
    }
    return 0;
  });
}

}  // namespace rsdeig::cli
