#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "commands.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/recipes.hpp"
#include "rsdeig/tables.hpp"

namespace py = pybind11;
using namespace rsdeig;

namespace {

py::array_t<double> to_numpy(const Vec& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

Vec from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a 1-d array");
  return Vec(a.data(), a.data() + a.size());
}

// Problem, preconditioner and diagnostics for one recipe pair.
class Session {
 public:
  Session(const std::string& problem, const std::string& precond, double smoothness_factor) {
    const ProblemSpec ps = parse_problem(problem);
    const PrecondSpec bs = parse_precond(precond);
    problem_ = build_problem(ps);
    precond_ = build_precond(bs, problem_);
    report_ = compute_phi(problem_, precond_, bs.kind == PrecondKind::MpChol);
    report_.ctx.smoothness_factor = smoothness_factor;
  }

  std::size_t dim() const { return problem_.dim; }

  py::dict reference() const {
    const RateContext& c = report_.ctx;
    py::dict d;
    d["lambda1"] = c.lambda1;
    d["lambda2"] = c.lambda2;
    d["lambdan"] = c.lambdan;
    d["u_star"] = to_numpy(c.u_star);
    return d;
  }

  py::dict phi() const {
    const PrecondQuality& q = report_.quality;
    py::dict d;
    d["cos2_phi"] = q.cos2_phi;
    d["cos_phi"] = report_.ctx.cos_phi;
    d["cos_phi_direct"] = report_.ctx.cos_phi_direct;
    d["one_minus_inv_kappa"] = q.one_minus_inv_kappa;
    d["chi"] = q.chi ? py::object(py::float_(*q.chi)) : py::none();
    d["kappa_nu"] = report_.nu.kappa;
    d["nu_min"] = report_.nu.nu_min;
    d["nu_max"] = report_.nu.nu_max;
    d["phi"] = report_.ctx.phi();
    if (report_.eps) {
      d["epsilon_l"] = report_.eps->value;
      d["epsilon_l_applicable"] = report_.eps->applicable;
    }
    return d;
  }

  py::dict solve(std::optional<py::array_t<double>> u0, const std::string& method, const std::string& step,
                 double tol, std::size_t maxit, std::uint64_t seed) const {
    const bool rsd = method == "rsd" || method == "pinvit-variant";
    const StepPolicy policy = cli::parse_step(step);
    Vec start;
    if (u0) {
      start = from_numpy(*u0);
    } else if (rsd && policy.kind != StepKind::Fixed) {
      // Smooth draws until one lands in the basin.
      for (std::size_t k = 0; start.empty(); ++k) {
        if (k == 1000) throw Error(ErrorCode::OutsideBasin, "no basin start in 1000 draws");
        auto [u, bu] = sample_start(*precond_, Sampler::Smooth, seed, k);
        if (check_initial(u, bu, report_.ctx, problem_.apply_a).condition_new) start = std::move(u);
      }
    } else {
      start = sample_start(*precond_, Sampler::Gaussian, seed, 0).first;
    }
    SolveOptions so;
    so.tol = tol;
    so.maxit = maxit;
    SolveResult r;
    {
      py::gil_scoped_release release;
      if (method == "pinvit-classic")
        r = pinvit_classic_solve(problem_, *precond_, start, so, &report_.ctx);
      else if (rsd)
        r = rsd_solve(problem_, *precond_, start, policy, so, &report_.ctx);
      else
        throw Error(ErrorCode::ParseError, "unknown method '" + method + "'");
    }
    py::dict d;
    d["lambda"] = r.lambda;
    d["iterations"] = r.iterations;
    d["termination"] = to_string(r.reason);
    d["converged"] = r.reason == Termination::ResidualTol;
    d["u"] = to_numpy(r.u);
    std::vector<double> lam, res, dist, xi;
    for (const TraceRecord& t : r.trace.records) {
      lam.push_back(t.lambda);
      res.push_back(t.resnorm);
      dist.push_back(t.dist_b);
      xi.push_back(t.xi);
    }
    py::dict trace;
    trace["lambda"] = to_numpy(lam);
    trace["resnorm"] = to_numpy(res);
    trace["dist_b"] = to_numpy(dist);
    trace["xi"] = to_numpy(xi);
    d["trace"] = trace;
    d["basin_exits"] = r.trace.basin_exits;
    return d;
  }

  py::dict success(const std::string& sampler, std::size_t trials, std::uint64_t seed) const {
    SuccessCounts c;
    {
      py::gil_scoped_release release;
      c = success_probability(problem_, *precond_, report_.ctx, cli::parse_sampler(sampler), trials, seed);
    }
    py::dict d;
    d["trials"] = c.trials;
    d["new_successes"] = c.new_successes;
    d["classic_successes"] = c.classic_successes;
    d["p_new"] = c.p_new();
    d["p_classic"] = c.p_classic();
    return d;
  }

  py::array_t<double> apply_a(const py::array_t<double>& v) const { return to_numpy(problem_.apply_a(from_numpy(v))); }
  py::array_t<double> apply_inv(const py::array_t<double>& v) const {
    return to_numpy(precond_->apply_inv(from_numpy(v)));
  }

 private:
  EigenProblem problem_;
  PrecondPtr precond_;
  PhiReport report_;
};

py::dict validate(std::size_t n, const std::string& kind, std::uint64_t seed, std::size_t samples,
                  double smoothness_factor) {
  PropertyReport r;
  {
    py::gil_scoped_release release;
    PreparedInstance inst = prepare(random_instance(n, cli::parse_kind(kind), seed));
    inst.ctx.smoothness_factor = smoothness_factor;
    r = validate_properties(inst, samples, seed);
  }
  py::dict d;
  py::dict viol, eval;
  for (std::size_t p = 0; p < kPropertyCount; ++p) {
    viol[property_name(p)] = r.violations[p];
    eval[property_name(p)] = r.evaluated[p];
  }
  d["instance"] = r.instance;
  d["violations"] = viol;
  d["evaluated"] = eval;
  d["ok"] = r.ok();
  d["cos_phi_gap"] = r.cos_phi_gap();
  return d;
}

py::tuple table(const std::string& name, const std::string& config) {
  TableResult r;
  {
    py::gil_scoped_release release;
    std::istringstream in(config);
    r = run_table(name, parse_table_config(in, default_table_config(name)));
  }
  return py::make_tuple(r.header, r.rows, r.seconds);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Riemannian steepest descent for the smallest eigenpair";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<Session>(m, "Session")
      .def(py::init<const std::string&, const std::string&, double>(), py::arg("problem"),
           py::arg("precond") = "identity", py::arg("smoothness_factor") = 1.0)
      .def_property_readonly("dim", &Session::dim)
      .def("reference", &Session::reference)
      .def("phi", &Session::phi)
      .def("solve", &Session::solve, py::arg("u0") = py::none(), py::arg("method") = "rsd",
           py::arg("step") = "theory", py::arg("tol") = 1e-8, py::arg("maxit") = 1000, py::arg("seed") = 1)
      .def("success_probability", &Session::success, py::arg("sampler") = "gaussian", py::arg("trials") = 100,
           py::arg("seed") = 1)
      .def("apply_a", &Session::apply_a)
      .def("apply_inv", &Session::apply_inv);

  m.def("validate", &validate, py::arg("n"), py::arg("kind") = "random", py::arg("seed") = 1,
        py::arg("samples") = 500, py::arg("smoothness_factor") = 1.0);
  m.def("table", &table, py::arg("name"), py::arg("config") = "");
}
