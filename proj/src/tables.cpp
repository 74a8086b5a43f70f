#include "rsdeig/tables.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "rsdeig/error.hpp"
#include "rsdeig/mesh.hpp"
#include "rsdeig/recipes.hpp"
#include "rsdeig/rng.hpp"

namespace rsdeig {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t cell_seed(std::uint64_t seed, double a, double b) {
  return derive_seed(derive_seed(seed, std::bit_cast<std::uint64_t>(a)), std::bit_cast<std::uint64_t>(b));
}

std::string fmt_width(double h) {
  // Dyadic widths print as 2^-k.
  int e = 0;
  const double m = std::frexp(h, &e);
  if (m == 0.5) return "2^" + std::to_string(e - 1);
  return format_double(h);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

TableResult phi_table(const std::string& name, const TableConfig& cfg) {
  TableResult res;
  res.name = name;
  res.header = {"H", "h", "dim", "cos2_phi", "one_minus_inv_kappa", "chi", "kappa_nu", "theta_shao"};
  for (double H : cfg.H)
    for (double h : cfg.h) {
      if (!(h < H)) continue;
      const auto t0 = Clock::now();
      EigenProblem p = laplace_fem(h);
      PrecondSpec spec;
      spec.kind = PrecondKind::Ddm;
      spec.H = H;
      spec.overlap = cfg.overlap;
      const PhiReport r = compute_phi(p, build_precond(spec, p));
      res.rows.push_back({fmt_width(H), fmt_width(h), std::to_string(p.dim), format_double(r.quality.cos2_phi),
                          format_double(r.quality.one_minus_inv_kappa),
                          r.quality.chi ? format_double(*r.quality.chi) : "n/a", format_double(r.quality.kappa_nu),
                          format_double(r.quality.theta_shao)});
      res.seconds.push_back(seconds_since(t0));
    }
  return res;
}

TableResult prob_ddm_table(const TableConfig& cfg) {
  TableResult res;
  res.name = "prob-ddm";
  res.header = {"H", "h", "sampler", "trials", "new_successes", "p_new", "classic_successes", "p_classic"};
  for (double H : cfg.H)
    for (double h : cfg.h) {
      if (!(h < H)) continue;
      const auto t0 = Clock::now();
      EigenProblem p = laplace_fem(h);
      PrecondSpec spec;
      spec.kind = PrecondKind::Ddm;
      spec.H = H;
      spec.overlap = cfg.overlap;
      const PrecondPtr b = build_precond(spec, p);
      const PhiReport r = compute_phi(p, b);
      const SuccessCounts c = success_probability(p, *b, r.ctx, cfg.sampler, cfg.trials, cell_seed(cfg.seed, H, h));
      res.rows.push_back({fmt_width(H), fmt_width(h), cfg.sampler == Sampler::Smooth ? "smooth" : "gaussian",
                          std::to_string(c.trials), std::to_string(c.new_successes), format_double(c.p_new()),
                          std::to_string(c.classic_successes), format_double(c.p_classic())});
      res.seconds.push_back(seconds_since(t0));
    }
  return res;
}

TableResult prob_kernel_table(const TableConfig& cfg) {
  TableResult res;
  res.name = "prob-kernel";
  res.header = {"n",     "sampler",           "trials",    "new_successes", "p_new", "classic_successes",
                "p_classic", "cos_phi", "epsilon_l", "sqrt_2_epsilon_l"};
  for (std::size_t n : cfg.n) {
    const auto t0 = Clock::now();
    KernelSpec ks;
    ks.n = n;
    ks.seed = cfg.kernel_seed;
    EigenProblem p = kernel_matrix(ks);
    const PrecondPtr b = make_mp_cholesky(*p.dense);
    const PhiReport r = compute_phi(p, b, true);
    const SuccessCounts c =
        success_probability(p, *b, r.ctx, cfg.sampler, cfg.trials, cell_seed(cfg.seed, static_cast<double>(n), 0.0));
    res.rows.push_back({std::to_string(n), cfg.sampler == Sampler::Smooth ? "smooth" : "gaussian",
                        std::to_string(c.trials), std::to_string(c.new_successes), format_double(c.p_new()),
                        std::to_string(c.classic_successes), format_double(c.p_classic()),
                        format_double(r.quality.cos_phi_variational), format_double(r.eps->value),
                        format_double(std::sqrt(2.0 * r.eps->value))});
    res.seconds.push_back(seconds_since(t0));
  }
  return res;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PhiReport compute_phi(EigenProblem& p, const PrecondPtr& b, bool with_epsilon_l) {
  PhiReport r;
  const ReferenceSpectrum& ref = p.reference_spectrum();
  r.nu = kappa_nu(p, *b);
  r.ctx = make_rate_context(ref, p.apply_a, *b, r.nu);
  r.quality = precond_quality(r.ctx, r.nu.converged);
  if (with_epsilon_l) {
    r.eps = epsilon_l(p.dim, ref.lambda1, ref.lambdan);
    r.quality.epsilon_l = r.eps->value;
  }
  return r;
}

const std::vector<std::string>& table_names() {
  static const std::vector<std::string> names = {"phi-ddm-fixedH", "phi-ddm-fixedh", "prob-ddm", "prob-kernel"};
  return names;
}

TableConfig default_table_config(const std::string& name) {
  TableConfig c;
  if (name == "phi-ddm-fixedH") {
    c.H = {0.25};
    c.h = {1.0 / 16, 1.0 / 32, 1.0 / 64};
  } else if (name == "phi-ddm-fixedh") {
    c.H = {0.25, 0.125};
    c.h = {1.0 / 64};
  } else if (name == "prob-ddm") {
    c.H = {0.25};
    c.h = {1.0 / 16, 1.0 / 32};
    c.trials = 200;
    c.sampler = Sampler::Smooth;
  } else if (name == "prob-kernel") {
    c.n = {128, 256};
    c.trials = 100;
    c.sampler = Sampler::Gaussian;
  } else {
    throw Error(ErrorCode::UnknownTable, "unknown table '" + name + "'");
  }
  return c;
}

TableConfig parse_table_config(std::istream& in, TableConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ParseError, "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::vector<std::string> vals = split_list(line.substr(eq + 1));
    if (vals.empty()) throw Error(ErrorCode::ParseError, "config line " + std::to_string(lineno) + ": no value");
    auto count = [&](const std::string& v) {
      const long long x = std::stoll(v);
      if (x < 0) throw Error(ErrorCode::ParseError, "negative count in config");
      return static_cast<std::size_t>(x);
    };
    try {
      if (key == "h" || key == "H") {
        auto& dst = key == "h" ? base.h : base.H;
        dst.clear();
        for (const auto& v : vals) dst.push_back(parse_dyadic(v));
      } else if (key == "n") {
        base.n.clear();
        for (const auto& v : vals) base.n.push_back(count(v));
      } else if (key == "overlap") {
        base.overlap = std::stod(vals.front());
      } else if (key == "trials") {
        base.trials = count(vals.front());
      } else if (key == "seed") {
        base.seed = std::stoull(vals.front());
      } else if (key == "kernel_seed") {
        base.kernel_seed = std::stoull(vals.front());
      } else if (key == "sampler") {
        if (vals.front() == "gaussian")
          base.sampler = Sampler::Gaussian;
        else if (vals.front() == "smooth")
          base.sampler = Sampler::Smooth;
        else
          throw Error(ErrorCode::ParseError, "sampler must be gaussian or smooth");
      } else {
        throw Error(ErrorCode::ParseError, "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "config line " + std::to_string(lineno) + ": bad value");
    }
  }
  return base;
}

void TableResult::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void TableResult::write_timing_csv(std::ostream& out) const {
  out << "row,seconds\n";
  for (std::size_t i = 0; i < seconds.size(); ++i) out << i << ',' << format_double(seconds[i]) << '\n';
}

TableResult run_table(const std::string& name, const TableConfig& cfg) {
  if (name == "phi-ddm-fixedH" || name == "phi-ddm-fixedh") return phi_table(name, cfg);
  if (cfg.trials == 0 && (name == "prob-ddm" || name == "prob-kernel"))
    throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (name == "prob-ddm") return prob_ddm_table(cfg);
  if (name == "prob-kernel") return prob_kernel_table(cfg);
  throw Error(ErrorCode::UnknownTable, "unknown table '" + name + "'");
}

}  // namespace rsdeig
