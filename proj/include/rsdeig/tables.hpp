#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rsdeig/diagnostics.hpp"
#include "rsdeig/preconditioner.hpp"
#include "rsdeig/problems.hpp"

namespace rsdeig {

// Full diagnostics bundle for one (problem, preconditioner) pair.
struct PhiReport {
  SpectralBounds nu;
  RateContext ctx;
  PrecondQuality quality;
  std::optional<EpsilonL> eps;
};
PhiReport compute_phi(EigenProblem& p, const PrecondPtr& b, bool with_epsilon_l = false);

// Grid for a named table. Plain-text config: one `key = v1, v2, ...` per line,
// `#` starts a comment. Keys: h, H, overlap, n, trials, seed, kernel_seed, sampler.
struct TableConfig {
  std::vector<double> h;
  std::vector<double> H;
  double overlap = 0.5;
  std::vector<std::size_t> n;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::uint64_t kernel_seed = 7;
  Sampler sampler = Sampler::Gaussian;
};

const std::vector<std::string>& table_names();
// Desk-scale defaults. Throws UnknownTable.
TableConfig default_table_config(const std::string& name);
// Overrides `base` with the keys present in `in`. Throws ParseError.
TableConfig parse_table_config(std::istream& in, TableConfig base);

struct TableResult {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<double> seconds;  // wall time per row; kept out of the CSV
  void write_csv(std::ostream& out) const;
  void write_timing_csv(std::ostream& out) const;
};

// phi-ddm-fixedH, phi-ddm-fixedh, prob-ddm, prob-kernel. Throws UnknownTable.
TableResult run_table(const std::string& name, const TableConfig& cfg);

// %.17g
std::string format_double(double v);

}  // namespace rsdeig
