#include "rsdeig/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "rsdeig/error.hpp"

namespace rsdeig {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

SparseSym read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty MatrixMarket stream");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw Error(ErrorCode::ParseError, "missing %%MatrixMarket matrix banner");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array") throw Error(ErrorCode::ParseError, "unsupported format " + format);
  if (field != "real" && field != "double" && field != "integer")
    throw Error(ErrorCode::ParseError, "unsupported field " + field);
  if (symmetry != "symmetric" && symmetry != "general")
    throw Error(ErrorCode::ParseError, "unsupported symmetry " + symmetry);
  const bool symmetric = symmetry == "symmetric";

  if (!next_data_line(in, line)) throw Error(ErrorCode::ParseError, "missing size line");
  std::istringstream size_line(line);
  std::size_t rows = 0, cols = 0, entries = 0;
  if (format == "coordinate") {
    if (!(size_line >> rows >> cols >> entries)) throw Error(ErrorCode::ParseError, "bad size line");
  } else {
    if (!(size_line >> rows >> cols)) throw Error(ErrorCode::ParseError, "bad size line");
  }
  if (rows != cols || rows == 0) throw Error(ErrorCode::ParseError, "matrix must be square and nonempty");
  const std::size_t n = rows;

  std::vector<Triplet> trip;
  auto push = [&](std::size_t i, std::size_t j, double v) {
    trip.push_back({i, j, v});
    if (symmetric && i != j) trip.push_back({j, i, v});
  };

  if (format == "coordinate") {
    trip.reserve(symmetric ? 2 * entries : entries);
    for (std::size_t k = 0; k < entries; ++k) {
      if (!next_data_line(in, line)) throw Error(ErrorCode::ParseError, "unexpected end of entries");
      std::istringstream entry(line);
      std::size_t i = 0, j = 0;
      double v = 0.0;
      if (!(entry >> i >> j >> v)) throw Error(ErrorCode::ParseError, "bad entry line: " + line);
      if (i < 1 || j < 1 || i > n || j > n) throw Error(ErrorCode::ParseError, "index out of range: " + line);
      if (symmetric && j > i) throw Error(ErrorCode::ParseError, "symmetric file has an upper entry: " + line);
      push(i - 1, j - 1, v);
    }
  } else {
    // Column-major; symmetric arrays list the lower triangle only.
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = symmetric ? j : 0; i < n; ++i) {
        if (!next_data_line(in, line)) throw Error(ErrorCode::ParseError, "unexpected end of array values");
        std::istringstream entry(line);
        double v = 0.0;
        if (!(entry >> v)) throw Error(ErrorCode::ParseError, "bad array value: " + line);
        if (v != 0.0) push(i, j, v);
      }
  }
  try {
    return SparseSym::from_triplets(n, std::move(trip));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("matrix not symmetric: ") + e.what());
  }
}

SparseSym read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseSym& m) {
  const auto& csr = m.csr();
  const auto off = csr.row_offsets();
  const auto col = csr.col_indices();
  const auto val = csr.values();
  std::size_t count = 0;
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t k = off[i]; k < off[i + 1]; ++k)
      if (col[k] <= i) ++count;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.n() << ' ' << m.n() << ' ' << count << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t k = off[i]; k < off[i + 1]; ++k)
      if (col[k] <= i) out << i + 1 << ' ' << col[k] + 1 << ' ' << val[k] << '\n';
}

void write_matrix_market_file(const std::string& path, const SparseSym& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  write_matrix_market(out, m);
}

}  // namespace rsdeig
