#pragma once

#include <iosfwd>
#include <string>

#include "rsdeig/sparse.hpp"

namespace rsdeig {

// Reads `%%MatrixMarket matrix {coordinate|array} real {symmetric|general}`.
// Symmetric files store one triangle; general files must be symmetric.
// Indices are 1-based on disk. Throws ParseError.
SparseSym read_matrix_market(std::istream& in);
SparseSym read_matrix_market_file(const std::string& path);

// Writes the lower triangle in symmetric coordinate format, 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseSym& m);
void write_matrix_market_file(const std::string& path, const SparseSym& m);

}  // namespace rsdeig
