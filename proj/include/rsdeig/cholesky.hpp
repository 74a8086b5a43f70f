#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rsdeig/dense.hpp"
#include "rsdeig/sparse.hpp"
#include "rsdeig/vector_ops.hpp"

namespace rsdeig {

enum class Precision { binary64, binary32 };

// Unit roundoff of the given precision.
constexpr double unit_roundoff(Precision p) {
  return p == Precision::binary64 ? 0x1p-53 : 0x1p-24;
}

// Dense lower-triangular Cholesky factor, packed row-major.
// For binary32 every stored entry is exactly a float.
class CholFactor {
 public:
  std::size_t n() const noexcept { return n_; }
  Precision precision() const noexcept { return precision_; }
  double l(std::size_t i, std::size_t j) const { return values_[i * (i + 1) / 2 + j]; }

  // L * (L^T * v), in the factor's precision.
  Vec multiply_llt(std::span<const double> v) const;
  // Same product evaluated in binary64 regardless of the factor's precision.
  Vec multiply_llt_binary64(std::span<const double> v) const;
  DenseMatrix lower() const;

 private:
  friend CholFactor cholesky(const DenseSym& m, Precision precision);
  friend Vec chol_solve(const CholFactor& f, std::span<const double> rhs);
  friend Vec chol_solve_binary64(const CholFactor& f, std::span<const double> rhs);
  std::size_t n_ = 0;
  Precision precision_ = Precision::binary64;
  std::vector<double> values_;
};

// Throws NotSpdError (NotSpd for binary64, NotSpdInLowPrecision for binary32).
CholFactor cholesky(const DenseSym& m, Precision precision = Precision::binary64);

// L^{-T}(L^{-1} rhs). Substitutions run in the factor's precision.
Vec chol_solve(const CholFactor& f, std::span<const double> rhs);

// Substitutions always in binary64 (exact application of a binary32 factor).
Vec chol_solve_binary64(const CholFactor& f, std::span<const double> rhs);

// Envelope (skyline) Cholesky of a sparse SPD matrix. Fill stays inside the
// row profile, so lexicographically ordered mesh matrices factor in O(n b^2).
class EnvelopeCholesky {
 public:
  EnvelopeCholesky() = default;
  explicit EnvelopeCholesky(const SparseSym& a);

  std::size_t n() const noexcept { return first_.size(); }
  Vec solve(std::span<const double> rhs) const;
  // L^{-1} v and L^{-T} v.
  Vec solve_lower(std::span<const double> v) const;
  Vec solve_upper(std::span<const double> v) const;
  // L v and L^T v.
  Vec multiply_lower(std::span<const double> v) const;
  Vec multiply_upper(std::span<const double> v) const;

 private:
  double entry(std::size_t i, std::size_t j) const { return values_[start_[i] + (j - first_[i])]; }

  std::vector<std::size_t> first_;
  std::vector<std::size_t> start_;
  std::vector<double> values_;
};

}  // namespace rsdeig
