#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rsdeig/dense.hpp"

namespace rsdeig {

struct SymEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column k pairs with values[k]
};

// Cyclic Jacobi eigensolver. Throws NoConvergence after `max_sweeps`.
SymEigen dense_sym_eig(const DenseSym& m, int max_sweeps = 100);

// f(M) = V diag(f(lambda)) V^T for a function of the spectrum; used for M^{1/2}, M^{-1/2}.
DenseSym spectral_function(const SymEigen& eig, double (*fn)(double));
DenseSym matrix_sqrt(const DenseSym& m);
DenseSym matrix_inv_sqrt(const DenseSym& m);

// Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts).
// diag has m entries, offdiag m-1. Eigenvectors are returned column-wise.
SymEigen tridiagonal_eig(std::span<const double> diag, std::span<const double> offdiag);

// Same eigenvalues; only the listed rows of the eigenvector matrix are formed.
SymEigen tridiagonal_eig_rows(std::span<const double> diag, std::span<const double> offdiag,
                              std::span<const std::size_t> rows);

}  // namespace rsdeig
