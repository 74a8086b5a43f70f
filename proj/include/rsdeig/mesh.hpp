#pragma once

#include <cstddef>
#include <vector>

#include "rsdeig/sparse.hpp"

namespace rsdeig {

// Number of cells per side for a mesh width h; requires 1/h integral and >= 2.
// Throws InvalidMeshWidth.
std::size_t cells_per_side(double h);

// Interior nodes of the uniform grid on [0,1]^2 are numbered lexicographically,
// x fastest: node (i, j), 1 <= i, j <= N-1, has index (j-1)(N-1) + (i-1).

// Five-point finite difference Laplacian, stencil (1/h^2)[-1 -1 4 -1 -1].
SparseSym laplace_fd_matrix(double h);

struct FemMatrices {
  SparseSym stiffness;
  SparseSym mass;
};

// P1 elements on the right-triangle mesh; every square is split along its
// lower-left to upper-right diagonal. Dirichlet nodes are eliminated.
FemMatrices fem_p1(double h);

struct MeshHierarchy {
  double H = 0.0;
  double h = 0.0;
  double overlap_ratio = 0.0;
  double delta = 0.0;
  std::size_t fine_cells = 0;    // 1/h
  std::size_t coarse_cells = 0;  // 1/H
  CsrMatrix prolongation;        // fine interior x coarse interior
  std::vector<std::vector<std::size_t>> subdomains;  // ascending fine indices

  std::size_t fine_dim() const { return (fine_cells - 1) * (fine_cells - 1); }
  std::size_t coarse_dim() const { return (coarse_cells - 1) * (coarse_cells - 1); }
};

// Coarse cells enlarged by delta = overlap_ratio * H (clipped to the square);
// subdomain j holds the fine interior nodes strictly inside its enlarged cell.
// Throws InvalidMeshWidth or MisalignedOverlap.
MeshHierarchy mesh_hierarchy(double H, double h, double overlap_ratio);

// Value of the coarse P1 hat centred at the origin, in units of H.
double coarse_hat(double xi, double eta);

}  // namespace rsdeig
