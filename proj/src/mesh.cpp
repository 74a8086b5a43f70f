#include "rsdeig/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rsdeig/error.hpp"

namespace rsdeig {

std::size_t cells_per_side(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidMeshWidth, "mesh width must be positive");
  const double inv = 1.0 / h;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * inv || rounded < 2.0)
    throw Error(ErrorCode::InvalidMeshWidth, "1/h must be an integer >= 2");
  return static_cast<std::size_t>(rounded);
}

namespace {

// Interior index of grid node (i, j) or npos on the boundary.
constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t interior_index(std::size_t n_cells, std::size_t i, std::size_t j) {
  if (i == 0 || j == 0 || i >= n_cells || j >= n_cells) return npos;
  return (j - 1) * (n_cells - 1) + (i - 1);
}

}  // namespace

SparseSym laplace_fd_matrix(double h) {
  const std::size_t n_cells = cells_per_side(h);
  const double inv_h2 = static_cast<double>(n_cells * n_cells);
  std::vector<Triplet> trip;
  for (std::size_t j = 1; j < n_cells; ++j)
    for (std::size_t i = 1; i < n_cells; ++i) {
      const std::size_t row = interior_index(n_cells, i, j);
      trip.push_back({row, row, 4.0 * inv_h2});
      const std::array<std::array<std::size_t, 2>, 4> nbrs{{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}};
      for (const auto& nb : nbrs) {
        const std::size_t col = interior_index(n_cells, nb[0], nb[1]);
        if (col != npos) trip.push_back({row, col, -inv_h2});
      }
    }
  return SparseSym::from_triplets((n_cells - 1) * (n_cells - 1), std::move(trip));
}

FemMatrices fem_p1(double h) {
  const std::size_t n_cells = cells_per_side(h);
  const double hh = 1.0 / static_cast<double>(n_cells);
  std::vector<Triplet> k_trip;
  std::vector<Triplet> m_trip;

  auto add_triangle = [&](const std::array<std::array<std::size_t, 2>, 3>& v) {
    std::array<double, 3> x{}, y{};
    std::array<std::size_t, 3> idx{};
    for (int a = 0; a < 3; ++a) {
      x[a] = static_cast<double>(v[a][0]) * hh;
      y[a] = static_cast<double>(v[a][1]) * hh;
      idx[a] = interior_index(n_cells, v[a][0], v[a][1]);
    }
    const double det = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]);
    const double area = 0.5 * std::abs(det);
    std::array<double, 3> b{}, c{};
    for (int a = 0; a < 3; ++a) {
      const int p = (a + 1) % 3, q = (a + 2) % 3;
      b[a] = y[p] - y[q];
      c[a] = x[q] - x[p];
    }
    for (int a = 0; a < 3; ++a) {
      if (idx[a] == npos) continue;
      for (int d = 0; d < 3; ++d) {
        if (idx[d] == npos) continue;
        k_trip.push_back({idx[a], idx[d], (b[a] * b[d] + c[a] * c[d]) / (4.0 * area)});
        m_trip.push_back({idx[a], idx[d], area / 12.0 * (a == d ? 2.0 : 1.0)});
      }
    }
  };

  for (std::size_t j = 0; j < n_cells; ++j)
    for (std::size_t i = 0; i < n_cells; ++i) {
      add_triangle({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
      add_triangle({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
    }
  const std::size_t dim = (n_cells - 1) * (n_cells - 1);
  return {SparseSym::from_triplets(dim, std::move(k_trip)), SparseSym::from_triplets(dim, std::move(m_trip))};
}

double coarse_hat(double xi, double eta) {
  const double ax = std::abs(xi), ay = std::abs(eta);
  const double v = (xi >= 0.0) == (eta >= 0.0) ? 1.0 - std::max(ax, ay) : 1.0 - ax - ay;
  return std::max(0.0, v);
}

MeshHierarchy mesh_hierarchy(double H, double h, double overlap_ratio) {
  MeshHierarchy mh;
  mh.fine_cells = cells_per_side(h);
  mh.coarse_cells = cells_per_side(H);
  if (mh.fine_cells <= mh.coarse_cells || mh.fine_cells % mh.coarse_cells != 0)
    throw Error(ErrorCode::InvalidMeshWidth, "H/h must be an integer > 1");
  if (!(overlap_ratio > 0.0 && overlap_ratio <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "overlap ratio must lie in (0, 1]");
  const std::size_t r = mh.fine_cells / mh.coarse_cells;
  const double band = overlap_ratio * static_cast<double>(r);  // delta / h
  const double band_rounded = std::round(band);
  if (std::abs(band - band_rounded) > 1e-9 || band_rounded < 1.0)
    throw Error(ErrorCode::MisalignedOverlap, "overlap width delta is not a positive multiple of h");
  const auto d = static_cast<std::ptrdiff_t>(band_rounded);
  mh.H = 1.0 / static_cast<double>(mh.coarse_cells);
  mh.h = 1.0 / static_cast<double>(mh.fine_cells);
  mh.overlap_ratio = overlap_ratio;
  mh.delta = band_rounded * mh.h;

  const std::size_t nf = mh.fine_cells;
  const std::size_t nc = mh.coarse_cells;
  const auto rr = static_cast<std::ptrdiff_t>(r);

  std::vector<Triplet> trip;
  for (std::size_t j = 1; j < nf; ++j)
    for (std::size_t i = 1; i < nf; ++i) {
      const std::size_t row = interior_index(nf, i, j);
      for (std::size_t J = 1; J < nc; ++J)
        for (std::size_t I = 1; I < nc; ++I) {
          const double xi = (static_cast<double>(i) - static_cast<double>(I * r)) / static_cast<double>(r);
          const double eta = (static_cast<double>(j) - static_cast<double>(J * r)) / static_cast<double>(r);
          if (std::abs(xi) >= 1.0 || std::abs(eta) >= 1.0) continue;
          const double v = coarse_hat(xi, eta);
          if (v > 0.0) trip.push_back({row, interior_index(nc, I, J), v});
        }
    }
  mh.prolongation = CsrMatrix::from_triplets(mh.fine_dim(), mh.coarse_dim(), std::move(trip));

  for (std::size_t b = 0; b < nc; ++b)
    for (std::size_t a = 0; a < nc; ++a) {
      std::vector<std::size_t> nodes;
      const std::ptrdiff_t lo_x = static_cast<std::ptrdiff_t>(a) * rr - d;
      const std::ptrdiff_t hi_x = static_cast<std::ptrdiff_t>(a + 1) * rr + d;
      const std::ptrdiff_t lo_y = static_cast<std::ptrdiff_t>(b) * rr - d;
      const std::ptrdiff_t hi_y = static_cast<std::ptrdiff_t>(b + 1) * rr + d;
      for (std::size_t j = 1; j < nf; ++j)
        for (std::size_t i = 1; i < nf; ++i) {
          const auto si = static_cast<std::ptrdiff_t>(i);
          const auto sj = static_cast<std::ptrdiff_t>(j);
          if (si > lo_x && si < hi_x && sj > lo_y && sj < hi_y) nodes.push_back(interior_index(nf, i, j));
        }
      if (nodes.empty()) throw Error(ErrorCode::EmptySubdomain, "subdomain without interior fine nodes");
      mh.subdomains.push_back(std::move(nodes));
    }
  return mh;
}

}  // namespace rsdeig
