#pragma once

#include <array>
#include <vector>

#include "cornerflow/branchcut.hpp"
#include "cornerflow/conformal.hpp"

namespace cornerflow {

struct GridCell {
  double area;       // positive (CCW quads)
  Complex centroid;  // polygon area centroid
  Complex vcenter;   // vertex mean; diamond/dual-face construction point
};

/// Primal edge carrying a dual (median) face between two node volumes.
/// Flux across the dual face is positive from n0 towards n1.
struct GridEdge {
  int n0, n1;         // node ids
  int cell_right;     // cell right of n0->n1
  int cell_left;      // cell left of n0->n1
  Complex a;          // dual-face normal times length, J(vcenter_left - vcenter_right)
  Complex b;          // J(node1 - node0)
  double inv2ad;      // 1 / (2 * diamond area), diamond (n0, right, n1, left)
  double alpha_geom;  // |a|^2 * inv2ad       (two-point flux coefficient / h)
  double cross_geom;  // dot(b, a) * inv2ad   (cross-diffusion coefficient / h)
};

struct CornerProbe {
  Complex position;          // physical corner location
  std::array<int, 4> cells;  // the 4 cells whose centroids are nearest
  double mean_distance;      // mean centroid distance to the corner
};

/// Body-fitted exterior grid: the polar grid { r_i e^{i theta_j} } in the
/// circle plane pushed through the Karman-Trefftz map and rotated into the
/// flow-aligned frame (free stream along +x, body rotated by arg w_inf).
///
/// Rings i = 0 (body, r = 1) .. Nr (outer, r = R); the angles carry a half-cell
/// offset so no node sits at zeta = +-1; corner images fall on body-edge
/// midpoints.
struct ExteriorGrid {
  double R = 0.0;
  int nr = 0, ntheta = 0;
  double stretch = 1.0;
  KTProfile profile{1.0, {1.0, 0.0}, 0.0};
  Complex rotation{1.0, 0.0};

  std::vector<double> radii;    // nr + 1
  std::vector<double> thetas;   // ntheta
  std::vector<Complex> nodes;   // (nr+1) * ntheta
  std::vector<GridCell> cells;  // nr * ntheta
  std::vector<GridEdge> edges;  // edges with two adjacent cells only
  std::array<CornerProbe, 2> corner{};  // [trailing, leading]
  double mean_edge_len = 0.0;

  int wrap(int j) const { return ((j % ntheta) + ntheta) % ntheta; }
  int node_id(int i, int j) const { return i * ntheta + wrap(j); }
  int cell_id(int i, int j) const { return i * ntheta + wrap(j); }
  int node_count() const { return (nr + 1) * ntheta; }
  int cell_count() const { return nr * ntheta; }

  bool is_body_node(int n) const { return n < ntheta; }
  bool is_outer_node(int n) const { return n >= nr * ntheta; }
  bool is_interior_node(int n) const { return !is_body_node(n) && !is_outer_node(n); }
  int interior_count() const { return (nr - 1) * ntheta; }
  int interior_index(int n) const { return n - ntheta; }

  /// CCW node ids of cell (i, j): (i,j), (i+1,j), (i+1,j+1), (i,j+1).
  std::array<int, 4> cell_nodes(int c) const {
    int i = c / ntheta, j = c % ntheta;
    return {node_id(i, j), node_id(i + 1, j), node_id(i + 1, j + 1), node_id(i, j + 1)};
  }

  double total_cell_area() const;
};

/// Builds and validates the grid. Requires R > 1, Nr >= 8, even Ntheta >= 16,
/// stretch >= 1; throws ConfigError otherwise or when validity checks fail.
ExteriorGrid build_grid(const KTProfile& profile, double R, int Nr, int Ntheta, double stretch);

/// Same radial distribution at 2^level times the resolution (the per-cell
/// stretch ratio is rooted accordingly).
ExteriorGrid build_refined(const KTProfile& profile, double R, int Nr, int Ntheta, double stretch,
                           int level);

}  // namespace cornerflow
