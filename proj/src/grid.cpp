#include "cornerflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cornerflow/errors.hpp"

namespace cornerflow {

namespace {
constexpr double kPi = std::numbers::pi;

double quad_area(Complex p0, Complex p1, Complex p2, Complex p3) {
  return 0.5 * (cross(p0, p1) + cross(p1, p2) + cross(p2, p3) + cross(p3, p0));
}

Complex quad_centroid(Complex p0, Complex p1, Complex p2, Complex p3, double area) {
  Complex acc{0.0, 0.0};
  const Complex p[4] = {p0, p1, p2, p3};
  for (int k = 0; k < 4; ++k) {
    Complex q = p[(k + 1) % 4];
    acc += (p[k] + q) * cross(p[k], q);
  }
  return acc / (6.0 * area);
}
}  // namespace

double ExteriorGrid::total_cell_area() const {
  KahanSum s;
  for (const auto& c : cells) s.add(c.area);
  return s.value();
}

ExteriorGrid build_grid(const KTProfile& profile, double R, int Nr, int Ntheta, double stretch) {
  if (!(R > 1.0)) throw ConfigError("build_grid: outer radius R must exceed 1");
  if (Nr < 8) throw ConfigError("build_grid: Nr must be at least 8");
  if (Ntheta < 16 || Ntheta % 2 != 0) throw ConfigError("build_grid: Ntheta must be even and >= 16");
  if (!(stretch >= 1.0)) throw ConfigError("build_grid: stretch must be >= 1");

  ExteriorGrid g;
  g.R = R;
  g.nr = Nr;
  g.ntheta = Ntheta;
  g.stretch = stretch;
  g.profile = profile;
  g.rotation = std::polar(1.0, profile.attack_angle());

  g.radii.resize(Nr + 1);
  for (int i = 0; i <= Nr; ++i) {
    double u = (stretch == 1.0)
                   ? static_cast<double>(i) / Nr
                   : (std::pow(stretch, i) - 1.0) / (std::pow(stretch, Nr) - 1.0);
    g.radii[i] = 1.0 + (R - 1.0) * u;
  }
  g.thetas.resize(Ntheta);
  for (int j = 0; j < Ntheta; ++j) g.thetas[j] = 2.0 * kPi * (j + 0.5) / Ntheta;

  const double nu = profile.nu;
  g.nodes.resize(g.node_count());
  for (int i = 0; i <= Nr; ++i)
    for (int j = 0; j < Ntheta; ++j)
      g.nodes[g.node_id(i, j)] = g.rotation * kt_forward(std::polar(g.radii[i], g.thetas[j]), nu);

  // body-row consistency of the map and its inverse
  for (int j = 0; j < Ntheta; ++j) {
    Complex zeta = std::polar(1.0, g.thetas[j]);
    Complex z = kt_forward(zeta, nu);
    if (nu < 2.0) {
      if (std::abs(kt_inverse(z, nu) - zeta) > 1e-10)
        throw ConfigError("build_grid: body node inverse-map roundtrip failed");
    } else {
      // the nu = 2 slit is double-covered; the inverse returns one preimage
      if (std::abs(kt_forward(kt_inverse(z, nu), nu) - z) > 1e-10)
        throw ConfigError("build_grid: body node value roundtrip failed");
    }
  }

  g.cells.resize(g.cell_count());
  for (int i = 0; i < Nr; ++i) {
    for (int j = 0; j < Ntheta; ++j) {
      auto nn = g.cell_nodes(g.cell_id(i, j));
      Complex p0 = g.nodes[nn[0]], p1 = g.nodes[nn[1]], p2 = g.nodes[nn[2]], p3 = g.nodes[nn[3]];
      double area = quad_area(p0, p1, p2, p3);
      if (!(area > 0.0))
        throw ConfigError("build_grid: non-positive cell area at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      g.cells[g.cell_id(i, j)] = {area, quad_centroid(p0, p1, p2, p3, area),
                                  0.25 * (p0 + p1 + p2 + p3)};
    }
  }

  auto push_edge = [&](int n0, int n1, int cr, int cl) {
    GridEdge e;
    e.n0 = n0;
    e.n1 = n1;
    e.cell_right = cr;
    e.cell_left = cl;
    Complex p = g.nodes[n0], q = g.nodes[n1];
    Complex vr = g.cells[cr].vcenter, vl = g.cells[cl].vcenter;
    double two_ad = quad_area(p, vr, q, vl) * 2.0;
    if (!(two_ad > 0.0)) throw ConfigError("build_grid: degenerate flux diamond");
    e.a = rot_cw(vl - vr);
    e.b = rot_cw(q - p);
    if (!(dot(e.a, q - p) > 0.0)) throw ConfigError("build_grid: dual face misoriented");
    e.inv2ad = 1.0 / two_ad;
    e.alpha_geom = dot(e.a, e.a) * e.inv2ad;
    e.cross_geom = dot(e.b, e.a) * e.inv2ad;
    g.edges.push_back(e);
  };

  g.edges.reserve(Nr * Ntheta + (Nr - 1) * Ntheta);
  // radial edges: right of the outward edge is the theta-minus cell
  for (int i = 0; i < Nr; ++i)
    for (int j = 0; j < Ntheta; ++j)
      push_edge(g.node_id(i, j), g.node_id(i + 1, j), g.cell_id(i, j - 1), g.cell_id(i, j));
  // angular edges (interior rings only): right of the CCW edge is the outer cell
  for (int i = 1; i < Nr; ++i)
    for (int j = 0; j < Ntheta; ++j)
      push_edge(g.node_id(i, j), g.node_id(i, j + 1), g.cell_id(i, j), g.cell_id(i - 1, j));

  KahanSum len;
  for (const auto& e : g.edges) len.add(std::abs(g.nodes[e.n1] - g.nodes[e.n0]));
  g.mean_edge_len = len.value() / static_cast<double>(g.edges.size());

  // corner probes: the 4 nearest cell centroids per corner
  for (int c = 0; c < 2; ++c) {
    Complex pos = g.rotation * Complex(c == 0 ? 1.0 : -1.0, 0.0);
    std::vector<std::pair<double, int>> byDist(g.cell_count());
    for (int k = 0; k < g.cell_count(); ++k) byDist[k] = {std::abs(g.cells[k].centroid - pos), k};
    std::partial_sort(byDist.begin(), byDist.begin() + 4, byDist.end());
    CornerProbe probe;
    probe.position = pos;
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
      probe.cells[k] = byDist[k].second;
      acc += byDist[k].first;
    }
    probe.mean_distance = acc / 4.0;
    g.corner[c] = probe;
  }
  return g;
}

ExteriorGrid build_refined(const KTProfile& profile, double R, int Nr, int Ntheta, double stretch,
                           int level) {
  double s = std::pow(stretch, 1.0 / static_cast<double>(1 << level));
  return build_grid(profile, R, Nr << level, Ntheta << level, s);
}

}  // namespace cornerflow
