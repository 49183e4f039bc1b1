#include "cornerflow/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "cornerflow/errors.hpp"

namespace cornerflow {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file " + path.string());
  return out;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const ExteriorGrid& grid,
                     const StreamField& field) {
  auto out = open_out(path);
  out << "x,y,psi,vx,vy,rho,mach\n";
  for (int c = 0; c < grid.cell_count(); ++c) {
    Complex p = grid.cells[c].centroid;
    out << fmt(p.real()) << ',' << fmt(p.imag()) << ',' << fmt(field.psi_cell[c]) << ','
        << fmt(field.vx[c]) << ',' << fmt(field.vy[c]) << ',' << fmt(field.rho[c]) << ','
        << fmt(field.mach[c]) << '\n';
  }
}

void write_convergence_jsonl(const std::filesystem::path& path, const StreamField& field) {
  auto out = open_out(path);
  for (const auto& rec : field.history) {
    out << "{\"iter\":" << rec.iter << ",\"residual\":" << fmt(rec.residual)
        << ",\"max_mach\":" << fmt(rec.max_mach) << "}\n";
  }
}

void write_grid_csv(const std::filesystem::path& path, const ExteriorGrid& grid) {
  auto out = open_out(path);
  out << "i,j,x,y\n";
  for (int i = 0; i <= grid.nr; ++i)
    for (int j = 0; j < grid.ntheta; ++j) {
      Complex p = grid.nodes[grid.node_id(i, j)];
      out << i << ',' << j << ',' << fmt(p.real()) << ',' << fmt(p.imag()) << '\n';
    }
}

void write_streamlines_csv(const std::filesystem::path& path,
                           const std::vector<std::vector<Complex>>& lines) {
  auto out = open_out(path);
  out << "x,y\n";
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (k > 0) out << '\n';
    for (Complex p : lines[k]) out << fmt(p.real()) << ',' << fmt(p.imag()) << '\n';
  }
}

void write_manifest(const std::filesystem::path& path, const nlohmann::json& manifest) {
  auto out = open_out(path);
  out << manifest.dump(2) << '\n';
}

namespace {

struct Mapper {
  double clip, width;
  double X(double x) const { return (x + clip) / (2.0 * clip) * width; }
  double Y(double y) const { return (clip - y) / (2.0 * clip) * width; }
};

std::string color_for(double t) {
  // two-stop linear map: blue -> white -> red
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [](double a, double b, double s) { return a + (b - a) * s; };
  double r, g, b;
  if (t < 0.5) {
    double s = t / 0.5;
    r = lerp(44, 255, s);
    g = lerp(123, 255, s);
    b = lerp(182, 255, s);
  } else {
    double s = (t - 0.5) / 0.5;
    r = lerp(255, 215, s);
    g = lerp(255, 25, s);
    b = lerp(255, 28, s);
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r), static_cast<int>(g),
                static_cast<int>(b));
  return buf;
}

}  // namespace

void write_field_svg(const std::filesystem::path& path, const ExteriorGrid& grid,
                     const StreamField& field, const SvgOptions& opt,
                     const std::vector<std::vector<Complex>>& polylines) {
  auto out = open_out(path);
  Mapper m{opt.clip_radius, static_cast<double>(opt.width_px)};

  auto in_view = [&](Complex p) {
    return std::abs(p.real()) < 1.2 * opt.clip_radius && std::abs(p.imag()) < 1.2 * opt.clip_radius;
  };
  std::vector<int> shown;
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (int c = 0; c < grid.cell_count(); ++c) {
    auto nn = grid.cell_nodes(c);
    bool ok = true;
    for (int n : nn) ok = ok && in_view(grid.nodes[n]);
    if (!ok) continue;
    shown.push_back(c);
    double v = opt.color_by_mach ? field.mach[c] : std::hypot(field.vx[c], field.vy[c]);
    if (std::isfinite(v)) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (!(vmax > vmin)) {
    vmin = 0.0;
    vmax = 1.0;
  }

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width_px << "\" height=\""
      << opt.width_px << "\" viewBox=\"0 0 " << opt.width_px << ' ' << opt.width_px << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  char buf[160];
  for (int c : shown) {
    auto nn = grid.cell_nodes(c);
    double v = opt.color_by_mach ? field.mach[c] : std::hypot(field.vx[c], field.vy[c]);
    std::string col = std::isfinite(v) ? color_for((v - vmin) / (vmax - vmin)) : "#aaaaaa";
    out << "<polygon points=\"";
    for (int n : nn) {
      Complex p = grid.nodes[n];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", m.X(p.real()), m.Y(p.imag()));
      out << buf;
    }
    out << "\" fill=\"" << col << "\" stroke=\"none\"/>\n";
  }

  // psi iso-lines: crossing segments per cell edge pair
  double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
  for (int c : shown) {
    pmin = std::min(pmin, field.psi_cell[c]);
    pmax = std::max(pmax, field.psi_cell[c]);
  }
  for (int l = 1; l <= opt.contour_levels; ++l) {
    double level = pmin + (pmax - pmin) * l / (opt.contour_levels + 1.0);
    out << "<path d=\"";
    for (int c : shown) {
      auto nn = grid.cell_nodes(c);
      Complex cross_pt[4];
      int ncross = 0;
      for (int k = 0; k < 4 && ncross < 4; ++k) {
        double a = field.psi[nn[k]], b = field.psi[nn[(k + 1) % 4]];
        if ((a < level) == (b < level)) continue;
        double t = (level - a) / (b - a);
        cross_pt[ncross++] = grid.nodes[nn[k]] + t * (grid.nodes[nn[(k + 1) % 4]] - grid.nodes[nn[k]]);
      }
      for (int s = 0; s + 1 < ncross; s += 2) {
        std::snprintf(buf, sizeof buf, "M%.2f %.2fL%.2f %.2f", m.X(cross_pt[s].real()),
                      m.Y(cross_pt[s].imag()), m.X(cross_pt[s + 1].real()), m.Y(cross_pt[s + 1].imag()));
        out << buf;
      }
    }
    out << "\" stroke=\"#333333\" stroke-width=\"0.8\" fill=\"none\"/>\n";
  }

  for (const auto& line : polylines) {
    if (line.size() < 2) continue;
    out << "<polyline points=\"";
    for (Complex p : line) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", m.X(p.real()), m.Y(p.imag()));
      out << buf;
    }
    out << "\" stroke=\"#006644\" stroke-width=\"1.2\" fill=\"none\"/>\n";
  }

  out << "<polygon points=\"";
  for (int j = 0; j < grid.ntheta; ++j) {
    Complex p = grid.nodes[grid.node_id(0, j)];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", m.X(p.real()), m.Y(p.imag()));
    out << buf;
  }
  out << "\" fill=\"#999999\" stroke=\"#222222\" stroke-width=\"1.5\"/>\n";
  out << "</svg>\n";
}

}  // namespace cornerflow
