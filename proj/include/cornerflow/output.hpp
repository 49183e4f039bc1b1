#pragma once

#include <filesystem>
#include <vector>

#include "json.hpp"

#include "cornerflow/grid.hpp"
#include "cornerflow/solver.hpp"

namespace cornerflow {

/// Cell-centroid field table; column order is frozen: x,y,psi,vx,vy,rho,mach.
void write_field_csv(const std::filesystem::path& path, const ExteriorGrid& grid,
                     const StreamField& field);

/// One JSON object per line: {"iter":..,"residual":..,"max_mach":..}.
void write_convergence_jsonl(const std::filesystem::path& path, const StreamField& field);

/// Node coordinates: i,j,x,y.
void write_grid_csv(const std::filesystem::path& path, const ExteriorGrid& grid);

/// x,y rows; traces separated by blank lines.
void write_streamlines_csv(const std::filesystem::path& path,
                           const std::vector<std::vector<Complex>>& lines);

void write_manifest(const std::filesystem::path& path, const nlohmann::json& manifest);

struct SvgOptions {
  double clip_radius = 4.0;  // plot window half-width around the body
  int contour_levels = 23;   // psi iso-lines (streamlines of the solved field)
  int width_px = 900;
  bool color_by_mach = true;  // false: color by speed (incompressible runs)
};

/// Self-contained plot: cells colored by Mach (or speed), psi contours,
/// body outline, optional extra polylines (e.g. traced streamlines).
void write_field_svg(const std::filesystem::path& path, const ExteriorGrid& grid,
                     const StreamField& field, const SvgOptions& opt = {},
                     const std::vector<std::vector<Complex>>& polylines = {});

}  // namespace cornerflow
