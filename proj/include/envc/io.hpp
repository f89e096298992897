// File formats: the per-direction contour CSV (fixed 11-column schema), the
// sample CSV, scalar sample files, and a dependency-free SVG overlay plot.
// All numeric output goes through 17-significant-digit formatting so files
// round-trip doubles exactly and are byte-stable across runs.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "envc/contour.hpp"
#include "envc/model.hpp"

namespace envc {

// Shortest-exact decimal form (17 significant digits), locale independent.
std::string format_double(double x);

// One row per direction. `convex_ok` is the conjunction of the classical and
// buffered vertex flags for that direction.
struct ContourTable {
    std::vector<double> theta, ux, uy;
    std::vector<double> c, cbar, cbar_scaled;
    std::vector<double> vx_classical, vy_classical;
    std::vector<double> vx_buffered, vy_buffered;
    std::vector<std::uint8_t> convex_ok;

    std::size_t size() const { return theta.size(); }
};

ContourTable make_contour_table(const DirectionGrid& grid,
                                const DirectionalSupport& support, double scale_a,
                                const ContourPolygon& classical,
                                const ContourPolygon& buffered);

void write_contour_csv(const std::string& path, const ContourTable& table);

// Strict parse: header and every cell are validated; the first offending
// column is named in the error.
ContourTable read_contour_csv(const std::string& path);

// Rebuilds the uniform grid and the support values from a parsed table;
// rejects tables whose angles are not the 2 pi j / m grid.
DirectionGrid grid_from_table(const ContourTable& table);
DirectionalSupport support_from_table(const ContourTable& table, double pe,
                                      std::size_t sample_size);

void write_sample_csv(const std::string& path, const SampleSet& samples);

// One numeric value per line (blank lines ignored); parse failures carry the
// 1-based line number.
std::vector<double> read_scalar_file(const std::string& path);

// Classical polygon in gray, buffered (when present) in black, with axis
// ticks; matches the figure convention of the contour plots.
void write_contour_svg(const std::string& path, const ContourPolygon& classical,
                       const ContourPolygon* buffered);

} // namespace envc
