#pragma once

#include <array>
#include <string>
#include <vector>

#include "vmo/matrix_market.hpp"
#include "vmo/pointset.hpp"
#include "vmo/sparse_matrix.hpp"

namespace vmo {

/// Spy plot: one mark per nonzero, with block boundaries overlaid when a
/// report is given. Output is byte-deterministic for identical inputs.
std::string render_spy_svg(const SparseMatrix& m,
                           const std::vector<BlockReportRow>* blocks = nullptr);

/// Scatter of the points projected on their first two principal axes, at a
/// fixed scale of `px_per_unit` pixels per layout unit.
std::string render_layout_svg(const PointSet& points, double px_per_unit = 100.0);

/// Projection helper: rows are the 2-d images of the points.
std::vector<std::array<double, 2>> principal_projection(const PointSet& points);

}  // namespace vmo
