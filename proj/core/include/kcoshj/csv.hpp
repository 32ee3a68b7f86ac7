#pragma once

#include <iosfwd>
#include <string>

#include "kcoshj/grid.hpp"
#include "kcoshj/kvector.hpp"

namespace kcoshj {

/// CSV conventions shared by all writers: one header row, values printed
/// with 17 significant digits (lossless double round-trip), rows in flat
/// node order (lexicographic multi-index, axis 1 slowest).

/// Columns: x1..xk, q1..qn.
void write_grid_solution_csv(std::ostream& os, const GridSolution& psi);

/// Columns: the full coordinate_names(dims) of the lifted map.
void write_phase_map_csv(std::ostream& os, const PhaseMapGrid& phi);

/// Columns: x1..xk, r1_a_i (k*n columns), r2_i (n columns).
void write_hdw_residual_csv(std::ostream& os, const HdwResidualGrid& residuals);

std::string format_double(double v);

}  // namespace kcoshj
