#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kcoshj/dimensions.hpp"

namespace kcoshj {

/// Rectangular node lattice in R^k: per-axis origin, spacing and step count.
/// Axis a has steps[a]+1 nodes. Flat node order is lexicographic in the
/// multi-index with axis 1 slowest, matching the CSV row order.
struct GridSpec {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<int> steps;

  int axes() const { return static_cast<int>(origin.size()); }
  int axis_nodes(int axis) const { return steps[static_cast<std::size_t>(axis)] + 1; }
  std::int64_t node_count() const;

  /// Per-axis stride of the flat node index (axis 0 is the largest).
  std::vector<std::int64_t> strides() const;
  std::int64_t flat_index(std::span<const int> idx) const;
  void unflatten(std::int64_t flat, std::span<int> idx) const;

  /// Coordinates of the node at `idx`.
  std::vector<double> node_position(std::span<const int> idx) const;

  /// Throws ValidationError unless sizes match `k`, spacings are positive
  /// and every axis has at least min_steps steps.
  void validate(int k, int min_steps = 2) const;
};

/// Sampled values of a map psi: U in R^k -> R^n on a GridSpec lattice, plus
/// the metadata of the integrator run that produced it.
struct GridSolution {
  Dimensions dims;
  GridSpec spec;
  /// node-major, n values per node.
  std::vector<double> values;
  /// Axis fill order used by the sweep integrator.
  std::vector<int> axis_order;
  std::string method = "rk4";
  int substeps = 1;

  std::span<const double> at(std::int64_t node) const {
    return {values.data() + node * dims.n(), static_cast<std::size_t>(dims.n())};
  }
};

/// Sampled values of a map x -> (x, psi^i(x), psi^a_i(x)) into phase space:
/// a candidate solution of the field equations on a grid.
struct PhaseMapGrid {
  Dimensions dims;
  GridSpec spec;
  /// node-major, n values per node.
  std::vector<double> q_values;
  /// node-major, k*n values per node (space-time index outermost).
  std::vector<double> p_values;

  std::span<const double> q_at(std::int64_t node) const {
    return {q_values.data() + node * dims.n(), static_cast<std::size_t>(dims.n())};
  }
  std::span<const double> p_at(std::int64_t node) const {
    const std::int64_t kn = static_cast<std::int64_t>(dims.k()) * dims.n();
    return {p_values.data() + node * kn, static_cast<std::size_t>(kn)};
  }

  /// Validates shapes, finiteness, and the >=3 nodes per axis requirement
  /// of the finite-difference residual stencils.
  void validate() const;
};

}  // namespace kcoshj
