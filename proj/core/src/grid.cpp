#include "kcoshj/grid.hpp"

#include <cmath>
#include <string>

#include "kcoshj/errors.hpp"

namespace kcoshj {

std::int64_t GridSpec::node_count() const {
  std::int64_t count = 1;
  for (int a = 0; a < axes(); ++a) count *= axis_nodes(a);
  return count;
}

std::vector<std::int64_t> GridSpec::strides() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(axes()));
  std::int64_t stride = 1;
  for (int a = axes() - 1; a >= 0; --a) {
    out[static_cast<std::size_t>(a)] = stride;
    stride *= axis_nodes(a);
  }
  return out;
}

std::int64_t GridSpec::flat_index(std::span<const int> idx) const {
  std::int64_t flat = 0;
  for (int a = 0; a < axes(); ++a) {
    flat = flat * axis_nodes(a) + idx[static_cast<std::size_t>(a)];
  }
  return flat;
}

void GridSpec::unflatten(std::int64_t flat, std::span<int> idx) const {
  for (int a = axes() - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % axis_nodes(a));
    flat /= axis_nodes(a);
  }
}

std::vector<double> GridSpec::node_position(std::span<const int> idx) const {
  std::vector<double> x(static_cast<std::size_t>(axes()));
  for (int a = 0; a < axes(); ++a) {
    x[static_cast<std::size_t>(a)] =
        origin[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)] * spacing[static_cast<std::size_t>(a)];
  }
  return x;
}

void GridSpec::validate(int k, int min_steps) const {
  if (axes() != k || spacing.size() != origin.size() || steps.size() != origin.size()) {
    throw ValidationError("grid must declare origin, spacing and steps for each of the " +
                          std::to_string(k) + " axes");
  }
  for (int a = 0; a < axes(); ++a) {
    if (!std::isfinite(origin[static_cast<std::size_t>(a)])) {
      throw ValidationError("grid origin must be finite");
    }
    if (!(spacing[static_cast<std::size_t>(a)] > 0.0) ||
        !std::isfinite(spacing[static_cast<std::size_t>(a)])) {
      throw ValidationError("grid spacing must be positive");
    }
    if (steps[static_cast<std::size_t>(a)] < min_steps) {
      throw ValidationError("grid axis " + std::to_string(a + 1) + " needs at least " +
                            std::to_string(min_steps) + " steps");
    }
  }
}

void PhaseMapGrid::validate() const {
  spec.validate(dims.k(), 2);
  const std::int64_t nodes = spec.node_count();
  if (static_cast<std::int64_t>(q_values.size()) != nodes * dims.n() ||
      static_cast<std::int64_t>(p_values.size()) != nodes * dims.k() * dims.n()) {
    throw ValidationError("phase map value arrays do not match the grid size");
  }
  for (double v : q_values) {
    if (!std::isfinite(v)) throw ValidationError("phase map contains non-finite field values");
  }
  for (double v : p_values) {
    if (!std::isfinite(v)) throw ValidationError("phase map contains non-finite momentum values");
  }
}

}  // namespace kcoshj
