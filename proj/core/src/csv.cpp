#include "kcoshj/csv.hpp"

#include <cstdio>
#include <ostream>

namespace kcoshj {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_position(std::ostream& os, const GridSpec& spec, std::span<const int> idx) {
  for (int a = 0; a < spec.axes(); ++a) {
    if (a > 0) os << ',';
    os << format_double(spec.origin[static_cast<std::size_t>(a)] +
                        idx[static_cast<std::size_t>(a)] *
                            spec.spacing[static_cast<std::size_t>(a)]);
  }
}

}  // namespace

void write_grid_solution_csv(std::ostream& os, const GridSolution& psi) {
  const Dimensions& dims = psi.dims;
  for (int a = 0; a < dims.k(); ++a) os << "x" << (a + 1) << ',';
  for (int i = 0; i < dims.n(); ++i) {
    os << "q" << (i + 1) << (i + 1 < dims.n() ? "," : "");
  }
  os << '\n';

  std::vector<int> idx(static_cast<std::size_t>(dims.k()));
  const std::int64_t nodes = psi.spec.node_count();
  for (std::int64_t node = 0; node < nodes; ++node) {
    psi.spec.unflatten(node, idx);
    write_position(os, psi.spec, idx);
    const auto q = psi.at(node);
    for (double v : q) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_phase_map_csv(std::ostream& os, const PhaseMapGrid& phi) {
  const Dimensions& dims = phi.dims;
  const std::vector<std::string> names = coordinate_names(dims);
  for (std::size_t c = 0; c < names.size(); ++c) {
    os << names[c] << (c + 1 < names.size() ? "," : "");
  }
  os << '\n';

  std::vector<int> idx(static_cast<std::size_t>(dims.k()));
  const std::int64_t nodes = phi.spec.node_count();
  for (std::int64_t node = 0; node < nodes; ++node) {
    phi.spec.unflatten(node, idx);
    write_position(os, phi.spec, idx);
    for (double v : phi.q_at(node)) os << ',' << format_double(v);
    for (double v : phi.p_at(node)) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_hdw_residual_csv(std::ostream& os, const HdwResidualGrid& residuals) {
  const Dimensions& dims = residuals.dims;
  const int k = dims.k();
  const int n = dims.n();
  for (int a = 0; a < k; ++a) os << "x" << (a + 1) << ',';
  for (int a = 0; a < k; ++a) {
    for (int i = 0; i < n; ++i) os << "r1_" << (a + 1) << "_" << (i + 1) << ',';
  }
  for (int i = 0; i < n; ++i) os << "r2_" << (i + 1) << (i + 1 < n ? "," : "");
  os << '\n';

  std::vector<int> idx(static_cast<std::size_t>(k));
  const std::int64_t nodes = residuals.spec.node_count();
  for (std::int64_t node = 0; node < nodes; ++node) {
    residuals.spec.unflatten(node, idx);
    write_position(os, residuals.spec, idx);
    for (int m = 0; m < k * n; ++m) {
      os << ',' << format_double(residuals.r1[static_cast<std::size_t>(node * k * n + m)]);
    }
    for (int i = 0; i < n; ++i) {
      os << ',' << format_double(residuals.r2[static_cast<std::size_t>(node * n + i)]);
    }
    os << '\n';
  }
}

}  // namespace kcoshj
