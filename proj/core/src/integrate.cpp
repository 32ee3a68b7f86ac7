#include "kcoshj/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <string>

#include "kcoshj/errors.hpp"

namespace kcoshj {

namespace {

// Largest |d^3 f / dx_a^3| over all components and axes, estimated from
// third differences of the sampled data. Together with h^2 this bounds the
// truncation error of the residual stencils; axes with fewer than four
// nodes contribute nothing.
double third_derivative_scale(const std::vector<double>& data, int ncomp, const GridSpec& spec) {
  double worst = 0.0;
  const std::vector<std::int64_t> strides = spec.strides();
  const std::int64_t nodes = spec.node_count();
  std::vector<int> idx(static_cast<std::size_t>(spec.axes()));
  for (int a = 0; a < spec.axes(); ++a) {
    if (spec.axis_nodes(a) < 4) continue;
    const double h3 = std::pow(spec.spacing[static_cast<std::size_t>(a)], 3);
    const std::int64_t stride = strides[static_cast<std::size_t>(a)] * ncomp;
    for (std::int64_t node = 0; node < nodes; ++node) {
      spec.unflatten(node, idx);
      if (idx[static_cast<std::size_t>(a)] + 3 > spec.steps[static_cast<std::size_t>(a)]) {
        continue;
      }
      const std::int64_t at = node * ncomp;
      for (int c = 0; c < ncomp; ++c) {
        const double f3 = data[static_cast<std::size_t>(at + 3 * stride + c)] -
                          3.0 * data[static_cast<std::size_t>(at + 2 * stride + c)] +
                          3.0 * data[static_cast<std::size_t>(at + stride + c)] -
                          data[static_cast<std::size_t>(at + c)];
        const double mag = std::fabs(f3) / h3;
        if (mag > worst) worst = mag;
      }
    }
  }
  return worst;
}

std::string node_label(std::span<const int> idx, const GridSpec& spec) {
  std::string out = "(";
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (a > 0) out += ", ";
    out += std::to_string(idx[a]);
  }
  out += ") at x = (";
  const std::vector<double> x = spec.node_position(idx);
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (a > 0) out += ", ";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x[a]);
    out += buf;
  }
  out += ")";
  return out;
}

// One RK4 cell advance of psi along axis `axis`, env = (x..., q...) with the
// x part positioned at the cell's start node.
void rk4_cell(const ReducedKVectorField& z, int axis, std::vector<double>& env, int k, int n,
              double h, int substeps, std::vector<double>& work) {
  // work layout: k1 k2 k3 k4 qtmp, each n wide.
  double* k1 = work.data();
  double* k2 = k1 + n;
  double* k3 = k2 + n;
  double* k4 = k3 + n;
  double* qtmp = k4 + n;
  double* q = env.data() + k;

  const double hh = h / substeps;
  const std::size_t sz = static_cast<std::size_t>(n) * sizeof(double);
  for (int s = 0; s < substeps; ++s) {
    const double x0 = env[static_cast<std::size_t>(axis)];

    for (int i = 0; i < n; ++i) k1[i] = z.f(axis, i).value(env);

    env[static_cast<std::size_t>(axis)] = x0 + hh / 2.0;
    std::memcpy(qtmp, q, sz);
    for (int i = 0; i < n; ++i) q[i] = qtmp[i] + hh / 2.0 * k1[i];
    for (int i = 0; i < n; ++i) k2[i] = z.f(axis, i).value(env);

    for (int i = 0; i < n; ++i) q[i] = qtmp[i] + hh / 2.0 * k2[i];
    for (int i = 0; i < n; ++i) k3[i] = z.f(axis, i).value(env);

    env[static_cast<std::size_t>(axis)] = x0 + hh;
    for (int i = 0; i < n; ++i) q[i] = qtmp[i] + hh * k3[i];
    for (int i = 0; i < n; ++i) k4[i] = z.f(axis, i).value(env);

    for (int i = 0; i < n; ++i) {
      q[i] = qtmp[i] + hh / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
}

}  // namespace

GridSolution integrate_section(const ReducedKVectorField& z, std::span<const double> q0,
                               const GridSpec& spec, std::span<const int> axis_order,
                               const IntegrateOptions& options) {
  const Dimensions& dims = z.dims();
  const int k = dims.k();
  const int n = dims.n();
  spec.validate(k, 2);
  if (static_cast<int>(q0.size()) != n) {
    throw ValidationError("initial value must have n components");
  }
  for (double v : q0) {
    if (!std::isfinite(v)) throw ValidationError("initial value must be finite");
  }
  if (options.substeps < 1) throw ValidationError("substeps must be >= 1");

  std::vector<int> order;
  if (axis_order.empty()) {
    order.resize(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
  } else {
    order.assign(axis_order.begin(), axis_order.end());
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int a = 0; a < k; ++a) {
      if (sorted[static_cast<std::size_t>(a)] != a) {
        throw ValidationError("axis_order must be a permutation of the k axes");
      }
    }
  }

  GridSolution out{dims, spec, {}, order, "rk4", options.substeps};
  const std::int64_t nodes = spec.node_count();
  out.values.assign(static_cast<std::size_t>(nodes * n), 0.0);
  const std::vector<std::int64_t> strides = spec.strides();

  std::copy(q0.begin(), q0.end(), out.values.begin());  // origin node is flat index 0

  std::vector<double> env(static_cast<std::size_t>(k + n));
  std::vector<double> work(static_cast<std::size_t>(5 * n));
  std::vector<int> idx(static_cast<std::size_t>(k));

  const auto check_guard = [&](std::span<const double> q, std::span<const int> at) {
    for (double v : q) {
      if (!std::isfinite(v) || std::fabs(v) > options.blowup_bound) {
        throw IntegrationError("integration blew up at node " + node_label(at, spec) +
                                   " (|psi| exceeded " + std::to_string(options.blowup_bound) +
                                   ")",
                               std::vector<int>(at.begin(), at.end()));
      }
    }
  };

  // March axis by axis: after processing a prefix of `order`, the sublattice
  // spanned by those axes (all other indices zero) is filled.
  std::vector<int> filled_axes;
  for (int step = 0; step < k; ++step) {
    const int axis = order[static_cast<std::size_t>(step)];
    const double h = spec.spacing[static_cast<std::size_t>(axis)];

    // Enumerate the filled sublattice.
    std::int64_t sub_count = 1;
    for (int a : filled_axes) sub_count *= spec.axis_nodes(a);

    for (std::int64_t sub = 0; sub < sub_count; ++sub) {
      std::fill(idx.begin(), idx.end(), 0);
      std::int64_t rest = sub;
      for (auto it = filled_axes.rbegin(); it != filled_axes.rend(); ++it) {
        idx[static_cast<std::size_t>(*it)] = static_cast<int>(rest % spec.axis_nodes(*it));
        rest /= spec.axis_nodes(*it);
      }

      std::int64_t node = spec.flat_index(idx);
      const std::vector<double> x = spec.node_position(idx);
      std::copy(x.begin(), x.end(), env.begin());
      std::copy(out.values.begin() + node * n, out.values.begin() + (node + 1) * n,
                env.begin() + k);

      for (int cell = 0; cell < spec.steps[static_cast<std::size_t>(axis)]; ++cell) {
        try {
          rk4_cell(z, axis, env, k, n, h, options.substeps, work);
        } catch (const EvalError& e) {
          idx[static_cast<std::size_t>(axis)] = cell + 1;
          throw IntegrationError("field evaluation failed integrating toward node " +
                                     node_label(idx, spec) + ": " + e.what(),
                                 idx);
        }
        idx[static_cast<std::size_t>(axis)] = cell + 1;
        node += strides[static_cast<std::size_t>(axis)];
        check_guard(std::span<const double>(env).subspan(static_cast<std::size_t>(k)), idx);
        std::copy(env.begin() + k, env.end(), out.values.begin() + node * n);
      }
    }
    filled_axes.push_back(axis);
  }
  return out;
}

double path_independence(const ReducedKVectorField& z, std::span<const double> q0,
                         const GridSpec& spec, const IntegrateOptions& options) {
  const int k = z.dims().k();
  std::vector<int> forward(static_cast<std::size_t>(k));
  std::iota(forward.begin(), forward.end(), 0);
  std::vector<int> reversed(forward.rbegin(), forward.rend());

  const GridSolution a = integrate_section(z, q0, spec, forward, options);
  const GridSolution b = integrate_section(z, q0, spec, reversed, options);

  double dev = 0.0;
  for (std::size_t m = 0; m < a.values.size(); ++m) {
    dev = std::max(dev, std::fabs(a.values[m] - b.values[m]));
  }
  return dev;
}

PhaseMapGrid lift(const HJSection& gamma, const GridSolution& psi) {
  const Dimensions& dims = psi.dims;
  if (!(gamma.dims() == dims)) throw ValidationError("lift: dimension mismatch");
  const int k = dims.k();
  const int n = dims.n();
  const std::int64_t nodes = psi.spec.node_count();

  PhaseMapGrid out{dims, psi.spec, psi.values, {}};
  out.p_values.assign(static_cast<std::size_t>(nodes * k * n), 0.0);

  std::vector<int> idx(static_cast<std::size_t>(k));
  std::vector<double> env(static_cast<std::size_t>(dims.base_dim()));
  for (std::int64_t node = 0; node < nodes; ++node) {
    psi.spec.unflatten(node, idx);
    const std::vector<double> x = psi.spec.node_position(idx);
    std::copy(x.begin(), x.end(), env.begin());
    const auto q = psi.at(node);
    std::copy(q.begin(), q.end(), env.begin() + k);
    for (int a = 0; a < k; ++a) {
      for (int i = 0; i < n; ++i) {
        out.p_values[static_cast<std::size_t>((node * k + a) * n + i)] =
            gamma.gamma(a, i).value(env);
      }
    }
  }
  return out;
}

PipelineReport verify_pipeline(const HamiltonianSystem& sys, const HJSection& gamma,
                               std::span<const double> q0, const GridSpec& spec,
                               const Tolerances& tol, const IntegrateOptions& options) {
  const Dimensions& dims = sys.dims();
  const int k = dims.k();
  const int n = dims.n();

  if (!(gamma.dims() == dims)) throw ValidationError("verify_pipeline: dimension mismatch");
  const ReducedKVectorField z = reduce(sys, gamma);

  PipelineReport report;
  report.solution = integrate_section(z, q0, spec, {}, options);

  // Section-level residuals sampled along the computed solution.
  std::vector<int> idx(static_cast<std::size_t>(k));
  double hj_max = 0.0;
  double closed_max = 0.0;
  double compat_max = 0.0;
  const std::int64_t nodes = spec.node_count();
  for (std::int64_t node = 0; node < nodes; ++node) {
    spec.unflatten(node, idx);
    const std::vector<double> x = spec.node_position(idx);
    const BasePoint pt(dims, x, report.solution.at(node));
    for (double r : hj_residual(gamma, sys, pt)) hj_max = std::max(hj_max, std::fabs(r));
    for (double r : closedness_residual(gamma, pt)) closed_max = std::max(closed_max, std::fabs(r));
    for (double r : compatibility_residual(z, pt)) compat_max = std::max(compat_max, std::fabs(r));
  }

  const double deviation = path_independence(z, q0, spec, options);
  report.lifted = lift(gamma, report.solution);
  report.residuals = hdw_residual(report.lifted, sys);

  double psi_scale = 0.0;
  for (double v : report.lifted.q_values) psi_scale = std::max(psi_scale, std::fabs(v));
  double value_scale = psi_scale;
  for (double v : report.lifted.p_values) value_scale = std::max(value_scale, std::fabs(v));
  // The residual stencils are exact up to (h^2/3) |d^3 f|, so the HDW
  // tolerance must scale with the solution's third derivatives, not just
  // its values; estimate them from the lifted data.
  const double curvature =
      std::max(third_derivative_scale(report.lifted.q_values, n, spec),
               third_derivative_scale(report.lifted.p_values, k * n, spec)) /
      3.0;
  report.solution_scale = 1.0 + value_scale + curvature;

  double h_max = 0.0;
  for (double h : spec.spacing) h_max = std::max(h_max, h);

  report.hj = {hj_max, tol.hj, hj_max <= tol.hj};
  report.closedness = {closed_max, tol.closedness, closed_max <= tol.closedness};
  report.compatibility = {compat_max, tol.compatibility, compat_max <= tol.compatibility};
  const double path_tol = tol.path_independence * (1.0 + psi_scale);
  report.path = {deviation, path_tol, deviation <= path_tol};
  const double hdw_tol = tol.hdw_per_h2 * h_max * h_max * report.solution_scale;
  report.hdw_r1_max = report.residuals.r1_max;
  report.hdw_r2_max = report.residuals.r2_max;
  report.hdw = {report.residuals.max(), hdw_tol, report.residuals.max() <= hdw_tol};
  report.pass = report.hj.pass && report.closedness.pass && report.compatibility.pass &&
                report.path.pass && report.hdw.pass;
  return report;
}

}  // namespace kcoshj
