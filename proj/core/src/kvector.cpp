#include "kcoshj/kvector.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "kcoshj/errors.hpp"

namespace kcoshj {

namespace {

void check_component_array(const std::vector<FieldPtr>& fields, std::size_t expected, int arity,
                           const char* what) {
  if (fields.size() != expected) {
    throw ValidationError(std::string(what) + " component count mismatch: got " +
                          std::to_string(fields.size()) + ", expected " +
                          std::to_string(expected));
  }
  for (const auto& f : fields) {
    if (!f) throw ValidationError(std::string(what) + " has a null component");
    if (f->arity() != arity) {
      throw ValidationError(std::string(what) + " components must be phase-space fields");
    }
  }
}

}  // namespace

KVectorFieldLocal::KVectorFieldLocal(Dimensions dims, std::vector<FieldPtr> base,
                                     std::vector<FieldPtr> field, std::vector<FieldPtr> momentum)
    : dims_(dims), base_(std::move(base)), field_(std::move(field)), momentum_(std::move(momentum)) {
  const std::size_t k = static_cast<std::size_t>(dims_.k());
  const std::size_t n = static_cast<std::size_t>(dims_.n());
  check_component_array(base_, k * k, dims_.phase_dim(), "base");
  check_component_array(field_, k * n, dims_.phase_dim(), "field");
  check_component_array(momentum_, k * k * n, dims_.phase_dim(), "momentum");
}

const ScalarField& KVectorFieldLocal::base(int a, int b) const {
  return *base_[static_cast<std::size_t>(a * dims_.k() + b)];
}
const ScalarField& KVectorFieldLocal::field(int a, int i) const {
  return *field_[static_cast<std::size_t>(a * dims_.n() + i)];
}
const ScalarField& KVectorFieldLocal::momentum(int a, int b, int i) const {
  return *momentum_[static_cast<std::size_t>((a * dims_.k() + b) * dims_.n() + i)];
}
const FieldPtr& KVectorFieldLocal::base_ptr(int a, int b) const {
  return base_[static_cast<std::size_t>(a * dims_.k() + b)];
}
const FieldPtr& KVectorFieldLocal::field_ptr(int a, int i) const {
  return field_[static_cast<std::size_t>(a * dims_.n() + i)];
}
const FieldPtr& KVectorFieldLocal::momentum_ptr(int a, int b, int i) const {
  return momentum_[static_cast<std::size_t>((a * dims_.k() + b) * dims_.n() + i)];
}

KVectorFieldLocal canonical_solution(const HamiltonianSystem& sys) {
  const Dimensions& dims = sys.dims();
  const int k = dims.k();
  const int n = dims.n();
  const int arity = dims.phase_dim();

  std::vector<FieldPtr> base;
  base.reserve(static_cast<std::size_t>(k * k));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      base.push_back(make_constant_field(arity, a == b ? 1.0 : 0.0));
    }
  }

  std::vector<FieldPtr> field;
  field.reserve(static_cast<std::size_t>(k * n));
  for (int a = 0; a < k; ++a) {
    for (int i = 0; i < n; ++i) {
      field.push_back(make_partial_field(sys.hamiltonian_ptr(), dims.p_index(a, i)));
    }
  }

  // The whole -dH/dq^i trace lives in the (a=1, b=1) slot; everything else
  // is zero. Any redistribution over the diagonal solves the equations too.
  std::vector<FieldPtr> momentum(static_cast<std::size_t>(k * k * n));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      for (int i = 0; i < n; ++i) {
        FieldPtr component;
        if (a == 0 && b == 0) {
          component = make_scaled_field(
              -1.0, make_partial_field(sys.hamiltonian_ptr(), dims.q_index(i)));
        } else {
          component = make_constant_field(arity, 0.0);
        }
        momentum[static_cast<std::size_t>((a * k + b) * n + i)] = std::move(component);
      }
    }
  }

  return KVectorFieldLocal(dims, std::move(base), std::move(field), std::move(momentum));
}

double SolutionResiduals::max() const {
  double m = base_max;
  if (field_max > m) m = field_max;
  if (momentum_trace_max > m) m = momentum_trace_max;
  return m;
}

SolutionResiduals is_solution(const KVectorFieldLocal& candidate, const HamiltonianSystem& sys,
                              const PhasePoint& pt, double tol) {
  const Dimensions& dims = sys.dims();
  if (!(candidate.dims() == dims) || !(pt.dims() == dims)) {
    throw ValidationError("is_solution: dimension mismatch");
  }
  const std::span<const double> env = pt.flat();
  SolutionResiduals out;
  for (int a = 0; a < dims.k(); ++a) {
    for (int b = 0; b < dims.k(); ++b) {
      const double want = (a == b) ? 1.0 : 0.0;
      const double r = std::fabs(candidate.base(a, b).value(env) - want);
      if (r > out.base_max) out.base_max = r;
    }
  }
  const ScalarField& h = sys.hamiltonian();
  for (int a = 0; a < dims.k(); ++a) {
    for (int i = 0; i < dims.n(); ++i) {
      const double r =
          std::fabs(candidate.field(a, i).value(env) - h.partial(env, dims.p_index(a, i)));
      if (r > out.field_max) out.field_max = r;
    }
  }
  for (int i = 0; i < dims.n(); ++i) {
    double trace = 0.0;
    for (int a = 0; a < dims.k(); ++a) trace += candidate.momentum(a, a, i).value(env);
    const double r = std::fabs(trace + h.partial(env, dims.q_index(i)));
    if (r > out.momentum_trace_max) out.momentum_trace_max = r;
  }
  out.pass = out.max() <= tol;
  return out;
}

bool kernel_check(const KVectorFieldLocal& candidate, const PhasePoint& pt, double tol) {
  const Dimensions& dims = candidate.dims();
  if (!(pt.dims() == dims)) throw ValidationError("kernel_check: dimension mismatch");
  const std::span<const double> env = pt.flat();
  for (int a = 0; a < dims.k(); ++a) {
    for (int b = 0; b < dims.k(); ++b) {
      if (std::fabs(candidate.base(a, b).value(env)) > tol) return false;
    }
    for (int i = 0; i < dims.n(); ++i) {
      if (std::fabs(candidate.field(a, i).value(env)) > tol) return false;
    }
  }
  for (int i = 0; i < dims.n(); ++i) {
    double trace = 0.0;
    for (int a = 0; a < dims.k(); ++a) trace += candidate.momentum(a, a, i).value(env);
    if (std::fabs(trace) > tol) return false;
  }
  return true;
}

KVectorFieldLocal difference(const KVectorFieldLocal& a, const KVectorFieldLocal& b) {
  if (!(a.dims() == b.dims())) throw ValidationError("difference: dimension mismatch");
  const Dimensions& dims = a.dims();
  const int k = dims.k();
  const int n = dims.n();

  std::vector<FieldPtr> base;
  std::vector<FieldPtr> field;
  std::vector<FieldPtr> momentum;
  base.reserve(static_cast<std::size_t>(k * k));
  field.reserve(static_cast<std::size_t>(k * n));
  momentum.reserve(static_cast<std::size_t>(k * k * n));

  for (int ai = 0; ai < k; ++ai) {
    for (int bi = 0; bi < k; ++bi) {
      base.push_back(
          make_linear_combination({{1.0, a.base_ptr(ai, bi)}, {-1.0, b.base_ptr(ai, bi)}}));
    }
  }
  for (int ai = 0; ai < k; ++ai) {
    for (int i = 0; i < n; ++i) {
      field.push_back(
          make_linear_combination({{1.0, a.field_ptr(ai, i)}, {-1.0, b.field_ptr(ai, i)}}));
    }
  }
  for (int ai = 0; ai < k; ++ai) {
    for (int bi = 0; bi < k; ++bi) {
      for (int i = 0; i < n; ++i) {
        momentum.push_back(make_linear_combination(
            {{1.0, a.momentum_ptr(ai, bi, i)}, {-1.0, b.momentum_ptr(ai, bi, i)}}));
      }
    }
  }
  return KVectorFieldLocal(dims, std::move(base), std::move(field), std::move(momentum));
}

namespace {

// Second-order derivative along one grid axis: central in the interior,
// one-sided three-point at the two boundary nodes.
double axis_derivative(const std::vector<double>& data, std::int64_t node, int pos, int last,
                       std::int64_t stride, std::int64_t comp_stride, int comp, double h) {
  const auto at = [&](std::int64_t nd) {
    return data[static_cast<std::size_t>(nd * comp_stride + comp)];
  };
  if (pos > 0 && pos < last) {
    return (at(node + stride) - at(node - stride)) / (2.0 * h);
  }
  if (pos == 0) {
    return (-3.0 * at(node) + 4.0 * at(node + stride) - at(node + 2 * stride)) / (2.0 * h);
  }
  return (3.0 * at(node) - 4.0 * at(node - stride) + at(node - 2 * stride)) / (2.0 * h);
}

}  // namespace

HdwResidualGrid hdw_residual(const PhaseMapGrid& phi, const HamiltonianSystem& sys) {
  if (!(phi.dims == sys.dims())) throw ValidationError("hdw_residual: dimension mismatch");
  phi.validate();

  const Dimensions& dims = phi.dims;
  const GridSpec& spec = phi.spec;
  const int k = dims.k();
  const int n = dims.n();
  const std::int64_t nodes = spec.node_count();
  const std::vector<std::int64_t> strides = spec.strides();
  const ScalarField& h = sys.hamiltonian();

  HdwResidualGrid out{dims, spec, {}, {}, 0.0, 0.0};
  out.r1.assign(static_cast<std::size_t>(nodes * k * n), 0.0);
  out.r2.assign(static_cast<std::size_t>(nodes * n), 0.0);

  std::vector<int> idx(static_cast<std::size_t>(k));
  std::vector<double> env(static_cast<std::size_t>(dims.phase_dim()));

  for (std::int64_t node = 0; node < nodes; ++node) {
    spec.unflatten(node, idx);
    const std::vector<double> x = spec.node_position(idx);
    std::copy(x.begin(), x.end(), env.begin());
    const auto q = phi.q_at(node);
    std::copy(q.begin(), q.end(), env.begin() + k);
    const auto p = phi.p_at(node);
    std::copy(p.begin(), p.end(), env.begin() + dims.base_dim());

    for (int i = 0; i < n; ++i) {
      double div = 0.0;
      for (int a = 0; a < k; ++a) {
        const double ha = spec.spacing[static_cast<std::size_t>(a)];
        const std::int64_t stride = strides[static_cast<std::size_t>(a)];
        const int pos = idx[static_cast<std::size_t>(a)];
        const int last = spec.steps[static_cast<std::size_t>(a)];

        const double dpsi = axis_derivative(phi.q_values, node, pos, last, stride, n, i, ha);
        const double r1 = dpsi - h.partial(env, dims.p_index(a, i));
        out.r1[static_cast<std::size_t>((node * k + a) * n + i)] = r1;
        if (std::fabs(r1) > out.r1_max) out.r1_max = std::fabs(r1);

        div += axis_derivative(phi.p_values, node, pos, last, stride,
                               static_cast<std::int64_t>(k) * n, a * n + i, ha);
      }
      const double r2 = div + h.partial(env, dims.q_index(i));
      out.r2[static_cast<std::size_t>(node * n + i)] = r2;
      if (std::fabs(r2) > out.r2_max) out.r2_max = std::fabs(r2);
    }
  }
  return out;
}

}  // namespace kcoshj
