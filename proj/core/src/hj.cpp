#include "kcoshj/hj.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kcoshj/errors.hpp"

namespace kcoshj {

namespace {

void check_base_fields(const std::vector<FieldPtr>& fields, std::size_t expected, int base_dim,
                       const char* what) {
  if (fields.size() != expected) {
    throw ValidationError(std::string(what) + ": got " + std::to_string(fields.size()) +
                          " components, expected " + std::to_string(expected));
  }
  for (const auto& f : fields) {
    if (!f) throw ValidationError(std::string(what) + ": null component");
    if (f->arity() != base_dim) {
      throw ValidationError(std::string(what) +
                            ": components must be functions of (x, q) only");
    }
  }
}

}  // namespace

HJSection::HJSection(Dimensions dims, std::vector<FieldPtr> components)
    : dims_(dims), components_(std::move(components)) {
  check_base_fields(components_, static_cast<std::size_t>(dims_.k() * dims_.n()),
                    dims_.base_dim(), "HJSection");
}

const ScalarField& HJSection::gamma(int a, int i) const {
  return *components_[static_cast<std::size_t>(a * dims_.n() + i)];
}
const FieldPtr& HJSection::gamma_ptr(int a, int i) const {
  return components_[static_cast<std::size_t>(a * dims_.n() + i)];
}

std::vector<double> HJSection::momenta_at(const BasePoint& pt) const {
  std::vector<double> p(components_.size());
  for (std::size_t m = 0; m < components_.size(); ++m) p[m] = components_[m]->value(pt.flat());
  return p;
}

PhasePoint HJSection::lift(const BasePoint& pt) const {
  std::vector<double> flat(static_cast<std::size_t>(dims_.phase_dim()));
  const auto base = pt.flat();
  std::copy(base.begin(), base.end(), flat.begin());
  for (std::size_t m = 0; m < components_.size(); ++m) {
    flat[static_cast<std::size_t>(dims_.base_dim()) + m] = components_[m]->value(base);
  }
  return PhasePoint::from_flat(dims_, flat);
}

PotentialFamily::PotentialFamily(Dimensions dims, std::vector<FieldPtr> potentials)
    : dims_(dims), potentials_(std::move(potentials)) {
  check_base_fields(potentials_, static_cast<std::size_t>(dims_.k()), dims_.base_dim(),
                    "PotentialFamily");
}

const ScalarField& PotentialFamily::w(int a) const {
  return *potentials_[static_cast<std::size_t>(a)];
}
const FieldPtr& PotentialFamily::w_ptr(int a) const {
  return potentials_[static_cast<std::size_t>(a)];
}

ReducedKVectorField::ReducedKVectorField(Dimensions dims, std::vector<FieldPtr> coefficients)
    : dims_(dims), coefficients_(std::move(coefficients)) {
  check_base_fields(coefficients_, static_cast<std::size_t>(dims_.k() * dims_.n()),
                    dims_.base_dim(), "ReducedKVectorField");
}

const ScalarField& ReducedKVectorField::f(int a, int i) const {
  return *coefficients_[static_cast<std::size_t>(a * dims_.n() + i)];
}
const FieldPtr& ReducedKVectorField::f_ptr(int a, int i) const {
  return coefficients_[static_cast<std::size_t>(a * dims_.n() + i)];
}

std::vector<double> closedness_residual(const HJSection& gamma, const BasePoint& pt) {
  const Dimensions& dims = gamma.dims();
  if (!(pt.dims() == dims)) throw ValidationError("closedness_residual: dimension mismatch");
  const int k = dims.k();
  const int n = dims.n();
  const auto env = pt.flat();
  std::vector<double> out(static_cast<std::size_t>(k * n * n), 0.0);
  for (int a = 0; a < k; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        const double d =
            gamma.gamma(a, i).partial(env, dims.q_index(j)) -
            gamma.gamma(a, j).partial(env, dims.q_index(i));
        out[static_cast<std::size_t>((a * n + i) * n + j)] = d;
        out[static_cast<std::size_t>((a * n + j) * n + i)] = -d;
      }
    }
  }
  return out;
}

HJSection section_from_potentials(const PotentialFamily& w) {
  const Dimensions& dims = w.dims();
  std::vector<FieldPtr> components;
  components.reserve(static_cast<std::size_t>(dims.k() * dims.n()));
  for (int a = 0; a < dims.k(); ++a) {
    for (int i = 0; i < dims.n(); ++i) {
      components.push_back(make_partial_field(w.w_ptr(a), dims.q_index(i)));
    }
  }
  return HJSection(dims, std::move(components));
}

std::vector<double> hj_residual(const HJSection& gamma, const HamiltonianSystem& sys,
                                const BasePoint& pt) {
  const Dimensions& dims = sys.dims();
  if (!(gamma.dims() == dims) || !(pt.dims() == dims)) {
    throw ValidationError("hj_residual: dimension mismatch");
  }
  const int k = dims.k();
  const int n = dims.n();
  const auto base_env = pt.flat();
  const PhasePoint lifted = gamma.lift(pt);
  const auto env = lifted.flat();
  const ScalarField& h = sys.hamiltonian();

  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double r = h.partial(env, dims.q_index(i));
    for (int a = 0; a < k; ++a) {
      for (int j = 0; j < n; ++j) {
        r += h.partial(env, dims.p_index(a, j)) *
             gamma.gamma(a, j).partial(base_env, dims.q_index(i));
      }
      r += gamma.gamma(a, i).partial(base_env, dims.x_index(a));
    }
    out[static_cast<std::size_t>(i)] = r;
  }
  return out;
}

double classical_hj_residual(const PotentialFamily& w, const HamiltonianSystem& sys,
                             const BasePoint& pt) {
  const Dimensions& dims = sys.dims();
  if (!(w.dims() == dims) || !(pt.dims() == dims)) {
    throw ValidationError("classical_hj_residual: dimension mismatch");
  }
  const auto base_env = pt.flat();

  std::vector<double> env(static_cast<std::size_t>(dims.phase_dim()));
  std::copy(base_env.begin(), base_env.end(), env.begin());
  double divergence = 0.0;
  for (int a = 0; a < dims.k(); ++a) {
    divergence += w.w(a).partial(base_env, dims.x_index(a));
    for (int i = 0; i < dims.n(); ++i) {
      env[static_cast<std::size_t>(dims.p_index(a, i))] =
          w.w(a).partial(base_env, dims.q_index(i));
    }
  }
  return divergence + sys.hamiltonian().value(env);
}

double q_independence_spread(const PotentialFamily& w, const HamiltonianSystem& sys,
                             std::span<const double> x,
                             const std::vector<std::vector<double>>& q_samples) {
  if (q_samples.size() < 2) {
    throw ValidationError("q_independence_spread needs at least two q samples");
  }
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& q : q_samples) {
    const BasePoint pt(sys.dims(), x, q);
    const double r = classical_hj_residual(w, sys, pt);
    if (first) {
      lo = hi = r;
      first = false;
    } else {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  return hi - lo;
}

ReducedKVectorField reduce(const HamiltonianSystem& sys, const HJSection& gamma) {
  const Dimensions& dims = sys.dims();
  if (!(gamma.dims() == dims)) throw ValidationError("reduce: dimension mismatch");
  std::vector<FieldPtr> coefficients;
  coefficients.reserve(static_cast<std::size_t>(dims.k() * dims.n()));
  for (int a = 0; a < dims.k(); ++a) {
    for (int i = 0; i < dims.n(); ++i) {
      coefficients.push_back(make_pullback_field(
          dims, make_partial_field(sys.hamiltonian_ptr(), dims.p_index(a, i)),
          gamma.components()));
    }
  }
  return ReducedKVectorField(dims, std::move(coefficients));
}

std::vector<double> kernel_difference_residual(const KVectorFieldLocal& x_field,
                                               const HJSection& gamma, const BasePoint& pt) {
  const Dimensions& dims = gamma.dims();
  if (!(x_field.dims() == dims) || !(pt.dims() == dims)) {
    throw ValidationError("kernel_difference_residual: dimension mismatch");
  }
  const int k = dims.k();
  const int n = dims.n();
  const auto base_env = pt.flat();
  const PhasePoint lifted = gamma.lift(pt);
  const auto env = lifted.flat();

  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double r = 0.0;
    for (int a = 0; a < k; ++a) {
      r += x_field.momentum(a, a, j).value(env);
      r -= gamma.gamma(a, j).partial(base_env, dims.x_index(a));
      for (int i = 0; i < n; ++i) {
        r -= x_field.field(a, i).value(env) *
             gamma.gamma(a, j).partial(base_env, dims.q_index(i));
      }
    }
    out[static_cast<std::size_t>(j)] = r;
  }
  return out;
}

std::vector<double> compatibility_residual(const ReducedKVectorField& z, const BasePoint& pt) {
  const Dimensions& dims = z.dims();
  if (!(pt.dims() == dims)) throw ValidationError("compatibility_residual: dimension mismatch");
  const int k = dims.k();
  const int n = dims.n();
  const auto env = pt.flat();

  // Cache values and first partials of all f^i_a at pt.
  std::vector<double> value(static_cast<std::size_t>(k * n));
  std::vector<double> dx(static_cast<std::size_t>(k * n * k));
  std::vector<double> dq(static_cast<std::size_t>(k * n * n));
  for (int a = 0; a < k; ++a) {
    for (int i = 0; i < n; ++i) {
      const ScalarField& f = z.f(a, i);
      value[static_cast<std::size_t>(a * n + i)] = f.value(env);
      for (int b = 0; b < k; ++b) {
        dx[static_cast<std::size_t>((a * n + i) * k + b)] = f.partial(env, dims.x_index(b));
      }
      for (int j = 0; j < n; ++j) {
        dq[static_cast<std::size_t>((a * n + i) * n + j)] = f.partial(env, dims.q_index(j));
      }
    }
  }

  const auto total_derivative = [&](int a, int i, int b) {
    // d/dx^b of f^i_a along the graph: partial in x^b plus transport by f_b.
    double d = dx[static_cast<std::size_t>((a * n + i) * k + b)];
    for (int j = 0; j < n; ++j) {
      d += value[static_cast<std::size_t>(b * n + j)] *
           dq[static_cast<std::size_t>((a * n + i) * n + j)];
    }
    return d;
  };

  // Entry (a,b,i) is D_a f_b - D_b f_a with D_a the total derivative along
  // Z_a; mixed partials of any common solution psi force it to zero.
  std::vector<double> out(static_cast<std::size_t>(k * k * n), 0.0);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>((a * k + b) * n + i)] =
            total_derivative(b, i, a) - total_derivative(a, i, b);
      }
    }
  }
  return out;
}

}  // namespace kcoshj
