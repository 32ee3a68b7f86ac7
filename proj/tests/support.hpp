#pragma once

// Shared fixtures and generators for the test suites: the worked scalar-field
// setup, random polynomial Hamiltonians/potentials, and random smooth
// expression trees for derivative checks.

#include <random>
#include <string>
#include <vector>

#include "kcoshj/hj.hpp"
#include "kcoshj/integrate.hpp"

namespace testsupport {

using namespace kcoshj;

inline const char* minkowski_h_text() {
  return "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2";
}

struct ScalarFieldSetup {
  Dimensions dims{4, 1};
  ParamSet params;
  HamiltonianSystem sys;
  PotentialFamily potentials;
  HJSection gamma;
};

/// The worked massless scalar field on Minkowski space-time with section
/// family gamma^a = 1/2 C_a q^2 (potentials W^a = C_a q^3 / 6).
inline ScalarFieldSetup make_scalar_field(double c1, double c2, double c3, double c4) {
  Dimensions dims(4, 1);
  ParamSet params;
  params.set("C1", c1);
  params.set("C2", c2);
  params.set("C3", c3);
  params.set("C4", c4);
  const std::vector<std::string> names = params.names();

  HamiltonianSystem sys(dims,
                        make_expr_field(Expr::parse(minkowski_h_text(), dims, names),
                                        dims.phase_dim(), params));
  std::vector<FieldPtr> w;
  for (int a = 1; a <= 4; ++a) {
    w.push_back(make_expr_field(
        Expr::parse("C" + std::to_string(a) + "/6*q1^3", dims, names), dims.base_dim(), params));
  }
  PotentialFamily potentials(dims, std::move(w));
  HJSection gamma = section_from_potentials(potentials);
  return {dims, params, std::move(sys), std::move(potentials), std::move(gamma)};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random polynomial of total degree <= max_degree in the given coordinate
/// names, as expression text. Coefficients are short decimals so the text
/// round-trips exactly.
inline std::string random_polynomial(std::mt19937_64& rng, const std::vector<std::string>& names,
                                     int max_degree = 3, int max_terms = 5) {
  const int terms = uniform_int(rng, 1, max_terms);
  std::string text;
  for (int t = 0; t < terms; ++t) {
    const double coeff = uniform_int(rng, -200, 200) / 100.0;
    std::string term = std::to_string(coeff);
    const int degree = uniform_int(rng, 0, max_degree);
    for (int d = 0; d < degree; ++d) {
      term += "*" + names[static_cast<std::size_t>(
                       uniform_int(rng, 0, static_cast<int>(names.size()) - 1))];
    }
    if (t == 0) {
      text = term;
    } else {
      text += (uniform_int(rng, 0, 1) != 0 ? " + " : " - ") + term;
    }
  }
  return text;
}

/// Random smooth expression tree over the coordinates, safe by construction
/// (denominators and log/sqrt/asin arguments bounded away from the singular
/// set). Used for derivative-vs-finite-difference checks.
inline std::string random_smooth_expr(std::mt19937_64& rng, const std::vector<std::string>& names,
                                      int depth = 3) {
  if (depth == 0 || uniform_int(rng, 0, 4) == 0) {
    if (uniform_int(rng, 0, 3) == 0) {
      return std::to_string(uniform_int(rng, -150, 150) / 100.0);
    }
    return names[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<int>(names.size()) - 1))];
  }
  const std::string a = random_smooth_expr(rng, names, depth - 1);
  const std::string b = random_smooth_expr(rng, names, depth - 1);
  switch (uniform_int(rng, 0, 9)) {
    case 0: return "(" + a + " + " + b + ")";
    case 1: return "(" + a + " - " + b + ")";
    case 2: return "(" + a + ")*(" + b + ")";
    case 3: return "(" + a + ")/(1.5 + (" + b + ")^2)";
    case 4: return "sin(" + a + ")";
    case 5: return "cos(" + a + ")";
    case 6: return "exp((" + a + ")/8)";
    case 7: return "log(1.5 + (" + a + ")^2)";
    case 8: return "sqrt(1.5 + (" + a + ")^2)";
    default: return "asin((" + a + ")/(1.5 + (" + a + ")^2))";
  }
}

/// Random dimensions with k <= max_k, n <= max_n.
inline Dimensions random_dims(std::mt19937_64& rng, int max_k = 3, int max_n = 2) {
  return Dimensions(uniform_int(rng, 1, max_k), uniform_int(rng, 1, max_n));
}

/// Random polynomial Hamiltonian system over all phase coordinates.
inline HamiltonianSystem random_hamiltonian(std::mt19937_64& rng, const Dimensions& dims) {
  const std::vector<std::string> names = coordinate_names(dims);
  Expr e = Expr::parse(random_polynomial(rng, names), dims);
  return HamiltonianSystem(dims, make_expr_field(std::move(e), dims.phase_dim(), ParamSet{}));
}

/// Random polynomial potential family over (x, q); its section is closed by
/// construction.
inline PotentialFamily random_potentials(std::mt19937_64& rng, const Dimensions& dims) {
  std::vector<std::string> base_names;
  for (int a = 0; a < dims.k(); ++a) base_names.push_back("x" + std::to_string(a + 1));
  for (int i = 0; i < dims.n(); ++i) base_names.push_back("q" + std::to_string(i + 1));
  std::vector<FieldPtr> w;
  for (int a = 0; a < dims.k(); ++a) {
    Expr e = Expr::parse(random_polynomial(rng, base_names), dims);
    w.push_back(make_expr_field(std::move(e), dims.base_dim(), ParamSet{}));
  }
  return PotentialFamily(dims, std::move(w));
}

/// Random phase point with coordinates in [-1, 1].
inline PhasePoint random_phase_point(std::mt19937_64& rng, const Dimensions& dims) {
  std::vector<double> flat(static_cast<std::size_t>(dims.phase_dim()));
  for (double& v : flat) v = uniform(rng, -1.0, 1.0);
  return PhasePoint::from_flat(dims, flat);
}

inline BasePoint random_base_point(std::mt19937_64& rng, const Dimensions& dims) {
  std::vector<double> flat(static_cast<std::size_t>(dims.base_dim()));
  for (double& v : flat) v = uniform(rng, -1.0, 1.0);
  return BasePoint::from_flat(dims, flat);
}

/// A random element of ker omega-sharp intersect ker eta-sharp: zero base
/// and field parts, random polynomial momentum components with the diagonal
/// trace balanced to zero in the last slot.
inline KVectorFieldLocal random_kernel_element(std::mt19937_64& rng, const Dimensions& dims) {
  const int k = dims.k();
  const int n = dims.n();
  const int arity = dims.phase_dim();
  const std::vector<std::string> names = coordinate_names(dims);

  std::vector<FieldPtr> base(static_cast<std::size_t>(k * k));
  for (auto& f : base) f = make_constant_field(arity, 0.0);
  std::vector<FieldPtr> field(static_cast<std::size_t>(k * n));
  for (auto& f : field) f = make_constant_field(arity, 0.0);

  std::vector<FieldPtr> momentum(static_cast<std::size_t>(k * k * n));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      for (int i = 0; i < n; ++i) {
        if (a == k - 1 && b == k - 1) continue;  // fixed up below
        Expr e = Expr::parse(random_polynomial(rng, names, 2, 3), dims);
        momentum[static_cast<std::size_t>((a * k + b) * n + i)] =
            make_expr_field(std::move(e), arity, ParamSet{});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, FieldPtr>> balance;
    for (int a = 0; a + 1 < k; ++a) {
      balance.emplace_back(-1.0, momentum[static_cast<std::size_t>((a * k + a) * n + i)]);
    }
    momentum[static_cast<std::size_t>(((k - 1) * k + (k - 1)) * n + i)] =
        balance.empty() ? make_constant_field(arity, 0.0)
                        : make_linear_combination(std::move(balance));
  }
  return KVectorFieldLocal(dims, std::move(base), std::move(field), std::move(momentum));
}

/// Componentwise sum of two k-vector fields.
inline KVectorFieldLocal add_kvector(const KVectorFieldLocal& a, const KVectorFieldLocal& b) {
  const Dimensions& dims = a.dims();
  const int k = dims.k();
  const int n = dims.n();
  std::vector<FieldPtr> base;
  std::vector<FieldPtr> field;
  std::vector<FieldPtr> momentum;
  for (int ai = 0; ai < k; ++ai) {
    for (int bi = 0; bi < k; ++bi) {
      base.push_back(
          make_linear_combination({{1.0, a.base_ptr(ai, bi)}, {1.0, b.base_ptr(ai, bi)}}));
    }
  }
  for (int ai = 0; ai < k; ++ai) {
    for (int i = 0; i < n; ++i) {
      field.push_back(
          make_linear_combination({{1.0, a.field_ptr(ai, i)}, {1.0, b.field_ptr(ai, i)}}));
    }
  }
  for (int ai = 0; ai < k; ++ai) {
    for (int bi = 0; bi < k; ++bi) {
      for (int i = 0; i < n; ++i) {
        momentum.push_back(make_linear_combination(
            {{1.0, a.momentum_ptr(ai, bi, i)}, {1.0, b.momentum_ptr(ai, bi, i)}}));
      }
    }
  }
  return KVectorFieldLocal(dims, std::move(base), std::move(field), std::move(momentum));
}

}  // namespace testsupport
