#pragma once

#include <vector>

#include "kcoshj/hamiltonian.hpp"
#include "kcoshj/kvector.hpp"
#include "kcoshj/point.hpp"

namespace kcoshj {

/// A section gamma of the momentum bundle over R^k x Q: the k x n array of
/// functions gamma^a_i(x, q) prescribing momenta over base points. The
/// components are base-point fields and may not reference momenta (enforced
/// by their arity). Component layout: a*n+i, space-time index outermost.
class HJSection {
 public:
  HJSection(Dimensions dims, std::vector<FieldPtr> components);

  const Dimensions& dims() const { return dims_; }
  const ScalarField& gamma(int a, int i) const;
  const FieldPtr& gamma_ptr(int a, int i) const;
  const std::vector<FieldPtr>& components() const { return components_; }

  /// Momentum values gamma^a_i at a base point, in the canonical layout.
  std::vector<double> momenta_at(const BasePoint& pt) const;

  /// The phase point (x, q, gamma(x, q)) over `pt`.
  PhasePoint lift(const BasePoint& pt) const;

 private:
  Dimensions dims_;
  std::vector<FieldPtr> components_;
};

/// k potential functions W^a(x, q) with gamma^a_i = dW^a/dq^i.
class PotentialFamily {
 public:
  PotentialFamily(Dimensions dims, std::vector<FieldPtr> potentials);

  const Dimensions& dims() const { return dims_; }
  const ScalarField& w(int a) const;
  const FieldPtr& w_ptr(int a) const;

 private:
  Dimensions dims_;
  std::vector<FieldPtr> potentials_;
};

/// The reduction of a Hamiltonian k-vector field by a section: k vector
/// fields on R^k x Q of the form Z^gamma_a = d/dx^a + f^i_a d/dq^i. Only the
/// q-coefficients are stored; the base part is the identity.
class ReducedKVectorField {
 public:
  ReducedKVectorField(Dimensions dims, std::vector<FieldPtr> coefficients);

  const Dimensions& dims() const { return dims_; }
  const ScalarField& f(int a, int i) const;
  const FieldPtr& f_ptr(int a, int i) const;

 private:
  Dimensions dims_;
  std::vector<FieldPtr> coefficients_;  // k*n
};

/// Antisymmetric closedness defect of a section: entry (a,i,j) is
/// d(gamma^a_i)/dq^j - d(gamma^a_j)/dq^i at `pt`, flattened (a*n+i)*n+j.
/// A section qualifies for the Hamilton-Jacobi theorems when this vanishes.
std::vector<double> closedness_residual(const HJSection& gamma, const BasePoint& pt);

/// gamma^a_i = dW^a/dq^i, as exact derivative fields. Always closed.
HJSection section_from_potentials(const PotentialFamily& w);

/// The n components of the Hamilton-Jacobi residual at `pt`:
///   r_i = dH/dq^i o gamma
///       + (dH/dp^a_j o gamma) * d(gamma^a_j)/dq^i
///       + sum_a d(gamma^a_i)/dx^a.
/// gamma satisfies the geometric Hamilton-Jacobi equation at pt iff r = 0.
std::vector<double> hj_residual(const HJSection& gamma, const HamiltonianSystem& sys,
                                const BasePoint& pt);

/// The classical field-theoretic Hamilton-Jacobi expression
///   sum_a dW^a/dx^a + H(x, q, dW/dq)
/// at `pt`. For a solution family this equals some K(x), independent of q.
double classical_hj_residual(const PotentialFamily& w, const HamiltonianSystem& sys,
                             const BasePoint& pt);

/// Max - min of classical_hj_residual over the q-samples at fixed x. Zero
/// spread certifies that the residual is a function K(x) alone.
double q_independence_spread(const PotentialFamily& w, const HamiltonianSystem& sys,
                             std::span<const double> x,
                             const std::vector<std::vector<double>>& q_samples);

/// Z^gamma: f^i_a(x, q) = dH/dp^a_i evaluated at (x, q, gamma(x, q)).
ReducedKVectorField reduce(const HamiltonianSystem& sys, const HJSection& gamma);

/// The n components of the momentum defect of X along gamma:
///   r_j = sum_a [ (X_a)^a_j o gamma - d(gamma^a_j)/dx^a
///                 - ((X_a)^i o gamma) * d(gamma^a_j)/dq^i ].
/// Vanishes iff X|_{Im gamma} - T^1_k gamma(X^gamma) lies in the kernel of
/// the structure morphisms; for solutions X of the Hamiltonian equations and
/// closed gamma this equals -hj_residual componentwise.
std::vector<double> kernel_difference_residual(const KVectorFieldLocal& x_field,
                                               const HJSection& gamma, const BasePoint& pt);

/// Frobenius-type compatibility defect of the overdetermined system
/// dpsi^i/dx^a = f^i_a(x, psi). Entry (a,b,i), flattened (a*k+b)*n+i:
///   [df^i_a/dx^b + f^j_b df^i_a/dq^j] - [df^i_b/dx^a + f^j_a df^i_b/dq^j].
/// Must vanish on a region for integral sections through every point.
std::vector<double> compatibility_residual(const ReducedKVectorField& z, const BasePoint& pt);

}  // namespace kcoshj
