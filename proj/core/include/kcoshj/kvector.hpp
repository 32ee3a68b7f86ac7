#pragma once

#include <vector>

#include "kcoshj/grid.hpp"
#include "kcoshj/hamiltonian.hpp"
#include "kcoshj/point.hpp"

namespace kcoshj {

/// A k-vector field on phase space in Darboux components:
///   X_a = (X_a)_b d/dx^b + (X_a)^i d/dq^i + (X_a)^b_i d/dp^b_i
/// stored as ScalarFields over phase points. Index layout: base a*k+b,
/// field a*n+i, momentum (a*k+b)*n+i.
class KVectorFieldLocal {
 public:
  KVectorFieldLocal(Dimensions dims, std::vector<FieldPtr> base, std::vector<FieldPtr> field,
                    std::vector<FieldPtr> momentum);

  const Dimensions& dims() const { return dims_; }
  const ScalarField& base(int a, int b) const;
  const ScalarField& field(int a, int i) const;
  const ScalarField& momentum(int a, int b, int i) const;
  const FieldPtr& base_ptr(int a, int b) const;
  const FieldPtr& field_ptr(int a, int i) const;
  const FieldPtr& momentum_ptr(int a, int b, int i) const;

 private:
  Dimensions dims_;
  std::vector<FieldPtr> base_;      // k*k
  std::vector<FieldPtr> field_;     // k*n
  std::vector<FieldPtr> momentum_;  // k*k*n
};

/// The canonical solution of the Hamiltonian equations in a Darboux chart:
///   (X_a)_b = delta_ab,  (X_a)^i = dH/dp^a_i,
///   (X_1)^1_i = -dH/dq^i,  all other momentum components zero.
/// Satisfies is_solution identically by construction.
KVectorFieldLocal canonical_solution(const HamiltonianSystem& sys);

/// Residuals of the local Hamiltonian equations at one point: how far
/// (X_a)_b is from delta_ab, (X_a)^i from dH/dp^a_i, and the trace
/// sum_a (X_a)^a_i from -dH/dq^i.
struct SolutionResiduals {
  double base_max = 0.0;
  double field_max = 0.0;
  double momentum_trace_max = 0.0;
  bool pass = false;

  double max() const;
};

SolutionResiduals is_solution(const KVectorFieldLocal& candidate, const HamiltonianSystem& sys,
                              const PhasePoint& pt, double tol = 1e-10);

/// True when `candidate` lies in ker omega-sharp intersect ker eta-sharp at
/// `pt`: base and field components vanish and the momentum trace
/// sum_a (Y_a)^a_i vanishes, all within tol.
bool kernel_check(const KVectorFieldLocal& candidate, const PhasePoint& pt, double tol = 1e-10);

/// Componentwise difference a - b (for comparing two solutions).
KVectorFieldLocal difference(const KVectorFieldLocal& a, const KVectorFieldLocal& b);

/// Hamilton-De Donder-Weyl residuals of a sampled phase map, by second-order
/// finite differences (central in the interior, one-sided on the boundary):
///   r1[a*n+i] = D_a psi^i - dH/dp^a_i o phi
///   r2[i]     = sum_a D_a psi^a_i + dH/dq^i o phi
struct HdwResidualGrid {
  Dimensions dims;
  GridSpec spec;
  std::vector<double> r1;  // node-major, k*n per node
  std::vector<double> r2;  // node-major, n per node
  double r1_max = 0.0;
  double r2_max = 0.0;

  double max() const { return r1_max > r2_max ? r1_max : r2_max; }
};

HdwResidualGrid hdw_residual(const PhaseMapGrid& phi, const HamiltonianSystem& sys);

}  // namespace kcoshj
