#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kcoshj/grid.hpp"
#include "kcoshj/hj.hpp"

namespace kcoshj {

struct IntegrateOptions {
  /// RK4 substeps per grid cell.
  int substeps = 1;
  /// Abort integration when any |psi^i| exceeds this bound (pole guard).
  double blowup_bound = 1e12;
};

/// Default residual tolerances. The path-independence and HDW bounds are
/// scale-aware. Path independence is compared against
/// path_independence * (1 + max|psi|). The HDW residual of a lifted
/// solution is pure stencil truncation, so it is compared against
/// hdw_per_h2 * h^2 * scale with h the coarsest spacing and scale
/// 1 + max|values| + (estimated max |d^3/dx^3| of the sampled data)/3,
/// the boundary-stencil truncation envelope.
struct Tolerances {
  double hj = 1e-10;
  double closedness = 1e-10;
  double compatibility = 1e-10;
  double path_independence = 1e-8;
  double hdw_per_h2 = 10.0;
  double q_independence = 1e-10;
};

/// Fills a GridSolution by marching the reduced equations dpsi^i/dx^a =
/// f^i_a(x, psi) with classic RK4, axis by axis in `axis_order` (default
/// 1..k): the first axis is integrated from the origin, each later axis from
/// every node of the already-filled sublattice. psi(origin) = q0.
///
/// Throws IntegrationError (with the failing node) when the blow-up guard
/// trips or a field evaluation fails.
GridSolution integrate_section(const ReducedKVectorField& z, std::span<const double> q0,
                               const GridSpec& spec, std::span<const int> axis_order = {},
                               const IntegrateOptions& options = {});

/// Integrates with axis order 1..k and k..1 and returns the max node-wise
/// deviation between the two solutions: a numerical integrability witness
/// for the overdetermined system.
double path_independence(const ReducedKVectorField& z, std::span<const double> q0,
                         const GridSpec& spec, const IntegrateOptions& options = {});

/// Composes a solution of the reduced equations with the section:
/// per node, q = psi(x) and p^a_i = gamma^a_i(x, psi(x)). The (x, q) part
/// equals the input solution exactly.
PhaseMapGrid lift(const HJSection& gamma, const GridSolution& psi);

struct PipelineCheck {
  double max_abs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// End-to-end verification record: section-level residuals sampled along the
/// computed solution, the integrability witness, and the HDW residuals of
/// the lifted solution.
struct PipelineReport {
  PipelineCheck hj;
  PipelineCheck closedness;
  PipelineCheck compatibility;
  PipelineCheck path;
  PipelineCheck hdw;
  double hdw_r1_max = 0.0;
  double hdw_r2_max = 0.0;
  /// 1 + max|values| + third-derivative envelope of the lifted solution;
  /// scales the path and HDW tolerances.
  double solution_scale = 1.0;
  bool pass = false;

  GridSolution solution;
  PhaseMapGrid lifted;
  HdwResidualGrid residuals;
};

/// Checks the Hamilton-Jacobi residual, closedness and compatibility at
/// every node (x, psi(x)), the path-independence deviation, and the HDW
/// residuals of lift(gamma, psi). PASS means every check is within its
/// (scale-aware) tolerance.
PipelineReport verify_pipeline(const HamiltonianSystem& sys, const HJSection& gamma,
                               std::span<const double> q0, const GridSpec& spec,
                               const Tolerances& tol = {}, const IntegrateOptions& options = {});

}  // namespace kcoshj
