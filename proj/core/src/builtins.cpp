#include <cmath>
#include <stdexcept>

#include "kcoshj/errors.hpp"
#include "kcoshj/problem.hpp"

namespace kcoshj {

namespace {

const char* kScalarField = R"yaml(# Massless scalar field on 4d Minkowski space-time, metric diag(-1,1,1,1).
#
# H = 1/2 g_ab p^a p^b; the potential term F(q) - m^2 q^2 / 2 vanishes for
# F = m^2 q^2 / 2. The section family derived from the potentials below is
# gamma^a = 1/2 C_a q1^2, which solves the Hamilton-Jacobi equation exactly
# when C1^2 = C2^2 + C3^2 + C4^2. The reduced equations then have the
# closed-form solution
#
#     psi(x) = 2 / (C1 x1 - C2 x2 - C3 x3 - C4 x4 + C),   C = 2 / psi(0),
#
# whose pole hyperplane must stay outside the grid. This file uses
# C = (1, 1, 0, 0). The variant (sqrt(2), 1, 1, 0) is admissible too, but its
# pole touches the corner of this grid: use it with `check`, not `solve`.
name: scalar-field
dims: {k: 4, n: 1}
params: {C1: 1.0, C2: 1.0, C3: 0.0, C4: 0.0}
hamiltonian: "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2"
potentials:
  - "C1/6 * q1^3"
  - "C2/6 * q1^3"
  - "C3/6 * q1^3"
  - "C4/6 * q1^3"
grid:
  origin: [0.0, 0.0, 0.0, 0.0]
  spacing: [0.05, 0.05, 0.05, 0.05]
  steps: [10, 10, 10, 10]
initial_q: [2.0]
integrator: {substeps: 2}
)yaml";

const char* kScalarFieldBad = R"yaml(# Deliberate negative control: the scalar-field setup with C = (1, 0, 0, 0),
# which violates the admissibility constraint C1^2 = C2^2 + C3^2 + C4^2.
# The Hamilton-Jacobi residual is -1/2 C1^2 q1^3 (= -4 at q1 = 2), so `check`
# FAILs, and the lifted grid solution is not a solution of the field
# equations, so `solve` FAILs too.
name: scalar-field-bad
dims: {k: 4, n: 1}
params: {C1: 1.0, C2: 0.0, C3: 0.0, C4: 0.0}
hamiltonian: "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2"
potentials:
  - "C1/6 * q1^3"
  - "C2/6 * q1^3"
  - "C3/6 * q1^3"
  - "C4/6 * q1^3"
grid:
  origin: [0.0, 0.0, 0.0, 0.0]
  spacing: [0.05, 0.05, 0.05, 0.05]
  steps: [10, 10, 10, 10]
initial_q: [2.0]
integrator: {substeps: 2}
)yaml";

const char* kScalarFieldFromPhi = R"yaml(# Potentials built from a solved field equation: take a solution phi of the
# wave equation -- here the null plane wave phi = A cos(x1 + x2) -- and set
#
#     W^a(x, q) = (q1 - phi/2) g^ab dphi/dx^b        (sqrt(-g) = 1),
#
# so gamma^a = g^ab dphi/dx^b depends on x only. With F = m^2 q^2 / 2 the
# potential term of H vanishes and gamma solves the Hamilton-Jacobi
# equation; the integral section through q0 is psi(x) = phi(x) - phi(0) + q0.
# Compare scalar-field-from-phi-kg, where the F = m^2 q^2 reading of the
# same construction does not solve the Hamilton-Jacobi equation.
name: scalar-field-from-phi
dims: {k: 4, n: 1}
params: {A: 0.5}
hamiltonian: "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2"
potentials:
  - "(q1 - A*cos(x1 + x2)/2) * A*sin(x1 + x2)"
  - "-((q1 - A*cos(x1 + x2)/2) * A*sin(x1 + x2))"
  - "0"
  - "0"
grid:
  origin: [0.0, 0.0, 0.0, 0.0]
  spacing: [0.05, 0.05, 0.05, 0.05]
  steps: [10, 10, 10, 10]
initial_q: [0.0]
integrator: {substeps: 2}
)yaml";

const char* kScalarFieldFromPhiKg = R"yaml(# Klein-Gordon variant of scalar-field-from-phi: with F = m^2 q^2 the field
# equation becomes the Klein-Gordon equation and H gains the mass term
# -m^2 q1^2 / 2. phi is a massive plane wave, phi = A cos(w.x) with
# w = (sqrt(2), 1, 0, 0) and w1^2 - w2^2 - w3^2 - w4^2 = m^2 = 1.
#
# The graph (x, phi(x), gamma(x)) is still a genuine solution of the field
# equations, but gamma itself leaves the Hamilton-Jacobi residual
# m^2 (phi(x) - q1), which depends on q1. Both `check` and `solve` therefore
# FAIL by design; this file documents the discrepancy between the two F
# readings of the construction rather than resolving it.
name: scalar-field-from-phi-kg
dims: {k: 4, n: 1}
params: {A: 0.5, m: 1.0}
hamiltonian: "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2 - m^2*q1^2/2"
potentials:
  - "(q1 - A*cos(sqrt(2)*x1 + x2)/2) * sqrt(2)*A*sin(sqrt(2)*x1 + x2)"
  - "-((q1 - A*cos(sqrt(2)*x1 + x2)/2) * A*sin(sqrt(2)*x1 + x2))"
  - "0"
  - "0"
grid:
  origin: [0.0, 0.0, 0.0, 0.0]
  spacing: [0.05, 0.05, 0.05, 0.05]
  steps: [10, 10, 10, 10]
initial_q: [0.0]
integrator: {substeps: 2}
)yaml";

const char* kOscillatorK1 = R"yaml(# Time-dependent harmonic oscillator, k = 1: the classical-mechanics
# regression case. H = (p^2 + q^2)/2 and the complete-integral potential
#
#     W(t, q) = -E t + integral sqrt(2E - q^2) dq,   E = 1/2,
#             = (q1 sqrt(1 - q1^2) + asin(q1))/2 - x1/2,
#
# gives gamma = dW/dq = sqrt(1 - q1^2) and the solution psi(t) = sin(t)
# through q0 = 0. Valid while |q1| < 1: the grid stays inside t in [0, 1.4]
# and the q samples inside (-1, 1).
name: oscillator-k1
dims: {k: 1, n: 1}
hamiltonian: "(p1_1^2 + q1^2)/2"
potentials:
  - "(q1*sqrt(1 - q1^2) + asin(q1))/2 - x1/2"
grid:
  origin: [0.0]
  spacing: [0.01]
  steps: [140]
initial_q: [0.0]
q_samples: [[-0.9], [-0.5], [0.0], [0.5], [0.9]]
)yaml";

const char* kFreeK1 = R"yaml(# Free particle, k = 1: H = p^2/2 with the linear potential W = c q1. The
# section is the constant gamma = c, the classical Hamilton-Jacobi residual
# is the constant K = c^2/2 (allowed: it only may not depend on q), and
# psi(t) = q0 + c t exactly.
name: free-k1
dims: {k: 1, n: 1}
params: {c: 0.75}
hamiltonian: "p1_1^2/2"
potentials:
  - "c*q1"
grid:
  origin: [0.0]
  spacing: [0.1]
  steps: [10]
initial_q: [1.0]
)yaml";

std::vector<BuiltinProblem> build_registry() {
  std::vector<BuiltinProblem> registry;
  registry.push_back({"scalar-field",
                      "massless scalar field on Minkowski space-time, C = (1,1,0,0); PASS",
                      kScalarField, "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2", true});
  registry.push_back({"scalar-field-bad",
                      "negative control, inadmissible C = (1,0,0,0); check FAILs",
                      kScalarFieldBad, "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2", false});
  registry.push_back({"scalar-field-from-phi",
                      "potentials from a null plane wave, F = m^2 q^2 / 2; PASS",
                      kScalarFieldFromPhi, "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2", true});
  registry.push_back({"scalar-field-from-phi-kg",
                      "Klein-Gordon reading (F = m^2 q^2); check FAILs by design",
                      kScalarFieldFromPhiKg,
                      "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2 - m^2*q1^2/2", false});
  registry.push_back({"oscillator-k1", "harmonic oscillator, k = 1; psi = sin(t); PASS",
                      kOscillatorK1, "(p1_1^2 + q1^2)/2", true});
  registry.push_back({"free-k1", "free particle, k = 1; psi = q0 + c t; PASS", kFreeK1,
                      "p1_1^2/2", true});

  // Registry self-checks: every file must load, and the admissible
  // scalar-field entries must satisfy C1^2 = C2^2 + C3^2 + C4^2.
  for (const auto& entry : registry) {
    ProblemFile p = load_problem_text(entry.file_text, entry.name);
    if (entry.expected_check_pass && p.params.contains("C1")) {
      const double c1 = p.params.get("C1");
      const double rhs = p.params.get("C2") * p.params.get("C2") +
                         p.params.get("C3") * p.params.get("C3") +
                         p.params.get("C4") * p.params.get("C4");
      if (std::fabs(c1 * c1 - rhs) > 1e-12) {
        throw std::logic_error("builtin '" + entry.name +
                               "' violates C1^2 = C2^2 + C3^2 + C4^2");
      }
    }
  }
  return registry;
}

}  // namespace

const std::vector<BuiltinProblem>& builtin_problems() {
  static const std::vector<BuiltinProblem> registry = build_registry();
  return registry;
}

const BuiltinProblem* find_builtin(const std::string& name) {
  for (const auto& entry : builtin_problems()) {
    if (entry.name == name) return &entry;
  }
  return nullptr;
}

}  // namespace kcoshj
