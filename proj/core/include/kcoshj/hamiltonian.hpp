#pragma once

#include <utility>

#include "kcoshj/dimensions.hpp"
#include "kcoshj/errors.hpp"
#include "kcoshj/fields.hpp"

namespace kcoshj {

/// A Hamiltonian function H(x^a, q^i, p^a_i) on R^k x (T^1_k)*Q together
/// with its dimensions.
class HamiltonianSystem {
 public:
  HamiltonianSystem(Dimensions dims, FieldPtr hamiltonian)
      : dims_(dims), hamiltonian_(std::move(hamiltonian)) {
    if (!hamiltonian_) throw ValidationError("null Hamiltonian");
    if (hamiltonian_->arity() != dims_.phase_dim()) {
      throw ValidationError("Hamiltonian arity does not match the phase-space dimension");
    }
  }

  const Dimensions& dims() const { return dims_; }
  const ScalarField& hamiltonian() const { return *hamiltonian_; }
  const FieldPtr& hamiltonian_ptr() const { return hamiltonian_; }

 private:
  Dimensions dims_;
  FieldPtr hamiltonian_;
};

}  // namespace kcoshj
