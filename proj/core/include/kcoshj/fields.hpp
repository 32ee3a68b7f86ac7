#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "kcoshj/dimensions.hpp"
#include "kcoshj/expr.hpp"

namespace kcoshj {

/// An evaluable real function of a flat coordinate environment, with exact
/// first (and where needed second) partial derivatives. Evaluation is pure
/// and thread-safe; instances are immutable.
///
/// `arity` is the expected environment length: base_dim() for functions of
/// (x, q) only, phase_dim() for functions on phase space. partial(env, c)
/// is exactly zero for any coordinate the field does not reference.
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  virtual int arity() const = 0;
  virtual double value(std::span<const double> env) const = 0;
  virtual double partial(std::span<const double> env, int coord) const = 0;

  /// Exact mixed second partial. Implemented where the library needs it
  /// (expression-backed fields and their derivative fields); throws
  /// EvalError otherwise.
  virtual double partial2(std::span<const double> env, int c1, int c2) const;

  virtual bool depends_on(int coord) const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Central-difference derivative oracle: (f(env + h e_c) - f(env - h e_c)) / 2h.
/// Independent of the exact-derivative path; used by tests to police it.
double fd_partial(const ScalarField& f, std::span<const double> env, int coord,
                  double step = 1e-5);

FieldPtr make_constant_field(int arity, double value);

/// Expression-backed field with the parameter values bound once.
FieldPtr make_expr_field(Expr expr, int arity, const ParamSet& params);

/// The exact derivative of `f` as a field of its own: value is
/// f.partial(coord), first partials are f.partial2(coord, .).
FieldPtr make_partial_field(FieldPtr f, int coord);

/// scale * f.
FieldPtr make_scaled_field(double scale, FieldPtr f);

/// Sum of scaled fields (all of equal arity).
FieldPtr make_linear_combination(std::vector<std::pair<double, FieldPtr>> terms);

/// Restriction of a phase-space field to the image of a section: the
/// environment (x, q) is extended with momenta p^a_i = momenta[a*n+i](x, q)
/// before evaluating `phase_field`. First partials apply the chain rule
/// through the section components. Arity is base_dim().
FieldPtr make_pullback_field(const Dimensions& dims, FieldPtr phase_field,
                             std::vector<FieldPtr> momenta);

}  // namespace kcoshj
