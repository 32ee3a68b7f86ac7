#include "kcoshj/fields.hpp"

#include <algorithm>
#include <string>

#include "kcoshj/errors.hpp"

namespace kcoshj {

double ScalarField::partial2(std::span<const double> /*env*/, int /*c1*/, int /*c2*/) const {
  throw EvalError("second derivative not supported by this field");
}

double fd_partial(const ScalarField& f, std::span<const double> env, int coord, double step) {
  if (step <= 0.0) throw ValidationError("fd_partial requires step > 0");
  if (coord < 0 || coord >= static_cast<int>(env.size())) {
    throw std::out_of_range("fd_partial coordinate index out of range");
  }
  std::vector<double> shifted(env.begin(), env.end());
  shifted[static_cast<std::size_t>(coord)] = env[coord] + step;
  const double forward = f.value(shifted);
  shifted[static_cast<std::size_t>(coord)] = env[coord] - step;
  const double backward = f.value(shifted);
  return (forward - backward) / (2.0 * step);
}

namespace {

class ConstantField final : public ScalarField {
 public:
  ConstantField(int arity, double value) : arity_(arity), value_(value) {}

  int arity() const override { return arity_; }
  double value(std::span<const double>) const override { return value_; }
  double partial(std::span<const double>, int) const override { return 0.0; }
  double partial2(std::span<const double>, int, int) const override { return 0.0; }
  bool depends_on(int) const override { return false; }

 private:
  int arity_;
  double value_;
};

class ExprField final : public ScalarField {
 public:
  ExprField(Expr expr, int arity, std::vector<double> param_values)
      : expr_(std::move(expr)), arity_(arity), param_values_(std::move(param_values)) {
    if (expr_.max_coord_index() >= arity_) {
      throw ValidationError("expression references coordinate index " +
                            std::to_string(expr_.max_coord_index()) +
                            " outside its declared domain of " + std::to_string(arity_) +
                            " coordinates");
    }
  }

  int arity() const override { return arity_; }
  double value(std::span<const double> env) const override {
    return expr_.eval(env, param_values_);
  }
  double partial(std::span<const double> env, int coord) const override {
    return expr_.partial(env, param_values_, coord);
  }
  double partial2(std::span<const double> env, int c1, int c2) const override {
    return expr_.partial2(env, param_values_, c1, c2);
  }
  bool depends_on(int coord) const override { return expr_.depends_on(coord); }

 private:
  Expr expr_;
  int arity_;
  std::vector<double> param_values_;
};

class PartialField final : public ScalarField {
 public:
  PartialField(FieldPtr f, int coord) : f_(std::move(f)), coord_(coord) {}

  int arity() const override { return f_->arity(); }
  double value(std::span<const double> env) const override { return f_->partial(env, coord_); }
  double partial(std::span<const double> env, int coord) const override {
    return f_->partial2(env, coord_, coord);
  }
  bool depends_on(int coord) const override {
    // Differentiation cannot introduce dependencies; it may remove some,
    // so this is a sound over-approximation.
    return f_->depends_on(coord_) && f_->depends_on(coord);
  }

 private:
  FieldPtr f_;
  int coord_;
};

class LinearCombinationField final : public ScalarField {
 public:
  explicit LinearCombinationField(std::vector<std::pair<double, FieldPtr>> terms)
      : terms_(std::move(terms)) {
    if (terms_.empty()) throw ValidationError("linear combination needs at least one term");
    for (const auto& [c, f] : terms_) {
      if (!f) throw ValidationError("null field in linear combination");
      if (f->arity() != terms_.front().second->arity()) {
        throw ValidationError("mixed arities in linear combination");
      }
    }
  }

  int arity() const override { return terms_.front().second->arity(); }
  double value(std::span<const double> env) const override {
    double sum = 0.0;
    for (const auto& [c, f] : terms_) sum += c * f->value(env);
    return sum;
  }
  double partial(std::span<const double> env, int coord) const override {
    double sum = 0.0;
    for (const auto& [c, f] : terms_) sum += c * f->partial(env, coord);
    return sum;
  }
  double partial2(std::span<const double> env, int c1, int c2) const override {
    double sum = 0.0;
    for (const auto& [c, f] : terms_) sum += c * f->partial2(env, c1, c2);
    return sum;
  }
  bool depends_on(int coord) const override {
    return std::any_of(terms_.begin(), terms_.end(),
                       [coord](const auto& t) { return t.second->depends_on(coord); });
  }

 private:
  std::vector<std::pair<double, FieldPtr>> terms_;
};

class PullbackField final : public ScalarField {
 public:
  PullbackField(const Dimensions& dims, FieldPtr phase_field, std::vector<FieldPtr> momenta)
      : dims_(dims), phase_field_(std::move(phase_field)), momenta_(std::move(momenta)) {
    if (!phase_field_ || phase_field_->arity() != dims_.phase_dim()) {
      throw ValidationError("pullback requires a phase-space field");
    }
    if (static_cast<int>(momenta_.size()) != dims_.k() * dims_.n()) {
      throw ValidationError("pullback requires k*n momentum components");
    }
    for (const auto& m : momenta_) {
      if (!m || m->arity() != dims_.base_dim()) {
        throw ValidationError("pullback momentum components must be base-point fields");
      }
    }
  }

  int arity() const override { return dims_.base_dim(); }

  double value(std::span<const double> env) const override {
    const std::vector<double> phase = lift(env);
    return phase_field_->value(phase);
  }

  double partial(std::span<const double> env, int coord) const override {
    if (coord >= dims_.base_dim()) return 0.0;
    const std::vector<double> phase = lift(env);
    double sum = phase_field_->partial(phase, coord);
    for (std::size_t m = 0; m < momenta_.size(); ++m) {
      const int p_coord = dims_.base_dim() + static_cast<int>(m);
      if (!phase_field_->depends_on(p_coord)) continue;
      sum += phase_field_->partial(phase, p_coord) * momenta_[m]->partial(env, coord);
    }
    return sum;
  }

  bool depends_on(int coord) const override {
    if (coord >= dims_.base_dim()) return false;
    if (phase_field_->depends_on(coord)) return true;
    for (std::size_t m = 0; m < momenta_.size(); ++m) {
      const int p_coord = dims_.base_dim() + static_cast<int>(m);
      if (phase_field_->depends_on(p_coord) && momenta_[m]->depends_on(coord)) return true;
    }
    return false;
  }

 private:
  std::vector<double> lift(std::span<const double> env) const {
    if (static_cast<int>(env.size()) != dims_.base_dim()) {
      throw ValidationError("pullback expects a base-point environment");
    }
    std::vector<double> phase(static_cast<std::size_t>(dims_.phase_dim()));
    std::copy(env.begin(), env.end(), phase.begin());
    for (std::size_t m = 0; m < momenta_.size(); ++m) {
      phase[static_cast<std::size_t>(dims_.base_dim()) + m] = momenta_[m]->value(env);
    }
    return phase;
  }

  Dimensions dims_;
  FieldPtr phase_field_;
  std::vector<FieldPtr> momenta_;
};

}  // namespace

FieldPtr make_constant_field(int arity, double value) {
  return std::make_shared<ConstantField>(arity, value);
}

FieldPtr make_expr_field(Expr expr, int arity, const ParamSet& params) {
  std::vector<double> values = params.values_for(expr.param_names());
  return std::make_shared<ExprField>(std::move(expr), arity, std::move(values));
}

FieldPtr make_partial_field(FieldPtr f, int coord) {
  if (!f) throw ValidationError("null field");
  if (coord < 0 || coord >= f->arity()) {
    throw std::out_of_range("partial coordinate index out of range");
  }
  return std::make_shared<PartialField>(std::move(f), coord);
}

FieldPtr make_scaled_field(double scale, FieldPtr f) {
  if (!f) throw ValidationError("null field");
  return std::make_shared<LinearCombinationField>(
      std::vector<std::pair<double, FieldPtr>>{{scale, std::move(f)}});
}

FieldPtr make_linear_combination(std::vector<std::pair<double, FieldPtr>> terms) {
  return std::make_shared<LinearCombinationField>(std::move(terms));
}

FieldPtr make_pullback_field(const Dimensions& dims, FieldPtr phase_field,
                             std::vector<FieldPtr> momenta) {
  return std::make_shared<PullbackField>(dims, std::move(phase_field), std::move(momenta));
}

}  // namespace kcoshj
