#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcoshj/dimensions.hpp"

namespace kcoshj {

struct ExprNode;

/// Named constants available to expressions (masses, metric entries, the
/// C_alpha of a section family, ...). Parameter names must not collide with
/// coordinate names; `parse` enforces this against its Dimensions.
class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(std::map<std::string, double> values) : values_(std::move(values)) {}

  void set(const std::string& name, double value) { values_[name] = value; }
  bool contains(const std::string& name) const { return values_.count(name) != 0; }
  double get(const std::string& name) const;

  /// Parameter names, sorted; this is the binding order used by Expr.
  std::vector<std::string> names() const;
  /// Values in the order of `names` (which must all be present).
  std::vector<double> values_for(std::span<const std::string> names) const;

  const std::map<std::string, double>& map() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

/// Immutable expression tree over coordinates of a Dimensions, named
/// parameters, literals, + - * / ^, unary -, and the functions
/// sin cos exp log sqrt abs asin.
///
/// Evaluation is pure; derivative queries are exact (forward-mode dual
/// numbers), never finite differences. Coordinates are addressed by their
/// flat index; the coordinate environment passed to eval/partial must be at
/// least max_coord_index()+1 long. Parameter values are passed in the order
/// of param_names().
class Expr {
 public:
  /// Parses `text`; identifiers must be coordinates of `dims` or members of
  /// `param_names`. Throws ParseError (syntax, with position) or
  /// ValidationError (parameter name shadows a coordinate).
  static Expr parse(std::string_view text, const Dimensions& dims,
                    std::span<const std::string> param_names = {});

  /// Round-trippable text form: parse(print()) evaluates identically.
  std::string print() const;

  double eval(std::span<const double> coords, std::span<const double> params) const;

  /// Exact first partial derivative with respect to the coordinate at flat
  /// index `coord`. Zero for coordinates the expression does not reference.
  double partial(std::span<const double> coords, std::span<const double> params,
                 int coord) const;

  /// Exact mixed second partial (nested forward mode).
  double partial2(std::span<const double> coords, std::span<const double> params, int c1,
                  int c2) const;

  bool depends_on(int coord) const;
  int max_coord_index() const { return max_coord_; }

  /// Names bound at parse time, defining the parameter value order.
  const std::vector<std::string>& param_names() const { return *params_; }

 private:
  Expr(std::shared_ptr<const ExprNode> root, std::shared_ptr<const std::vector<std::string>> params,
       std::vector<bool> coord_mask, int max_coord);

  std::shared_ptr<const ExprNode> root_;
  std::shared_ptr<const std::vector<std::string>> params_;
  std::vector<bool> coord_mask_;
  int max_coord_;
};

}  // namespace kcoshj
