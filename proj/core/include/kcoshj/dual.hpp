#pragma once

#include <cmath>

#include "kcoshj/errors.hpp"

namespace kcoshj {

/// Forward-mode number carrying a value and one directional derivative.
/// Nesting (Dual<Dual<double>>) gives exact mixed second derivatives.
///
/// The d_* functions below throw EvalError instead of returning NaN/Inf on
/// domain violations, including the derivative-only singularities of sqrt,
/// abs and asin at the edge of their smooth domain.
template <class T>
struct Dual {
  T val{};
  T der{};

  Dual() = default;
  Dual(T v) : val(std::move(v)) {}  // NOLINT: implicit scalar promotion is the point
  Dual(T v, T d) : val(std::move(v)), der(std::move(d)) {}
};

inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.val);
}

inline bool all_zero(double x) { return x == 0.0; }
template <class T>
bool all_zero(const Dual<T>& x) {
  return all_zero(x.val) && all_zero(x.der);
}

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.val + b.val, a.der + b.der};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.val - b.val, a.der - b.der};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.val, -a.der};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.val * b.val, a.der * b.val + a.val * b.der};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return {a.val / b.val, (a.der * b.val - a.val * b.der) / (b.val * b.val)};
}

// Scalar building blocks with the domain checks. Declared before the Dual
// overloads so the template bodies can see them.

inline double checked_div(double a, double b) {
  if (b == 0.0) throw EvalError("division by zero");
  return a / b;
}

inline double d_sin(double x) { return std::sin(x); }
inline double d_cos(double x) { return std::cos(x); }

inline double d_exp(double x) {
  const double v = std::exp(x);
  if (!std::isfinite(v)) throw EvalError("exp overflow");
  return v;
}

inline double d_log(double x) {
  if (x <= 0.0) throw EvalError("log of a non-positive value");
  return std::log(x);
}

inline double d_sqrt(double x) {
  if (x < 0.0) throw EvalError("sqrt of a negative value");
  return std::sqrt(x);
}

inline double d_abs(double x) { return std::fabs(x); }

inline double d_asin(double x) {
  if (x < -1.0 || x > 1.0) throw EvalError("asin argument outside [-1, 1]");
  return std::asin(x);
}

inline bool is_integer_valued(double x) { return std::isfinite(x) && std::floor(x) == x; }

inline double d_pow(double base, double exponent) {
  if (base == 0.0) {
    if (exponent > 0.0) return 0.0;
    if (exponent == 0.0) return 1.0;
    throw EvalError("zero raised to a negative power");
  }
  if (base < 0.0 && !is_integer_valued(exponent)) {
    throw EvalError("negative base with non-integer exponent");
  }
  const double v = std::pow(base, exponent);
  if (!std::isfinite(v)) throw EvalError("pow overflow");
  return v;
}

// Dual overloads: derivative rules plus non-differentiability checks.

template <class T>
Dual<T> checked_div(const Dual<T>& a, const Dual<T>& b) {
  if (primal(b) == 0.0) throw EvalError("division by zero");
  return a / b;
}

template <class T>
Dual<T> d_cos(const Dual<T>& x);

template <class T>
Dual<T> d_sin(const Dual<T>& x) {
  return {d_sin(x.val), x.der * d_cos(x.val)};
}

template <class T>
Dual<T> d_cos(const Dual<T>& x) {
  return {d_cos(x.val), -(x.der * d_sin(x.val))};
}

template <class T>
Dual<T> d_exp(const Dual<T>& x) {
  const T v = d_exp(x.val);
  return {v, x.der * v};
}

template <class T>
Dual<T> d_log(const Dual<T>& x) {
  if (primal(x) <= 0.0) throw EvalError("log of a non-positive value");
  return {d_log(x.val), x.der / x.val};
}

template <class T>
Dual<T> d_sqrt(const Dual<T>& x) {
  const T v = d_sqrt(x.val);
  if (all_zero(x.der)) return {v, T{}};
  if (primal(x) == 0.0) throw EvalError("sqrt is not differentiable at 0");
  return {v, x.der / (T(2.0) * v)};
}

template <class T>
Dual<T> d_abs(const Dual<T>& x) {
  if (all_zero(x.der)) return {d_abs(x.val), T{}};
  if (primal(x) == 0.0) throw EvalError("abs is not differentiable at 0");
  return primal(x) > 0.0 ? x : -x;
}

template <class T>
Dual<T> d_asin(const Dual<T>& x) {
  const T v = d_asin(x.val);
  if (all_zero(x.der)) return {v, T{}};
  const double p = primal(x);
  if (p <= -1.0 || p >= 1.0) throw EvalError("asin is not differentiable at +-1");
  return {v, x.der / d_sqrt(T(1.0) - x.val * x.val)};
}

template <class T>
Dual<T> d_pow(const Dual<T>& a, const Dual<T>& b) {
  const T v = d_pow(a.val, b.val);
  if (all_zero(b.der)) {
    // Exponent locally constant: d(a^c) = c * a^(c-1) * a'.
    if (all_zero(a.der)) return {v, T{}};
    return {v, b.val * d_pow(a.val, b.val - T(1.0)) * a.der};
  }
  // Varying exponent needs log(a).
  if (primal(a) <= 0.0) {
    throw EvalError("pow with varying exponent requires a positive base");
  }
  return {v, v * (b.der * d_log(a.val) + b.val * a.der / a.val)};
}

}  // namespace kcoshj
