#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "kcoshj/dimensions.hpp"

namespace kcoshj {

/// A point (x, q, p) of R^k x (T^1_k)*Q in Darboux coordinates, stored flat
/// in the canonical layout. Immutable after construction; construction
/// rejects wrong sizes and non-finite entries.
class PhasePoint {
 public:
  PhasePoint(const Dimensions& dims, std::span<const double> x, std::span<const double> q,
             std::span<const double> p);
  PhasePoint(const Dimensions& dims, std::initializer_list<double> x,
             std::initializer_list<double> q, std::initializer_list<double> p)
      : PhasePoint(dims, std::span<const double>(x.begin(), x.size()),
                   std::span<const double>(q.begin(), q.size()),
                   std::span<const double>(p.begin(), p.size())) {}

  static PhasePoint from_flat(const Dimensions& dims, std::span<const double> flat);

  const Dimensions& dims() const { return dims_; }
  std::span<const double> flat() const { return flat_; }
  std::vector<double> to_flat() const { return flat_; }

  double x(int alpha) const { return flat_[static_cast<std::size_t>(dims_.x_index(alpha))]; }
  double q(int i) const { return flat_[static_cast<std::size_t>(dims_.q_index(i))]; }
  double p(int alpha, int i) const {
    return flat_[static_cast<std::size_t>(dims_.p_index(alpha, i))];
  }

 private:
  PhasePoint(const Dimensions& dims, std::vector<double> flat);

  Dimensions dims_;
  std::vector<double> flat_;
};

/// A point (x, q) of R^k x Q, the base of the momentum bundle.
class BasePoint {
 public:
  BasePoint(const Dimensions& dims, std::span<const double> x, std::span<const double> q);
  BasePoint(const Dimensions& dims, std::initializer_list<double> x,
            std::initializer_list<double> q)
      : BasePoint(dims, std::span<const double>(x.begin(), x.size()),
                  std::span<const double>(q.begin(), q.size())) {}

  static BasePoint from_flat(const Dimensions& dims, std::span<const double> flat);

  const Dimensions& dims() const { return dims_; }
  std::span<const double> flat() const { return flat_; }

  double x(int alpha) const { return flat_[static_cast<std::size_t>(dims_.x_index(alpha))]; }
  double q(int i) const { return flat_[static_cast<std::size_t>(dims_.q_index(i))]; }

 private:
  BasePoint(const Dimensions& dims, std::vector<double> flat);

  Dimensions dims_;
  std::vector<double> flat_;
};

}  // namespace kcoshj
