#include "kcoshj/point.hpp"

#include <cmath>
#include <string>

#include "kcoshj/errors.hpp"

namespace kcoshj {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ValidationError(std::string(what) + " contains a non-finite entry");
    }
  }
}

void require_size(std::span<const double> values, std::size_t expected, const char* what) {
  if (values.size() != expected) {
    throw ValidationError(std::string(what) + " has length " + std::to_string(values.size()) +
                          ", expected " + std::to_string(expected));
  }
}

}  // namespace

PhasePoint::PhasePoint(const Dimensions& dims, std::vector<double> flat)
    : dims_(dims), flat_(std::move(flat)) {}

PhasePoint::PhasePoint(const Dimensions& dims, std::span<const double> x,
                       std::span<const double> q, std::span<const double> p)
    : dims_(dims) {
  require_size(x, static_cast<std::size_t>(dims.k()), "x");
  require_size(q, static_cast<std::size_t>(dims.n()), "q");
  require_size(p, static_cast<std::size_t>(dims.k() * dims.n()), "p");
  flat_.reserve(static_cast<std::size_t>(dims.phase_dim()));
  flat_.insert(flat_.end(), x.begin(), x.end());
  flat_.insert(flat_.end(), q.begin(), q.end());
  flat_.insert(flat_.end(), p.begin(), p.end());
  require_finite(flat_, "PhasePoint");
}

PhasePoint PhasePoint::from_flat(const Dimensions& dims, std::span<const double> flat) {
  require_size(flat, static_cast<std::size_t>(dims.phase_dim()), "PhasePoint flat array");
  require_finite(flat, "PhasePoint");
  return PhasePoint(dims, std::vector<double>(flat.begin(), flat.end()));
}

BasePoint::BasePoint(const Dimensions& dims, std::vector<double> flat)
    : dims_(dims), flat_(std::move(flat)) {}

BasePoint::BasePoint(const Dimensions& dims, std::span<const double> x, std::span<const double> q)
    : dims_(dims) {
  require_size(x, static_cast<std::size_t>(dims.k()), "x");
  require_size(q, static_cast<std::size_t>(dims.n()), "q");
  flat_.reserve(static_cast<std::size_t>(dims.base_dim()));
  flat_.insert(flat_.end(), x.begin(), x.end());
  flat_.insert(flat_.end(), q.begin(), q.end());
  require_finite(flat_, "BasePoint");
}

BasePoint BasePoint::from_flat(const Dimensions& dims, std::span<const double> flat) {
  require_size(flat, static_cast<std::size_t>(dims.base_dim()), "BasePoint flat array");
  require_finite(flat, "BasePoint");
  return BasePoint(dims, std::vector<double>(flat.begin(), flat.end()));
}

}  // namespace kcoshj
