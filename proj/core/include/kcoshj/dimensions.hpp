#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kcoshj {

/// Sizes of a first-order field theory in Darboux coordinates: k space-time
/// parameters x^a, n field components q^i, and k*n momenta p^a_i. The phase
/// space has k + n + k*n coordinates.
///
/// All coordinate arrays and file columns follow one flat layout:
///   x1..xk, q1..qn, p1_1..p1_n, p2_1..p2_n, ..., pk_1..pk_n
/// (momenta with the space-time index outermost). Indices in the C++ API are
/// 0-based; the printed names are 1-based.
class Dimensions {
 public:
  /// Defaults to the smallest theory, k = n = 1.
  Dimensions() : k_(1), n_(1) {}
  Dimensions(int k, int n);

  int k() const { return k_; }
  int n() const { return n_; }

  int base_dim() const { return k_ + n_; }
  int phase_dim() const { return k_ + n_ + k_ * n_; }

  /// Flat index of x^alpha, alpha in [0, k).
  int x_index(int alpha) const;
  /// Flat index of q^i, i in [0, n).
  int q_index(int i) const;
  /// Flat index of p^alpha_i.
  int p_index(int alpha, int i) const;

  bool operator==(const Dimensions&) const = default;

 private:
  int k_;
  int n_;
};

/// The canonical coordinate names, in flat-layout order.
std::vector<std::string> coordinate_names(const Dimensions& dims);

/// Name of the coordinate at `index` in the flat layout.
std::string coordinate_name(const Dimensions& dims, int index);

/// Flat index of `name`, or -1 when the name is not a coordinate of `dims`.
int coordinate_index(const Dimensions& dims, std::string_view name);

/// Direction of the alpha-th Reeb vector field in Darboux coordinates: the
/// name of x^alpha. Throws std::out_of_range for alpha outside [0, k).
std::string reeb_component(const Dimensions& dims, int alpha);

}  // namespace kcoshj
