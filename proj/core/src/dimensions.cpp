#include "kcoshj/dimensions.hpp"

#include <charconv>
#include <stdexcept>

#include "kcoshj/errors.hpp"

namespace kcoshj {

Dimensions::Dimensions(int k, int n) : k_(k), n_(n) {
  if (k < 1 || n < 1) {
    throw ValidationError("Dimensions require k >= 1 and n >= 1, got k=" + std::to_string(k) +
                          ", n=" + std::to_string(n));
  }
}

int Dimensions::x_index(int alpha) const {
  if (alpha < 0 || alpha >= k_) throw std::out_of_range("x index out of range");
  return alpha;
}

int Dimensions::q_index(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("q index out of range");
  return k_ + i;
}

int Dimensions::p_index(int alpha, int i) const {
  if (alpha < 0 || alpha >= k_ || i < 0 || i >= n_) {
    throw std::out_of_range("p index out of range");
  }
  return k_ + n_ + alpha * n_ + i;
}

std::vector<std::string> coordinate_names(const Dimensions& dims) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(dims.phase_dim()));
  for (int a = 0; a < dims.k(); ++a) names.push_back("x" + std::to_string(a + 1));
  for (int i = 0; i < dims.n(); ++i) names.push_back("q" + std::to_string(i + 1));
  for (int a = 0; a < dims.k(); ++a) {
    for (int i = 0; i < dims.n(); ++i) {
      names.push_back("p" + std::to_string(a + 1) + "_" + std::to_string(i + 1));
    }
  }
  return names;
}

std::string coordinate_name(const Dimensions& dims, int index) {
  if (index < 0 || index >= dims.phase_dim()) {
    throw std::out_of_range("coordinate index out of range");
  }
  if (index < dims.k()) return "x" + std::to_string(index + 1);
  if (index < dims.base_dim()) return "q" + std::to_string(index - dims.k() + 1);
  const int m = index - dims.base_dim();
  return "p" + std::to_string(m / dims.n() + 1) + "_" + std::to_string(m % dims.n() + 1);
}

namespace {

// Parses a strictly positive decimal integer with no leading zeros or signs.
// Returns -1 on any mismatch so that e.g. "x01" and "x+1" are rejected.
int parse_positive(std::string_view s) {
  if (s.empty() || s[0] < '1' || s[0] > '9') return -1;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return -1;
  return value;
}

}  // namespace

int coordinate_index(const Dimensions& dims, std::string_view name) {
  if (name.size() < 2) return -1;
  const char head = name[0];
  std::string_view rest = name.substr(1);
  if (head == 'x') {
    const int a = parse_positive(rest);
    return (a >= 1 && a <= dims.k()) ? a - 1 : -1;
  }
  if (head == 'q') {
    const int i = parse_positive(rest);
    return (i >= 1 && i <= dims.n()) ? dims.k() + i - 1 : -1;
  }
  if (head == 'p') {
    const std::size_t sep = rest.find('_');
    if (sep == std::string_view::npos) return -1;
    const int a = parse_positive(rest.substr(0, sep));
    const int i = parse_positive(rest.substr(sep + 1));
    if (a < 1 || a > dims.k() || i < 1 || i > dims.n()) return -1;
    return dims.base_dim() + (a - 1) * dims.n() + (i - 1);
  }
  return -1;
}

std::string reeb_component(const Dimensions& dims, int alpha) {
  if (alpha < 0 || alpha >= dims.k()) {
    throw std::out_of_range("Reeb index " + std::to_string(alpha + 1) + " out of range 1.." +
                            std::to_string(dims.k()));
  }
  return "x" + std::to_string(alpha + 1);
}

}  // namespace kcoshj
