#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "srclab/errors.hpp"

namespace srclab {

/// Dense row-major array of fixed rank with runtime extents. All frame
/// indices are 0-based in code; printed output is 1-based.
template <class T, int Rank>
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::array<int, Rank> extents, const T& fill = T{}) : extents_(extents) {
    std::size_t size = 1;
    for (int e : extents_) size *= static_cast<std::size_t>(e);
    data_.assign(size, fill);
  }

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  int extent(int axis) const { return extents_[axis]; }
  const std::array<int, Rank>& extents() const noexcept { return extents_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t off = 0;
    for (int a = 0; a < Rank; ++a) off = off * static_cast<std::size_t>(extents_[a]) + idx[a];
    return off;
  }

  std::array<int, Rank> extents_{};
  std::vector<T> data_;
};

using Matrix = Tensor<double, 2>;
using Tensor3 = Tensor<double, 3>;
using Tensor4 = Tensor<double, 4>;

template <class T, int R>
double max_abs(const Tensor<T, R>& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

/// Largest |a - b| entry; extents must match.
template <int R>
double max_abs_diff(const Tensor<double, R>& a, const Tensor<double, R>& b) {
  if (a.extents() != b.extents()) throw DimensionMismatch("tensor extents differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace srclab
