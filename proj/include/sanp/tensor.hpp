#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sanp/errors.hpp"

namespace sanp {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_string(const Shape& shape);

// Dense row-major array. Rank 1 tensors behave as a single row when treated as
// matrices.
template <class T>
struct Tensor {
  Shape shape;
  std::vector<T> values;
  bool requires_grad = false;

  Tensor() = default;
  explicit Tensor(Shape s, bool grad = false)
      : shape(std::move(s)), values(shape_size(shape), T(0)),
        requires_grad(grad) {
    check_shape();
  }
  Tensor(Shape s, std::vector<T> v, bool grad = false)
      : shape(std::move(s)), values(std::move(v)), requires_grad(grad) {
    check_shape();
    if (values.size() != shape_size(shape))
      throw DimensionError("tensor of shape " + shape_string(shape) +
                           " given " + std::to_string(values.size()) +
                           " values");
  }

  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<T> v = {}) {
    if (v.empty()) return Tensor({rows, cols});
    return Tensor({rows, cols}, std::move(v));
  }

  std::size_t size() const { return values.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const { return shape.size() < 2 ? 1 : shape[0]; }
  std::size_t cols() const { return shape.empty() ? 1 : shape.back(); }

  T& operator()(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
  T operator()(std::size_t r, std::size_t c) const {
    return values[r * cols() + c];
  }

  std::span<T> span() { return values; }
  std::span<const T> span() const { return values; }

  template <class U>
  Tensor<U> cast() const {
    return Tensor<U>(shape, std::vector<U>(values.begin(), values.end()),
                     requires_grad);
  }

  bool operator==(const Tensor& other) const {
    return shape == other.shape && values == other.values;
  }

 private:
  void check_shape() const {
    for (auto d : shape)
      if (d == 0) throw DimensionError("tensor dimensions must be positive");
  }
};

}  // namespace sanp
