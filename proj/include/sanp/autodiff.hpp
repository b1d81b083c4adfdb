#pragma once
// Minimal reverse-mode differentiation over dense matrices.
//
// A Tape records primitive operations in creation order, which is a valid
// topological order by construction. Tape::backward walks the record once in
// reverse. Parameters live outside the tape: Tape::bind exposes an external
// tensor as a leaf whose gradient is accumulated straight into a caller-owned
// sink, so many tapes (one per batch item) can share one parameter snapshot.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sanp/tensor.hpp"

namespace sanp::ad {

template <class T>
class Tape;

template <class T>
struct Var {
  Tape<T>* tape = nullptr;
  std::size_t id = 0;
};

template <class T>
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf that never receives gradient.
  Var<T> constant(Tensor<T> value);
  // Leaf owned by the tape; its gradient is readable through grad().
  Var<T> variable(Tensor<T> value);
  // Leaf backed by external storage. When grad_sink is non-null, backward
  // adds this leaf's gradient into it (shapes must match).
  Var<T> bind(const Tensor<T>& value, Tensor<T>* grad_sink);

  // Seeds d(loss)/d(loss) = seed and propagates to every leaf.
  void backward(Var<T> loss, T seed = T(1));

  const Shape& shape(Var<T> v) const { return nodes_[v.id].shape; }
  std::size_t rows(Var<T> v) const;
  std::size_t cols(Var<T> v) const;
  std::span<const T> value(Var<T> v) const;
  // Gradient of a tape-owned variable after backward (zeros if unreached).
  std::span<const T> grad(Var<T> v) const;
  bool requires_grad(Var<T> v) const { return nodes_[v.id].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  // --- used by op implementations ---
  using BackwardFn = std::function<void(Tape&, std::size_t)>;
  Var<T> push(Shape shape, std::vector<T> value, bool requires_grad,
              BackwardFn fn);
  std::span<T> mutable_grad(std::size_t id);
  std::span<const T> grad_of(std::size_t id) const;
  std::span<const T> value_of(std::size_t id) const;

 private:
  struct Node {
    Shape shape;
    std::vector<T> value;
    const T* external = nullptr;
    std::size_t size = 0;
    std::vector<T> grad;
    T* grad_sink = nullptr;
    bool requires_grad = false;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
};

// Matrix product a[m x k] * b[k x n].
template <class T>
Var<T> matmul(Var<T> a, Var<T> b);
// a[m x k] * b[n x k]^T.
template <class T>
Var<T> matmul_nt(Var<T> a, Var<T> b);
// x[m x p] * w[p x q] (+ bias[q] added to every row).
template <class T>
Var<T> affine(Var<T> x, Var<T> w, std::optional<Var<T>> bias = std::nullopt);
template <class T>
Var<T> add_row_bias(Var<T> x, Var<T> bias);
template <class T>
Var<T> add(Var<T> a, Var<T> b);
template <class T>
Var<T> mul(Var<T> a, Var<T> b);
template <class T>
Var<T> scale(Var<T> a, T factor);
template <class T>
Var<T> add_scalar(Var<T> a, T offset);
template <class T>
Var<T> relu(Var<T> a);
template <class T>
Var<T> softplus(Var<T> a);
template <class T>
Var<T> softmax_rows(Var<T> a);
template <class T>
Var<T> sum(Var<T> a);
template <class T>
Var<T> slice_cols(Var<T> a, std::size_t begin, std::size_t count);
template <class T>
Var<T> concat_rows(std::span<const Var<T>> parts);
// mean_i [ln sigma_i + 0.5 ln(2 pi) + (y_i - mu_i)^2 / (2 sigma_i^2)]
template <class T>
Var<T> gaussian_nll(Var<T> y, Var<T> mu, Var<T> sigma);

}  // namespace sanp::ad
