#include "sanp/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sanp/kernels.hpp"

namespace sanp {

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

}  // namespace sanp

namespace sanp::ad {

namespace {

template <class T>
Tape<T>& tape_of(Var<T> a, Var<T> b) {
  if (a.tape == nullptr || a.tape != b.tape)
    throw ContractError("operands belong to different tapes");
  return *a.tape;
}

template <class T>
Tape<T>& tape_of(Var<T> a) {
  if (a.tape == nullptr) throw ContractError("variable has no tape");
  return *a.tape;
}

template <class T>
void require_same_shape(const Tape<T>& t, Var<T> a, Var<T> b,
                        const char* op) {
  if (t.shape(a) != t.shape(b))
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape_string(t.shape(a)) + " vs " +
                         shape_string(t.shape(b)));
}

template <class T>
Shape matrix_shape(std::size_t r, std::size_t c) {
  return Shape{r, c};
}

}  // namespace

// ---------------------------------------------------------------- Tape

template <class T>
Var<T> Tape<T>::push(Shape shape, std::vector<T> value, bool requires_grad,
                     BackwardFn fn) {
  if (nodes_.capacity() == nodes_.size())
    nodes_.reserve(std::max<std::size_t>(64, nodes_.size() * 2));
  Node n;
  n.size = value.size();
  n.shape = std::move(shape);
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(fn);
  nodes_.push_back(std::move(n));
  return Var<T>{this, nodes_.size() - 1};
}

template <class T>
Var<T> Tape<T>::constant(Tensor<T> value) {
  Shape s = value.shape;
  return push(std::move(s), std::move(value.values), false, {});
}

template <class T>
Var<T> Tape<T>::variable(Tensor<T> value) {
  Shape s = value.shape;
  Var<T> v = push(std::move(s), std::move(value.values), true, {});
  nodes_[v.id].grad.assign(nodes_[v.id].size, T(0));
  return v;
}

template <class T>
Var<T> Tape<T>::bind(const Tensor<T>& value, Tensor<T>* grad_sink) {
  if (grad_sink && grad_sink->shape != value.shape)
    throw DimensionError("gradient sink shape " +
                         shape_string(grad_sink->shape) +
                         " does not match parameter " +
                         shape_string(value.shape));
  if (nodes_.capacity() == nodes_.size())
    nodes_.reserve(std::max<std::size_t>(64, nodes_.size() * 2));
  Node n;
  n.shape = value.shape;
  n.external = value.values.data();
  n.size = value.values.size();
  n.grad_sink = grad_sink ? grad_sink->values.data() : nullptr;
  n.requires_grad = grad_sink != nullptr;
  nodes_.push_back(std::move(n));
  return Var<T>{this, nodes_.size() - 1};
}

template <class T>
std::size_t Tape<T>::rows(Var<T> v) const {
  const Shape& s = nodes_[v.id].shape;
  return s.size() < 2 ? 1 : s[0];
}

template <class T>
std::size_t Tape<T>::cols(Var<T> v) const {
  const Shape& s = nodes_[v.id].shape;
  return s.empty() ? 1 : s.back();
}

template <class T>
std::span<const T> Tape<T>::value_of(std::size_t id) const {
  const Node& n = nodes_[id];
  return {n.external ? n.external : n.value.data(), n.size};
}

template <class T>
std::span<const T> Tape<T>::value(Var<T> v) const {
  return value_of(v.id);
}

template <class T>
std::span<T> Tape<T>::mutable_grad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad_sink) return {n.grad_sink, n.size};
  if (n.grad.empty()) n.grad.assign(n.size, T(0));
  return n.grad;
}

template <class T>
std::span<const T> Tape<T>::grad_of(std::size_t id) const {
  const Node& n = nodes_[id];
  if (n.grad_sink) return {n.grad_sink, n.size};
  return n.grad;
}

template <class T>
std::span<const T> Tape<T>::grad(Var<T> v) const {
  return grad_of(v.id);
}

template <class T>
void Tape<T>::backward(Var<T> loss, T seed) {
  if (loss.tape != this) throw ContractError("loss belongs to another tape");
  if (nodes_[loss.id].size != 1)
    throw ContractError("backward requires a scalar loss, got shape " +
                        shape_string(nodes_[loss.id].shape));
  if (!nodes_[loss.id].requires_grad) return;
  mutable_grad(loss.id)[0] += seed;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
    n.backward(*this, i);
  }
}

// ---------------------------------------------------------------- ops

template <class T>
Var<T> matmul(Var<T> a, Var<T> b) {
  Tape<T>& t = tape_of(a, b);
  const std::size_t m = t.rows(a), k = t.cols(a), n = t.cols(b);
  if (t.rows(b) != k)
    throw DimensionError("matmul: inner dimensions disagree for " +
                         shape_string(t.shape(a)) + " * " +
                         shape_string(t.shape(b)));
  std::vector<T> out(m * n);
  kernels::gemm<T>({m, n, k, false, false}, T(1), t.value(a), t.value(b),
                   T(0), out);
  const bool rg = t.requires_grad(a) || t.requires_grad(b);
  return t.push(matrix_shape<T>(m, n), std::move(out), rg,
                [a = a.id, b = b.id, m, n, k](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  if (tp.requires_grad(Var<T>{&tp, a}))
                    kernels::gemm<T>({m, k, n, false, true}, T(1), g,
                                     tp.value_of(b), T(1), tp.mutable_grad(a));
                  if (tp.requires_grad(Var<T>{&tp, b}))
                    kernels::gemm<T>({k, n, m, true, false}, T(1),
                                     tp.value_of(a), g, T(1),
                                     tp.mutable_grad(b));
                });
}

template <class T>
Var<T> matmul_nt(Var<T> a, Var<T> b) {
  Tape<T>& t = tape_of(a, b);
  const std::size_t m = t.rows(a), k = t.cols(a), n = t.rows(b);
  if (t.cols(b) != k)
    throw DimensionError("matmul_nt: inner dimensions disagree for " +
                         shape_string(t.shape(a)) + " * " +
                         shape_string(t.shape(b)) + "^T");
  std::vector<T> out(m * n);
  kernels::gemm<T>({m, n, k, false, true}, T(1), t.value(a), t.value(b),
                   T(0), out);
  const bool rg = t.requires_grad(a) || t.requires_grad(b);
  return t.push(matrix_shape<T>(m, n), std::move(out), rg,
                [a = a.id, b = b.id, m, n, k](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  if (tp.requires_grad(Var<T>{&tp, a}))
                    kernels::gemm<T>({m, k, n, false, false}, T(1), g,
                                     tp.value_of(b), T(1), tp.mutable_grad(a));
                  if (tp.requires_grad(Var<T>{&tp, b}))
                    kernels::gemm<T>({n, k, m, true, false}, T(1), g,
                                     tp.value_of(a), T(1), tp.mutable_grad(b));
                });
}

template <class T>
Var<T> add_row_bias(Var<T> x, Var<T> bias) {
  Tape<T>& t = tape_of(x, bias);
  const std::size_t m = t.rows(x), q = t.cols(x);
  if (t.value(bias).size() != q)
    throw DimensionError("add_row_bias: bias " + shape_string(t.shape(bias)) +
                         " does not match " + shape_string(t.shape(x)));
  auto xv = t.value(x);
  auto bv = t.value(bias);
  std::vector<T> out(xv.begin(), xv.end());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j < q; ++j) out[r * q + j] += bv[j];
  const bool rg = t.requires_grad(x) || t.requires_grad(bias);
  return t.push(t.shape(x), std::move(out), rg,
                [x = x.id, b = bias.id, m, q](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  if (tp.requires_grad(Var<T>{&tp, x})) {
                    auto gx = tp.mutable_grad(x);
                    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
                  }
                  if (tp.requires_grad(Var<T>{&tp, b}))
                    kernels::column_sums<T>(m, q, g, tp.mutable_grad(b));
                });
}

template <class T>
Var<T> affine(Var<T> x, Var<T> w, std::optional<Var<T>> bias) {
  Var<T> y = matmul(x, w);
  return bias ? add_row_bias(y, *bias) : y;
}

template <class T>
Var<T> add(Var<T> a, Var<T> b) {
  Tape<T>& t = tape_of(a, b);
  require_same_shape(t, a, b, "add");
  auto av = t.value(a);
  auto bv = t.value(b);
  std::vector<T> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
  const bool rg = t.requires_grad(a) || t.requires_grad(b);
  return t.push(t.shape(a), std::move(out), rg,
                [a = a.id, b = b.id](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  for (std::size_t id : {a, b}) {
                    if (!tp.requires_grad(Var<T>{&tp, id})) continue;
                    auto gi = tp.mutable_grad(id);
                    for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
                  }
                });
}

template <class T>
Var<T> mul(Var<T> a, Var<T> b) {
  Tape<T>& t = tape_of(a, b);
  require_same_shape(t, a, b, "mul");
  auto av = t.value(a);
  auto bv = t.value(b);
  std::vector<T> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  const bool rg = t.requires_grad(a) || t.requires_grad(b);
  return t.push(t.shape(a), std::move(out), rg,
                [a = a.id, b = b.id](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  auto av = tp.value_of(a);
                  auto bv = tp.value_of(b);
                  if (tp.requires_grad(Var<T>{&tp, a})) {
                    auto ga = tp.mutable_grad(a);
                    for (std::size_t i = 0; i < g.size(); ++i)
                      ga[i] += g[i] * bv[i];
                  }
                  if (tp.requires_grad(Var<T>{&tp, b})) {
                    auto gb = tp.mutable_grad(b);
                    for (std::size_t i = 0; i < g.size(); ++i)
                      gb[i] += g[i] * av[i];
                  }
                });
}

template <class T>
Var<T> scale(Var<T> a, T factor) {
  Tape<T>& t = tape_of(a);
  auto av = t.value(a);
  std::vector<T> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * factor;
  return t.push(t.shape(a), std::move(out), t.requires_grad(a),
                [a = a.id, factor](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  auto ga = tp.mutable_grad(a);
                  for (std::size_t i = 0; i < g.size(); ++i)
                    ga[i] += g[i] * factor;
                });
}

template <class T>
Var<T> add_scalar(Var<T> a, T offset) {
  Tape<T>& t = tape_of(a);
  auto av = t.value(a);
  std::vector<T> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + offset;
  return t.push(t.shape(a), std::move(out), t.requires_grad(a),
                [a = a.id](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  auto ga = tp.mutable_grad(a);
                  for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                });
}

template <class T>
Var<T> relu(Var<T> a) {
  Tape<T>& t = tape_of(a);
  auto av = t.value(a);
  std::vector<T> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = av[i] > T(0) ? av[i] : T(0);
  return t.push(t.shape(a), std::move(out), t.requires_grad(a),
                [a = a.id](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  auto av = tp.value_of(a);
                  auto ga = tp.mutable_grad(a);
                  for (std::size_t i = 0; i < g.size(); ++i)
                    if (av[i] > T(0)) ga[i] += g[i];
                });
}

template <class T>
Var<T> softplus(Var<T> a) {
  Tape<T>& t = tape_of(a);
  auto av = t.value(a);
  std::vector<T> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const T x = av[i];
    out[i] = std::max(x, T(0)) + std::log1p(std::exp(-std::abs(x)));
  }
  return t.push(t.shape(a), std::move(out), t.requires_grad(a),
                [a = a.id](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  auto av = tp.value_of(a);
                  auto ga = tp.mutable_grad(a);
                  for (std::size_t i = 0; i < g.size(); ++i) {
                    const T x = av[i];
                    const T sig = x >= T(0) ? T(1) / (T(1) + std::exp(-x))
                                            : std::exp(x) / (T(1) + std::exp(x));
                    ga[i] += g[i] * sig;
                  }
                });
}

template <class T>
Var<T> softmax_rows(Var<T> a) {
  Tape<T>& t = tape_of(a);
  auto av = t.value(a);
  for (T x : av)
    if (std::isnan(x)) throw NumericError("softmax_rows: NaN input");
  const std::size_t m = t.rows(a), n = t.cols(a);
  std::vector<T> out(av.size());
  kernels::softmax_rows<T>(m, n, av, out);
  return t.push(t.shape(a), std::move(out), t.requires_grad(a),
                [a = a.id, m, n](Tape<T>& tp, std::size_t self) {
                  kernels::softmax_rows_backward<T>(m, n, tp.value_of(self),
                                                    tp.grad_of(self),
                                                    tp.mutable_grad(a));
                });
}

template <class T>
Var<T> sum(Var<T> a) {
  Tape<T>& t = tape_of(a);
  T total = 0;
  for (T x : t.value(a)) total += x;
  return t.push(Shape{1}, std::vector<T>{total}, t.requires_grad(a),
                [a = a.id](Tape<T>& tp, std::size_t self) {
                  const T g = tp.grad_of(self)[0];
                  for (T& gi : tp.mutable_grad(a)) gi += g;
                });
}

template <class T>
Var<T> slice_cols(Var<T> a, std::size_t begin, std::size_t count) {
  Tape<T>& t = tape_of(a);
  const std::size_t m = t.rows(a), n = t.cols(a);
  if (count == 0 || begin + count > n)
    throw DimensionError("slice_cols: columns [" + std::to_string(begin) +
                         ", " + std::to_string(begin + count) +
                         ") out of range for " + shape_string(t.shape(a)));
  auto av = t.value(a);
  std::vector<T> out(m * count);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j < count; ++j)
      out[r * count + j] = av[r * n + begin + j];
  return t.push(matrix_shape<T>(m, count), std::move(out), t.requires_grad(a),
                [a = a.id, m, n, begin, count](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  auto ga = tp.mutable_grad(a);
                  for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t j = 0; j < count; ++j)
                      ga[r * n + begin + j] += g[r * count + j];
                });
}

template <class T>
Var<T> concat_rows(std::span<const Var<T>> parts) {
  if (parts.empty()) throw ContractError("concat_rows: no inputs");
  Tape<T>& t = tape_of(parts[0]);
  const std::size_t n = t.cols(parts[0]);
  std::size_t m = 0;
  bool rg = false;
  std::vector<std::size_t> ids;
  for (const Var<T>& p : parts) {
    if (p.tape != &t) throw ContractError("concat_rows: mixed tapes");
    if (t.cols(p) != n)
      throw DimensionError("concat_rows: column mismatch " +
                           shape_string(t.shape(parts[0])) + " vs " +
                           shape_string(t.shape(p)));
    m += t.rows(p);
    rg = rg || t.requires_grad(p);
    ids.push_back(p.id);
  }
  std::vector<T> out;
  out.reserve(m * n);
  for (const Var<T>& p : parts) {
    auto v = t.value(p);
    out.insert(out.end(), v.begin(), v.end());
  }
  return t.push(matrix_shape<T>(m, n), std::move(out), rg,
                [ids = std::move(ids)](Tape<T>& tp, std::size_t self) {
                  auto g = tp.grad_of(self);
                  std::size_t offset = 0;
                  for (std::size_t id : ids) {
                    const std::size_t len = tp.value_of(id).size();
                    if (tp.requires_grad(Var<T>{&tp, id})) {
                      auto gi = tp.mutable_grad(id);
                      for (std::size_t i = 0; i < len; ++i)
                        gi[i] += g[offset + i];
                    }
                    offset += len;
                  }
                });
}

template <class T>
Var<T> gaussian_nll(Var<T> y, Var<T> mu, Var<T> sigma) {
  Tape<T>& t = tape_of(y, mu);
  require_same_shape(t, y, mu, "gaussian_nll");
  require_same_shape(t, y, sigma, "gaussian_nll");
  auto yv = t.value(y);
  auto mv = t.value(mu);
  auto sv = t.value(sigma);
  const std::size_t n = yv.size();
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sv[i] > T(0)))
      throw DomainError("gaussian_nll: sigma must be strictly positive");
    const double r = double(yv[i]) - double(mv[i]);
    const double s = sv[i];
    total += std::log(s) + half_log_2pi + r * r / (2.0 * s * s);
  }
  const bool rg =
      t.requires_grad(y) || t.requires_grad(mu) || t.requires_grad(sigma);
  return t.push(
      Shape{1}, std::vector<T>{T(total / double(n))}, rg,
      [y = y.id, mu = mu.id, sigma = sigma.id, n](Tape<T>& tp,
                                                  std::size_t self) {
        const T g = tp.grad_of(self)[0] / T(n);
        auto yv = tp.value_of(y);
        auto mv = tp.value_of(mu);
        auto sv = tp.value_of(sigma);
        const bool gy = tp.requires_grad(Var<T>{&tp, y});
        const bool gm = tp.requires_grad(Var<T>{&tp, mu});
        const bool gs = tp.requires_grad(Var<T>{&tp, sigma});
        for (std::size_t i = 0; i < n; ++i) {
          const T r = yv[i] - mv[i];
          const T s = sv[i];
          const T inv_var = T(1) / (s * s);
          if (gy) tp.mutable_grad(y)[i] += g * r * inv_var;
          if (gm) tp.mutable_grad(mu)[i] -= g * r * inv_var;
          if (gs) tp.mutable_grad(sigma)[i] += g * (T(1) / s - r * r * inv_var / s);
        }
      });
}

#define SANP_INSTANTIATE(T)                                                  \
  template class Tape<T>;                                                    \
  template Var<T> matmul<T>(Var<T>, Var<T>);                                 \
  template Var<T> matmul_nt<T>(Var<T>, Var<T>);                              \
  template Var<T> affine<T>(Var<T>, Var<T>, std::optional<Var<T>>);         \
  template Var<T> add_row_bias<T>(Var<T>, Var<T>);                           \
  template Var<T> add<T>(Var<T>, Var<T>);                                    \
  template Var<T> mul<T>(Var<T>, Var<T>);                                    \
  template Var<T> scale<T>(Var<T>, T);                                       \
  template Var<T> add_scalar<T>(Var<T>, T);                                  \
  template Var<T> relu<T>(Var<T>);                                           \
  template Var<T> softplus<T>(Var<T>);                                       \
  template Var<T> softmax_rows<T>(Var<T>);                                   \
  template Var<T> sum<T>(Var<T>);                                            \
  template Var<T> slice_cols<T>(Var<T>, std::size_t, std::size_t);          \
  template Var<T> concat_rows<T>(std::span<const Var<T>>);                   \
  template Var<T> gaussian_nll<T>(Var<T>, Var<T>, Var<T>);

SANP_INSTANTIATE(float)
SANP_INSTANTIATE(double)

#undef SANP_INSTANTIATE

}  // namespace sanp::ad
