#pragma once
// Dense numeric kernels behind the autodiff engine.
//
// Two implementations of each kernel live here:
//   sanp::kernels::reference  straightforward serial loops, kept as the
//                             oracle for tests and as the benchmark baseline;
//   sanp::kernels             register-tiled / OpenMP versions used by the
//                             engine.
// All matrices are row-major.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sanp::kernels {

// Shape of C = alpha * op(A) * op(B) + beta * C with op(A): m x k, op(B): k x n.
// When trans_a is set A is stored k x m; when trans_b is set B is stored n x k.
struct GemmShape {
  std::size_t m = 0, n = 0, k = 0;
  bool trans_a = false;
  bool trans_b = false;
};

namespace detail {

inline bool worth_threading(std::size_t ops) {
#ifdef _OPENMP
  return ops >= (std::size_t{1} << 18) && !omp_in_parallel() &&
         omp_get_max_threads() > 1;
#else
  (void)ops;
  return false;
#endif
}

}  // namespace detail

namespace reference {

template <class T>
void gemm(const GemmShape& s, T alpha, std::span<const T> a,
          std::span<const T> b, T beta, std::span<T> c) {
  for (std::size_t i = 0; i < s.m; ++i) {
    for (std::size_t j = 0; j < s.n; ++j) {
      T acc = 0;
      for (std::size_t p = 0; p < s.k; ++p) {
        const T av = s.trans_a ? a[p * s.m + i] : a[i * s.k + p];
        const T bv = s.trans_b ? b[j * s.k + p] : b[p * s.n + j];
        acc += av * bv;
      }
      T& out = c[i * s.n + j];
      out = alpha * acc + (beta == T(0) ? T(0) : beta * out);
    }
  }
}

template <class T>
void softmax_rows(std::size_t rows, std::size_t cols, std::span<const T> in,
                  std::span<T> out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* x = in.data() + r * cols;
    T* y = out.data() + r * cols;
    T mx = -std::numeric_limits<T>::infinity();
    for (std::size_t j = 0; j < cols; ++j) mx = std::max(mx, x[j]);
    T total = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      y[j] = std::exp(x[j] - mx);
      total += y[j];
    }
    for (std::size_t j = 0; j < cols; ++j) y[j] /= total;
  }
}

template <class T>
void column_sums(std::size_t rows, std::size_t cols, std::span<const T> in,
                 std::span<T> out) {
  for (std::size_t j = 0; j < cols; ++j) {
    T acc = 0;
    for (std::size_t r = 0; r < rows; ++r) acc += in[r * cols + j];
    out[j] += acc;
  }
}

}  // namespace reference

namespace detail {

template <class T>
constexpr std::size_t gemm_nr = 64 / sizeof(T) * 2;  // two 512-bit lanes
constexpr std::size_t gemm_mr = 4;
constexpr std::size_t gemm_kc = 256;

// C[MR x NR] += A_packed[kc x MR] * B[kc x NR] with ldb = n.
template <class T, std::size_t MR, std::size_t NR>
inline void micro_tile(std::size_t kc, const T* __restrict ap,
                       const T* __restrict b, std::size_t ldb,
                       T* __restrict c, std::size_t ldc) {
  T acc[MR][NR];
  for (std::size_t r = 0; r < MR; ++r)
    for (std::size_t j = 0; j < NR; ++j) acc[r][j] = c[r * ldc + j];
  for (std::size_t p = 0; p < kc; ++p) {
    const T* brow = b + p * ldb;
    for (std::size_t r = 0; r < MR; ++r) {
      const T av = ap[p * MR + r];
#pragma omp simd
      for (std::size_t j = 0; j < NR; ++j) acc[r][j] += av * brow[j];
    }
  }
  for (std::size_t r = 0; r < MR; ++r)
    for (std::size_t j = 0; j < NR; ++j) c[r * ldc + j] = acc[r][j];
}

// Ragged edge: rows < MR or cols < NR.
template <class T>
inline void edge_tile(std::size_t rows, std::size_t cols, std::size_t kc,
                      const T* ap, std::size_t mr, const T* b,
                      std::size_t ldb, T* c, std::size_t ldc) {
  for (std::size_t r = 0; r < rows; ++r) {
    T* crow = c + r * ldc;
    for (std::size_t p = 0; p < kc; ++p) {
      const T av = ap[p * mr + r];
      const T* brow = b + p * ldb;
      for (std::size_t j = 0; j < cols; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace detail

// Blocked GEMM. Row blocks of C are distributed over OpenMP threads when the
// problem is large enough and we are not already inside a parallel region.
template <class T>
void gemm(const GemmShape& s, T alpha, std::span<const T> a,
          std::span<const T> b, T beta, std::span<T> c) {
  const std::size_t m = s.m, n = s.n, k = s.k;
  if (beta == T(0)) {
    std::fill(c.begin(), c.begin() + m * n, T(0));
  } else if (beta != T(1)) {
    for (std::size_t i = 0; i < m * n; ++i) c[i] *= beta;
  }
  if (m == 0 || n == 0 || k == 0) return;

  constexpr std::size_t MR = detail::gemm_mr;
  constexpr std::size_t NR = detail::gemm_nr<T>;
  constexpr std::size_t KC = detail::gemm_kc;

  // B as k x n row-major.
  const T* bp = b.data();
  thread_local std::vector<T> b_scratch;
  if (s.trans_b) {
    b_scratch.resize(k * n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < k; ++p) b_scratch[p * n + j] = b[j * k + p];
    bp = b_scratch.data();
  }

  const std::size_t row_blocks = (m + MR - 1) / MR;
  thread_local std::vector<T> a_pack;

  for (std::size_t p0 = 0; p0 < k; p0 += KC) {
    const std::size_t kc = std::min(KC, k - p0);
    // A panel packed as [row_block][p][r], alpha folded in.
    a_pack.assign(row_blocks * kc * MR, T(0));
    for (std::size_t ib = 0; ib < row_blocks; ++ib) {
      const std::size_t i0 = ib * MR;
      const std::size_t rows = std::min(MR, m - i0);
      T* dst = a_pack.data() + ib * kc * MR;
      for (std::size_t p = 0; p < kc; ++p)
        for (std::size_t r = 0; r < rows; ++r) {
          const std::size_t i = i0 + r, q = p0 + p;
          dst[p * MR + r] =
              alpha * (s.trans_a ? a[q * m + i] : a[i * k + q]);
        }
    }
    const T* apack = a_pack.data();
    const T* bpanel = bp + p0 * n;
    T* cp = c.data();
    const bool threaded = detail::worth_threading(m * n * kc);
#pragma omp parallel for schedule(static) if (threaded)
    for (std::size_t ib = 0; ib < row_blocks; ++ib) {
      const std::size_t i0 = ib * MR;
      const std::size_t rows = std::min(MR, m - i0);
      const T* ap = apack + ib * kc * MR;
      std::size_t j0 = 0;
      if (rows == MR) {
        for (; j0 + NR <= n; j0 += NR)
          detail::micro_tile<T, MR, NR>(kc, ap, bpanel + j0, n,
                                        cp + i0 * n + j0, n);
      }
      if (j0 < n)
        detail::edge_tile<T>(rows, n - j0, kc, ap, MR, bpanel + j0, n,
                             cp + i0 * n + j0, n);
    }
  }
}

template <class T>
void softmax_rows(std::size_t rows, std::size_t cols, std::span<const T> in,
                  std::span<T> out) {
  const bool threaded = detail::worth_threading(rows * cols * 8);
#pragma omp parallel for schedule(static) if (threaded)
  for (std::size_t r = 0; r < rows; ++r) {
    const T* x = in.data() + r * cols;
    T* y = out.data() + r * cols;
    T mx = -std::numeric_limits<T>::infinity();
    for (std::size_t j = 0; j < cols; ++j) mx = std::max(mx, x[j]);
    T total = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      y[j] = std::exp(x[j] - mx);
      total += y[j];
    }
    const T inv = T(1) / total;
    for (std::size_t j = 0; j < cols; ++j) y[j] *= inv;
  }
}

// dX = Y * (dY - rowsum(dY * Y)), accumulated into dx.
template <class T>
void softmax_rows_backward(std::size_t rows, std::size_t cols,
                           std::span<const T> y, std::span<const T> dy,
                           std::span<T> dx) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* yr = y.data() + r * cols;
    const T* gr = dy.data() + r * cols;
    T dot = 0;
    for (std::size_t j = 0; j < cols; ++j) dot += yr[j] * gr[j];
    T* out = dx.data() + r * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += yr[j] * (gr[j] - dot);
  }
}

// out[j] += sum_r in[r, j]
template <class T>
void column_sums(std::size_t rows, std::size_t cols, std::span<const T> in,
                 std::span<T> out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* row = in.data() + r * cols;
#pragma omp simd
    for (std::size_t j = 0; j < cols; ++j) out[j] += row[j];
  }
}

}  // namespace sanp::kernels
