#pragma once

#include <cstddef>
#include <string_view>

namespace dynint::simd {

// Dense inner-loop kernels shared by the jet arithmetic, the small matrix
// routines and the residual reductions.
//
// Every variant must produce bit-identical results to the scalar reference:
// element-wise kernels perform one rounded multiply per product and one
// rounded add per sum (no fused multiply-add), and reductions accumulate in
// four interleaved lanes that are combined as (l0 + l1) + (l2 + l3) before
// the tail is added in index order.

struct KernelTable {
  std::string_view name;
  // out[i] = a * x[i]
  void (*scale)(double* out, double a, const double* x, std::size_t n);
  // out[i] = a * x[i] + b * y[i]
  void (*axpby)(double* out, double a, const double* x, double b, const double* y, std::size_t n);
  // out[i] = x[i] + y[i]
  void (*add)(double* out, const double* x, const double* y, std::size_t n);
  // out[i] = x[i] - y[i]
  void (*sub)(double* out, const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  // out = A x with A row-major rows x cols
  void (*gemv)(double* out, const double* a, const double* x, std::size_t rows, std::size_t cols);
};

const KernelTable& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_kernels();
#endif
#if defined(__aarch64__)
const KernelTable& neon_kernels();
#endif

// True when the running CPU can execute the AVX2 table.
bool cpu_has_avx2();

// Table chosen once per process: AVX2 or NEON when available, scalar
// otherwise. DYNINT_SIMD=scalar forces the reference path.
const KernelTable& active();

}  // namespace dynint::simd
