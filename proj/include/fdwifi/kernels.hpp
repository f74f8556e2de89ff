#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace fdwifi::kernels {

using cplx = std::complex<double>;

// Inner loops shared by the cancellation chain and the rate model. Every
// entry has a portable reference version and, on x86-64, an AVX2 version.
struct Table {
  std::string_view name;
  // sum of |x[i]|^2
  double (*energy)(const cplx* x, std::size_t n);
  // sum of |a[i] - b[i]|^2
  double (*diff_energy)(const cplx* a, const cplx* b, std::size_t n);
  // out[i] += (h[i] - w[i] * c[i]) * x[i]
  void (*residual_acc)(const cplx* h, const cplx* w, const cplx* c, const cplx* x,
                       cplx* out, std::size_t n);
  // out[i] = y[i] - e[i] * x[i]; out may alias y
  void (*sub_product)(const cplx* y, const cplx* e, const cplx* x, cplx* out,
                      std::size_t n);
  // out[i] = a[i] / b[i]
  void (*divide)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
};

enum class Isa { Scalar, Avx2 };

const Table& scalar();
// nullptr when the binary or the CPU lacks AVX2/FMA.
const Table* avx2();

// Table chosen once at startup: AVX2 when available, unless the environment
// variable FDWIFI_KERNELS=scalar is set.
const Table& active();

// Test hook; returns false when the requested ISA is unavailable.
bool force(Isa isa);

}  // namespace fdwifi::kernels
