#include "kernels_impl.hpp"

namespace fdwifi::kernels::detail {

namespace {

double energy(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::norm(x[i]);
  return acc;
}

double diff_energy(const cplx* a, const cplx* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real() - b[i].real();
    const double im = a[i].imag() - b[i].imag();
    acc += re * re + im * im;
  }
  return acc;
}

// Plain component arithmetic; std::complex operator* adds NaN recovery that
// the vector path does not have.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

void residual_acc(const cplx* h, const cplx* w, const cplx* c, const cplx* x,
                  cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += mul(h[i] - mul(w[i], c[i]), x[i]);
}

void sub_product(const cplx* y, const cplx* e, const cplx* x, cplx* out,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] - mul(e[i], x[i]);
}

void divide(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::norm(b[i]);
    out[i] = {(a[i].real() * b[i].real() + a[i].imag() * b[i].imag()) / d,
              (a[i].imag() * b[i].real() - a[i].real() * b[i].imag()) / d};
  }
}

}  // namespace

const Table kScalarTable{"scalar", energy, diff_energy, residual_acc, sub_product, divide};

}  // namespace fdwifi::kernels::detail
