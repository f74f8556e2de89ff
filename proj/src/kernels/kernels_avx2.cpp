#include "kernels_impl.hpp"

#if defined(FDWIFI_HAVE_AVX2_TU)

#include <immintrin.h>

namespace fdwifi::kernels::detail {

namespace {

// Two complex doubles per register, interleaved re/im as std::complex stores them.
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline cplx mul1(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

double energy(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

double diff_energy(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d d = _mm256_sub_pd(load2(a + i), load2(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(a[i] - b[i]);
  return s;
}

void residual_acc(const cplx* h, const cplx* w, const cplx* c, const cplx* x,
                  cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d r = _mm256_sub_pd(load2(h + i), cmul(load2(w + i), load2(c + i)));
    store2(out + i, _mm256_add_pd(load2(out + i), cmul(r, load2(x + i))));
  }
  for (; i < n; ++i) out[i] += mul1(h[i] - mul1(w[i], c[i]), x[i]);
}

void sub_product(const cplx* y, const cplx* e, const cplx* x, cplx* out,
                 std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    store2(out + i, _mm256_sub_pd(load2(y + i), cmul(load2(e + i), load2(x + i))));
  for (; i < n; ++i) out[i] = y[i] - mul1(e[i], x[i]);
}

void divide(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d bv = load2(b + i);
    const __m256d sq = _mm256_mul_pd(bv, bv);
    const __m256d den = _mm256_hadd_pd(sq, sq);
    const __m256d num = cmul(load2(a + i), _mm256_xor_pd(bv, conj_mask));
    store2(out + i, _mm256_div_pd(num, den));
  }
  for (; i < n; ++i) {
    const double d = std::norm(b[i]);
    out[i] = {(a[i].real() * b[i].real() + a[i].imag() * b[i].imag()) / d,
              (a[i].imag() * b[i].real() - a[i].real() * b[i].imag()) / d};
  }
}

}  // namespace

const Table kAvx2Table{"avx2", energy, diff_energy, residual_acc, sub_product, divide};

}  // namespace fdwifi::kernels::detail

#endif
