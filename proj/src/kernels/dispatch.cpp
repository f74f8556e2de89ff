#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace fdwifi::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(FDWIFI_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* pick_default() {
  const char* env = std::getenv("FDWIFI_KERNELS");
  if (env && std::strcmp(env, "scalar") == 0) return &scalar();
  if (const Table* t = avx2()) return t;
  return &scalar();
}

std::atomic<const Table*>& slot() {
  static std::atomic<const Table*> current{pick_default()};
  return current;
}

}  // namespace

const Table& scalar() { return detail::kScalarTable; }

const Table* avx2() {
#if defined(FDWIFI_HAVE_AVX2_TU)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() { return *slot().load(std::memory_order_acquire); }

bool force(Isa isa) {
  const Table* t = isa == Isa::Scalar ? &scalar() : avx2();
  if (!t) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

}  // namespace fdwifi::kernels
