// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"

namespace pointer_lab::kernels {

namespace {

const KernelTable kScalar{"scalar", detail::cgemm_scalar, detail::dgemv_scalar,
                          detail::ddot_scalar, detail::cdotc_scalar};

#ifdef POINTER_LAB_HAVE_AVX2
const KernelTable kAvx2{"avx2", detail::cgemm_avx2, detail::dgemv_avx2, detail::ddot_avx2,
                        detail::cdotc_avx2};

bool host_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable* initial_table() {
  const KernelTable* best = &kScalar;
  if (const KernelTable* v = avx2_kernels()) best = v;
  if (const char* env = std::getenv("POINTER_LAB_KERNELS")) {
    const std::string want{env};
    if (want == "scalar") return &kScalar;
    if (want == "avx2" && avx2_kernels() != nullptr) return avx2_kernels();
  }
  return best;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#ifdef POINTER_LAB_HAVE_AVX2
  static const bool ok = host_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

bool select_kernels(std::string_view name) {
  if (name == "scalar") {
    active_slot().store(&kScalar, std::memory_order_release);
    return true;
  }
  if (name == "avx2") {
    if (const KernelTable* v = avx2_kernels()) {
      active_slot().store(v, std::memory_order_release);
      return true;
    }
  }
  return false;
}

}  // namespace pointer_lab::kernels
