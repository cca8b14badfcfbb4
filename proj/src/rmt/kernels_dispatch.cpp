#include <cstdlib>
#include <string_view>

#include "freelevy/rmt/kernels.hpp"

namespace freelevy::rmt {

const KernelTable* avx2_kernels_compiled();

const KernelTable* avx2_kernels() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return cpu_ok ? avx2_kernels_compiled() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable* table = [] {
    const char* env = std::getenv("FREELEVY_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
    const KernelTable* fast = avx2_kernels();
    return fast != nullptr ? fast : &scalar_kernels();
  }();
  return *table;
}

}  // namespace freelevy::rmt
