#include "hypowalk/kern.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hypowalk::kern {

bool avx2_supported() noexcept {
#if HYPOWALK_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels& select() {
  const char* env = std::getenv("HYPOWALK_ISA");
  const std::string want = env ? env : "";
  if (want == "scalar") return scalar_kernels();
  if (want == "avx2") {
#if HYPOWALK_HAVE_AVX2
    if (avx2_supported()) return avx2_kernels();
#endif
    throw std::runtime_error("HYPOWALK_ISA=avx2 requested but AVX2 is unavailable");
  }
  if (!want.empty())
    throw std::runtime_error("unknown HYPOWALK_ISA value: " + want);
#if HYPOWALK_HAVE_AVX2
  if (avx2_supported()) return avx2_kernels();
#endif
  return scalar_kernels();
}

}  // namespace hypowalk::kern
