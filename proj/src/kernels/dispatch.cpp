#include <stdexcept>
#include <string>

#include "linsys/kernels.hpp"

namespace linsys::kernels {

std::string_view to_string(Kernel kernel) {
  switch (kernel) {
    case Kernel::Auto: return "auto";
    case Kernel::Scalar: return "scalar";
    case Kernel::Avx2: return "avx2";
  }
  return "auto";
}

Kernel parse_kernel(std::string_view name) {
  if (name == "auto") return Kernel::Auto;
  if (name == "scalar") return Kernel::Scalar;
  if (name == "avx2") return Kernel::Avx2;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

bool avx2_available() noexcept {
#if defined(LINSYS_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Kernel resolve(Kernel requested, std::uint32_t p) noexcept {
  bool simd_ok = avx2_available() && p < (1u << 16);
  if (requested == Kernel::Scalar || !simd_ok) return Kernel::Scalar;
  return Kernel::Avx2;
}

void axpy_mod(Kernel kernel, std::uint32_t* dst, const std::uint32_t* src, std::uint32_t s,
              std::size_t n, std::uint32_t p) noexcept {
#if defined(LINSYS_HAVE_AVX2)
  if (kernel == Kernel::Avx2) {
    axpy_mod_avx2(dst, src, s, n, p);
    return;
  }
#endif
  axpy_mod_scalar(dst, src, s, n, p);
}

}  // namespace linsys::kernels
