#include "linsys/kernels.hpp"

namespace linsys::kernels {

void axpy_mod_scalar(std::uint32_t* dst, const std::uint32_t* src, std::uint32_t s, std::size_t n,
                     std::uint32_t p) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = static_cast<std::uint32_t>((dst[i] + std::uint64_t{s} * src[i]) % p);
  }
}

}  // namespace linsys::kernels
