#pragma once

// Row update dst[i] = (dst[i] + s * src[i]) mod p used by the elimination
// in the rank oracle. A portable reference kernel and an AVX2 variant are
// both built; the variant is picked at runtime.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace linsys::kernels {

enum class Kernel { Auto, Scalar, Avx2 };

std::string_view to_string(Kernel kernel);
/// Accepts "auto", "scalar" and "avx2".
Kernel parse_kernel(std::string_view name);

/// True when the CPU supports AVX2 and the variant was compiled in.
bool avx2_available() noexcept;

/// Concrete kernel used for `requested` and modulus `p`. The AVX2 path
/// needs p < 2^16 so that dst + s * src fits in 32 bits.
Kernel resolve(Kernel requested, std::uint32_t p) noexcept;

/// Entries of dst and src must be < p, and s < p.
void axpy_mod_scalar(std::uint32_t* dst, const std::uint32_t* src, std::uint32_t s, std::size_t n,
                     std::uint32_t p) noexcept;
void axpy_mod_avx2(std::uint32_t* dst, const std::uint32_t* src, std::uint32_t s, std::size_t n,
                   std::uint32_t p) noexcept;

/// Dispatches on an already resolved kernel.
void axpy_mod(Kernel kernel, std::uint32_t* dst, const std::uint32_t* src, std::uint32_t s,
              std::size_t n, std::uint32_t p) noexcept;

}  // namespace linsys::kernels
