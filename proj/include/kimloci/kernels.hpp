#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace kimloci::kernels {

// Largest modulus the row kernels accept. The Montgomery lanes keep values in
// [0, 4p) without per-step reductions, which needs 16*p^2 < 2^32 * p.
inline constexpr std::uint32_t max_modulus = (1u << 28) - 1;

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);
bool backend_available(Backend b);

// Backend in use for row_eval. Defaults to the best available one; the
// environment variable KIMLOCI_KERNEL (scalar|avx2|neon) overrides at startup.
Backend active_backend();

// Force a specific backend (throws std::invalid_argument if unavailable).
void set_backend(Backend b);
void reset_backend();

// out[i] = sum_k coeffs[k] * points[i]^k mod p, evaluated by Horner.
// Requires: 3 <= p <= max_modulus, p odd, ncoeffs >= 1, and all inputs < p.
void row_eval(const std::uint32_t* coeffs, std::size_t ncoeffs,
              const std::uint32_t* points, std::size_t npoints,
              std::uint32_t p, std::uint32_t* out);

inline std::vector<std::uint32_t> row_eval(const std::vector<std::uint32_t>& coeffs,
                                           const std::vector<std::uint32_t>& points,
                                           std::uint32_t p) {
    std::vector<std::uint32_t> out(points.size());
    row_eval(coeffs.data(), coeffs.size(), points.data(), points.size(), p, out.data());
    return out;
}

} // namespace kimloci::kernels
