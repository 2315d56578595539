#include "kimloci/kernels.hpp"

#include "mont32.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace kimloci::kernels {

void row_eval_scalar(const Mont32& mont, const std::uint32_t* cm, std::size_t n,
                     const std::uint64_t* zm, std::size_t m, std::uint32_t* out) {
    std::size_t i = 0;
    // Four independent Horner chains to hide multiply latency.
    for (; i + 4 <= m; i += 4) {
        std::uint32_t z0 = static_cast<std::uint32_t>(zm[i]);
        std::uint32_t z1 = static_cast<std::uint32_t>(zm[i + 1]);
        std::uint32_t z2 = static_cast<std::uint32_t>(zm[i + 2]);
        std::uint32_t z3 = static_cast<std::uint32_t>(zm[i + 3]);
        std::uint32_t a0 = cm[n - 1], a1 = a0, a2 = a0, a3 = a0;
        for (std::size_t k = n - 1; k-- > 0;) {
            std::uint32_t c = cm[k];
            a0 = mont.mul(a0, z0) + c;
            a1 = mont.mul(a1, z1) + c;
            a2 = mont.mul(a2, z2) + c;
            a3 = mont.mul(a3, z3) + c;
        }
        out[i] = mont.from(a0);
        out[i + 1] = mont.from(a1);
        out[i + 2] = mont.from(a2);
        out[i + 3] = mont.from(a3);
    }
    for (; i < m; ++i) {
        std::uint32_t z = static_cast<std::uint32_t>(zm[i]);
        std::uint32_t a = cm[n - 1];
        for (std::size_t k = n - 1; k-- > 0;) a = mont.mul(a, z) + cm[k];
        out[i] = mont.from(a);
    }
}

namespace {

using RowFn = void (*)(const Mont32&, const std::uint32_t*, std::size_t,
                       const std::uint64_t*, std::size_t, std::uint32_t*);

RowFn backend_fn(Backend b) {
    switch (b) {
        case Backend::scalar: return &row_eval_scalar;
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2: return &row_eval_avx2;
#endif
#if defined(__aarch64__)
        case Backend::neon: return &row_eval_neon;
#endif
        default: return nullptr;
    }
}

Backend detect_default() {
    if (const char* env = std::getenv("KIMLOCI_KERNEL")) {
        std::string want(env);
        for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
            if (want == backend_name(b) && backend_available(b)) return b;
        }
        // Unknown or unavailable override: fall through to detection.
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (backend_available(Backend::avx2)) return Backend::avx2;
#endif
#if defined(__aarch64__)
    if (backend_available(Backend::neon)) return Backend::neon;
#endif
    return Backend::scalar;
}

Backend& current() {
    static Backend b = detect_default();
    return b;
}

} // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

bool backend_available(Backend b) {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() { return current(); }

void set_backend(Backend b) {
    if (!backend_available(b)) {
        throw std::invalid_argument(std::string("kernel backend unavailable: ") + backend_name(b));
    }
    current() = b;
}

void reset_backend() { current() = detect_default(); }

void row_eval(const std::uint32_t* coeffs, std::size_t ncoeffs,
              const std::uint32_t* points, std::size_t npoints,
              std::uint32_t p, std::uint32_t* out) {
    if (ncoeffs == 0) throw std::invalid_argument("row_eval: need at least one coefficient");
    if (p < 3 || (p & 1) == 0 || p > max_modulus) {
        throw std::invalid_argument("row_eval: modulus out of range");
    }
    Mont32 mont(p);
    std::vector<std::uint32_t> cm(ncoeffs);
    for (std::size_t k = 0; k < ncoeffs; ++k) cm[k] = mont.to(coeffs[k]);
    std::vector<std::uint64_t> zm(npoints);
    for (std::size_t i = 0; i < npoints; ++i) zm[i] = mont.to(points[i]);
    backend_fn(current())(mont, cm.data(), ncoeffs, zm.data(), npoints, out);
}

} // namespace kimloci::kernels
