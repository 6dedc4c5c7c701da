#include "stiffode/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace stiffode::kernels {

namespace {

const Backend& select() {
    const char* mode = std::getenv("STIFFODE_SIMD");
    if (mode != nullptr && std::strcmp(mode, "scalar") == 0)
        return scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
    if (mode != nullptr && std::strcmp(mode, "avx2") == 0)
        return avx2_backend();
    if (cpu_supports_avx2()) return avx2_backend();
#endif
    return scalar_backend();
}

}  // namespace

const Backend& active() {
    static const Backend& backend = select();
    return backend;
}

}  // namespace stiffode::kernels
