#include "ki/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace ki::simd {

#if !defined(KI_HAVE_AVX2)
const Kernels* avx2_kernels() noexcept {
    return nullptr;
}
#endif

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool cpu_supports(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(KI_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

namespace {

const Kernels& select() noexcept {
    if (const char* env = std::getenv("KI_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
        return scalar_kernels();
    }
    if (cpu_supports(Isa::Avx2) && avx2_kernels() != nullptr) {
        return *avx2_kernels();
    }
    return scalar_kernels();
}

}  // namespace

const Kernels& active() noexcept {
    static const Kernels& table = select();
    return table;
}

}  // namespace ki::simd
