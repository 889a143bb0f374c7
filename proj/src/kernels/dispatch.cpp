#include <cstdlib>
#include <stdexcept>
#include <string>

#include "navigator/kernels.hpp"

namespace navigator::kernels {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    static const KernelTable kScalar{Isa::Scalar, dot_scalar, dot_batch_scalar};
#if defined(__x86_64__) || defined(_M_X64)
    static const KernelTable kAvx2{Isa::Avx2, dot_avx2, dot_batch_avx2};
#endif
#if defined(__aarch64__)
    static const KernelTable kNeon{Isa::Neon, dot_neon, dot_batch_neon};
#endif
    if (!supported(isa)) throw std::runtime_error("kernel variant '" + std::string(isa_name(isa)) + "' unsupported here");
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::Avx2: return kAvx2;
#endif
#if defined(__aarch64__)
        case Isa::Neon: return kNeon;
#endif
        default: return kScalar;
    }
}

namespace {

const KernelTable& choose() {
    if (const char* forced = std::getenv("NAVIGATOR_ISA")) {
        for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
            if (isa_name(isa) == forced) return table(isa);
        throw std::runtime_error(std::string("unknown NAVIGATOR_ISA '") + forced + "'");
    }
    for (Isa isa : {Isa::Avx2, Isa::Neon})
        if (supported(isa)) return table(isa);
    return table(Isa::Scalar);
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& chosen = choose();
    return chosen;
}

}  // namespace navigator::kernels
