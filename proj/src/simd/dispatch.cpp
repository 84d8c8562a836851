#include "labelshift/simd/kernels.hpp"

#include "labelshift/log.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace labelshift::simd {

namespace {

bool cpu_has_avx2() {
#if defined(LABELSHIFT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& select() {
    if (const char* env = std::getenv("LABELSHIFT_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return detail::scalar_table();
        if (want == "avx2") {
            if (isa_available(Isa::Avx2)) return kernels_for(Isa::Avx2);
            log::warn("LABELSHIFT_SIMD=avx2 requested but unavailable; using scalar kernels");
            return detail::scalar_table();
        }
        log::warn("unknown LABELSHIFT_SIMD value '" + want + "'; ignoring");
    }
    if (isa_available(Isa::Avx2)) return kernels_for(Isa::Avx2);
    return detail::scalar_table();
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2: {
            static const bool ok = cpu_has_avx2();
            return ok;
        }
    }
    return false;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::Scalar};
    if (isa_available(Isa::Avx2)) out.push_back(Isa::Avx2);
    return out;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa)) {
        throw std::invalid_argument("kernel variant '" + std::string(isa_name(isa)) +
                                    "' is not available on this machine");
    }
    switch (isa) {
        case Isa::Scalar: return detail::scalar_table();
        case Isa::Avx2:
#if defined(LABELSHIFT_HAVE_AVX2)
            return detail::avx2_table();
#else
            break;
#endif
    }
    return detail::scalar_table();
}

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace labelshift::simd
