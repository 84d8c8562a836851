#pragma once

// Data-parallel inner loops behind the Gaussian-kernel machinery.
//
// Every kernel has a scalar reference variant and, on x86-64, an AVX2/FMA
// variant. The active variant is chosen once per process: the environment
// variable LABELSHIFT_SIMD ("scalar" or "avx2") overrides, otherwise the best
// variant the CPU supports is used. Variants agree to within a few ulp; the
// scalar variant uses std::exp and is the reference.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace labelshift::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;

    /// v[i] <- exp(v[i]).
    void (*exp_inplace)(std::span<double> v);

    /// Column-major a.size() x b.size() block: out[i + j*a.size()] =
    /// exp(-gamma * (a[i] - b[j])^2).
    void (*gaussian_gram)(std::span<const double> a, std::span<const double> b, double gamma,
                          double* out);

    /// out[i] = sum_j w[j] * exp(-gamma * (a[i] - b[j])^2), summed in order of j.
    void (*gaussian_weighted_sums)(std::span<const double> a, std::span<const double> b,
                                   std::span<const double> w, double gamma, std::span<double> out);
};

std::string_view isa_name(Isa isa);

/// True when the variant is compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// All variants usable on this machine, scalar first.
std::vector<Isa> available_isas();

/// Table for a specific variant; throws std::invalid_argument if unavailable.
const KernelTable& kernels_for(Isa isa);

/// Table selected for this process (see header comment).
const KernelTable& active();

namespace detail {
const KernelTable& scalar_table();
#if defined(LABELSHIFT_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace labelshift::simd
