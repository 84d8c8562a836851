// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see dispatch.cpp).

#include "labelshift/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace labelshift::simd::detail {

namespace {

// exp(x) for four doubles: Cody-Waite reduction x = n ln2 + r, |r| <= ln2/2,
// degree-13 Taylor polynomial for e^r, then scaling by 2^n split in two
// factors so that gradual underflow and overflow come out right.
inline __m256d exp_pd(__m256d x) {
    const __m256d lo = _mm256_set1_pd(-746.0);
    const __m256d hi = _mm256_set1_pd(710.0);
    const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

    __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    // 1/k! for k = 13 .. 0
    __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m128i n1 = _mm_srai_epi32(n32, 1);
    const __m128i n2 = _mm_sub_epi32(n32, n1);
    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256d s1 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n1), bias), 52));
    const __m256d s2 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n2), bias), 52));

    __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, s1), s2);
    return _mm256_blendv_pd(result, x, nan_mask);
}

void exp_inplace(std::span<double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(v.data() + i, exp_pd(_mm256_loadu_pd(v.data() + i)));
    }
    for (; i < n; ++i) v[i] = std::exp(v[i]);
}

// Argument is formed as (-gamma * d) * d, matching the scalar reference.
inline __m256d neg_sq_scaled(__m256d d, __m256d neg_gamma) {
    return _mm256_mul_pd(_mm256_mul_pd(neg_gamma, d), d);
}

void gaussian_gram(std::span<const double> a, std::span<const double> b, double gamma,
                   double* out) {
    const std::size_t rows = a.size();
    const __m256d neg_gamma = _mm256_set1_pd(-gamma);
    for (std::size_t j = 0; j < b.size(); ++j) {
        const __m256d bj = _mm256_set1_pd(b[j]);
        double* col = out + j * rows;
        std::size_t i = 0;
        for (; i + 4 <= rows; i += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), bj);
            _mm256_storeu_pd(col + i, exp_pd(neg_sq_scaled(d, neg_gamma)));
        }
        for (; i < rows; ++i) {
            const double d = a[i] - b[j];
            col[i] = std::exp(-gamma * d * d);
        }
    }
}

void gaussian_weighted_sums(std::span<const double> a, std::span<const double> b,
                            std::span<const double> w, double gamma, std::span<double> out) {
    const std::size_t rows = a.size();
    const __m256d neg_gamma = _mm256_set1_pd(-gamma);
    std::size_t i = 0;
    for (; i + 4 <= rows; i += 4) {
        const __m256d ai = _mm256_loadu_pd(a.data() + i);
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < b.size(); ++j) {
            const __m256d d = _mm256_sub_pd(ai, _mm256_set1_pd(b[j]));
            const __m256d e = exp_pd(neg_sq_scaled(d, neg_gamma));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(w[j]), e));
        }
        _mm256_storeu_pd(out.data() + i, acc);
    }
    for (; i < rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = a[i] - b[j];
            acc += w[j] * std::exp(-gamma * d * d);
        }
        out[i] = acc;
    }
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{Isa::Avx2, &exp_inplace, &gaussian_gram,
                                   &gaussian_weighted_sums};
    return table;
}

}  // namespace labelshift::simd::detail
