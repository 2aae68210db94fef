// AVX2 variants of the psi kernels. Compiled with -mavx2; only ever called
// after the runtime dispatch has confirmed CPU support.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "cvse/kernels.hpp"

namespace cvse::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

} // namespace

double psi_pair_sum_avx2(const double* a, std::size_t na, const double* b, std::size_t nb) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    double sum = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        const __m256d ai = _mm256_set1_pd(a[i]);
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= nb; j += 4) {
            const __m256d bj = _mm256_loadu_pd(b + j);
            const __m256d gt = _mm256_and_pd(_mm256_cmp_pd(ai, bj, _CMP_GT_OQ), one);
            const __m256d eq = _mm256_and_pd(_mm256_cmp_pd(ai, bj, _CMP_EQ_OQ), half);
            acc = _mm256_add_pd(acc, _mm256_add_pd(gt, eq));
        }
        sum += hsum(acc);
        for (; j < nb; ++j) {
            if (a[i] > b[j])
                sum += 1.0;
            else if (a[i] == b[j])
                sum += 0.5;
        }
    }
    return sum;
}

void psi_fill_avx2(double a, const double* b, std::size_t nb, double* out) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d av = _mm256_set1_pd(a);
    std::size_t j = 0;
    for (; j + 4 <= nb; j += 4) {
        const __m256d bj = _mm256_loadu_pd(b + j);
        const __m256d gt = _mm256_and_pd(_mm256_cmp_pd(av, bj, _CMP_GT_OQ), one);
        const __m256d eq = _mm256_and_pd(_mm256_cmp_pd(av, bj, _CMP_EQ_OQ), half);
        _mm256_storeu_pd(out + j, _mm256_add_pd(gt, eq));
    }
    for (; j < nb; ++j) {
        out[j] = a > b[j] ? 1.0 : (a == b[j] ? 0.5 : 0.0);
    }
}

} // namespace cvse::kernels

#endif // x86_64
