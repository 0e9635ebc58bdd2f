// AVX2/FMA complex kernels. Columns are contiguous (column-major), so the
// vector direction is down a column: one __m256d holds two interleaved
// complex doubles, and an odd trailing row is handled with __m128d.
//
// The complex product uses the fmaddsub trick: with a = [ar, ai, …],
// swap(a) = [ai, ar, …], and broadcasts br, bi of the scalar b,
// fmaddsub(a, br, swap(a)·bi) = [ar·br − ai·bi, ai·br + ar·bi, …] = a·b.

#include <immintrin.h>

#include "hamdist/kernels.hpp"

namespace hamdist::kernels::detail {

namespace {

void matmul_avx2(const Complex* a, const Complex* b, Complex* c, int n) {
    const auto* ad = reinterpret_cast<const double*>(a);
    auto* cd = reinterpret_cast<double*>(c);
    const __m256d zero = _mm256_setzero_pd();

    for (int j = 0; j < n; ++j) {
        double* cj = cd + 2 * static_cast<std::ptrdiff_t>(j) * n;
        int i = 0;
        for (; i + 2 <= n; i += 2) _mm256_storeu_pd(cj + 2 * i, zero);
        if (i < n) _mm_storeu_pd(cj + 2 * i, _mm_setzero_pd());

        for (int k = 0; k < n; ++k) {
            const Complex bkj = b[k + static_cast<std::ptrdiff_t>(j) * n];
            const __m256d br = _mm256_set1_pd(bkj.real());
            const __m256d bi = _mm256_set1_pd(bkj.imag());
            const double* ak = ad + 2 * static_cast<std::ptrdiff_t>(k) * n;
            i = 0;
            for (; i + 2 <= n; i += 2) {
                const __m256d av = _mm256_loadu_pd(ak + 2 * i);
                const __m256d sw = _mm256_permute_pd(av, 0x5);
                const __m256d prod =
                    _mm256_fmaddsub_pd(av, br, _mm256_mul_pd(sw, bi));
                const __m256d acc = _mm256_loadu_pd(cj + 2 * i);
                _mm256_storeu_pd(cj + 2 * i, _mm256_add_pd(acc, prod));
            }
            if (i < n) {
                const __m128d av = _mm_loadu_pd(ak + 2 * i);
                const __m128d sw = _mm_permute_pd(av, 0x1);
                const __m128d br1 = _mm256_castpd256_pd128(br);
                const __m128d bi1 = _mm256_castpd256_pd128(bi);
                const __m128d prod = _mm_fmaddsub_pd(av, br1, _mm_mul_pd(sw, bi1));
                const __m128d acc = _mm_loadu_pd(cj + 2 * i);
                _mm_storeu_pd(cj + 2 * i, _mm_add_pd(acc, prod));
            }
        }
    }
}

void matvec_avx2(const Complex* a, const Complex* x, Complex* y, int n) {
    const auto* ad = reinterpret_cast<const double*>(a);
    auto* yd = reinterpret_cast<double*>(y);
    const __m256d zero = _mm256_setzero_pd();

    int i = 0;
    for (; i + 2 <= n; i += 2) _mm256_storeu_pd(yd + 2 * i, zero);
    if (i < n) _mm_storeu_pd(yd + 2 * i, _mm_setzero_pd());

    for (int k = 0; k < n; ++k) {
        const Complex xk = x[k];
        const __m256d xr = _mm256_set1_pd(xk.real());
        const __m256d xi = _mm256_set1_pd(xk.imag());
        const double* ak = ad + 2 * static_cast<std::ptrdiff_t>(k) * n;
        i = 0;
        for (; i + 2 <= n; i += 2) {
            const __m256d av = _mm256_loadu_pd(ak + 2 * i);
            const __m256d sw = _mm256_permute_pd(av, 0x5);
            const __m256d prod = _mm256_fmaddsub_pd(av, xr, _mm256_mul_pd(sw, xi));
            const __m256d acc = _mm256_loadu_pd(yd + 2 * i);
            _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(acc, prod));
        }
        if (i < n) {
            const __m128d av = _mm_loadu_pd(ak + 2 * i);
            const __m128d sw = _mm_permute_pd(av, 0x1);
            const __m128d xr1 = _mm256_castpd256_pd128(xr);
            const __m128d xi1 = _mm256_castpd256_pd128(xi);
            const __m128d prod = _mm_fmaddsub_pd(av, xr1, _mm_mul_pd(sw, xi1));
            const __m128d acc = _mm_loadu_pd(yd + 2 * i);
            _mm_storeu_pd(yd + 2 * i, _mm_add_pd(acc, prod));
        }
    }
}

} // namespace

const Dispatch& avx2_impl() {
    static const Dispatch d{"avx2", &matmul_avx2, &matvec_avx2};
    return d;
}

} // namespace hamdist::kernels::detail
