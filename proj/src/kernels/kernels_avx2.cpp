// AVX2+FMA variant of the injection kernel. Compiled with -mavx2 -mfma;
// callers must go through select_injection_kernel so the instructions only
// run on CPUs that have them.
#include "gridpf/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace gridpf::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

void injections_avx2(int n, const int* row_ptr, const int* col_idx,
                     const double* g, const double* b, const double* e,
                     const double* f, double* p_out, double* q_out) {
    for (int k = 0; k < n; ++k) {
        const int begin = row_ptr[k], end = row_ptr[k + 1];
        __m256d acc_re = _mm256_setzero_pd();
        __m256d acc_im = _mm256_setzero_pd();
        int idx = begin;
        for (; idx + 4 <= end; idx += 4) {
            const __m128i cols =
                _mm_loadu_si128(reinterpret_cast<const __m128i*>(col_idx + idx));
            const __m256d gv = _mm256_loadu_pd(g + idx);
            const __m256d bv = _mm256_loadu_pd(b + idx);
            const __m256d ev = _mm256_i32gather_pd(e, cols, 8);
            const __m256d fv = _mm256_i32gather_pd(f, cols, 8);
            acc_re = _mm256_fmadd_pd(gv, ev, acc_re);
            acc_re = _mm256_fnmadd_pd(bv, fv, acc_re);
            acc_im = _mm256_fmadd_pd(gv, fv, acc_im);
            acc_im = _mm256_fmadd_pd(bv, ev, acc_im);
        }
        double ire = hsum(acc_re), iim = hsum(acc_im);
        for (; idx < end; ++idx) {
            const int j = col_idx[idx];
            ire += g[idx] * e[j] - b[idx] * f[j];
            iim += g[idx] * f[j] + b[idx] * e[j];
        }
        p_out[k] = e[k] * ire + f[k] * iim;
        q_out[k] = f[k] * ire - e[k] * iim;
    }
}

}  // namespace gridpf::kernels

#endif
