// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "navigator/kernels.hpp"

namespace navigator::kernels {

namespace {

inline __m256i tail_mask(std::size_t remaining) {
    alignas(32) static const int kMask[16] = {-1, -1, -1, -1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0};
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(kMask + 8 - remaining));
}

inline float reduce(__m256 acc) {
    // lanes [l0+l4, l1+l5, l2+l6, l3+l7]
    const __m128 quad = _mm_add_ps(_mm256_castps256_ps128(acc), _mm256_extractf128_ps(acc, 1));
    // [q0+q2, q1+q3]
    const __m128 pair = _mm_add_ps(quad, _mm_movehl_ps(quad, quad));
    return _mm_cvtss_f32(_mm_add_ss(pair, _mm_shuffle_ps(pair, pair, 0x55)));
}

}  // namespace

float dot_avx2(const float* a, const float* b, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) acc = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc);
    if (i < n) {
        const __m256i mask = tail_mask(n - i);
        acc = _mm256_fmadd_ps(_mm256_maskload_ps(a + i, mask), _mm256_maskload_ps(b + i, mask), acc);
    }
    return reduce(acc);
}

void dot_batch_avx2(const float* query, const float* rows, std::size_t n_rows, std::size_t dim, float* out) {
    // Four rows per pass share each query load.
    std::size_t r = 0;
    const std::size_t full = dim - dim % 8;
    for (; r + 4 <= n_rows; r += 4) {
        const float* r0 = rows + (r + 0) * dim;
        const float* r1 = rows + (r + 1) * dim;
        const float* r2 = rows + (r + 2) * dim;
        const float* r3 = rows + (r + 3) * dim;
        __m256 a0 = _mm256_setzero_ps(), a1 = _mm256_setzero_ps();
        __m256 a2 = _mm256_setzero_ps(), a3 = _mm256_setzero_ps();
        for (std::size_t i = 0; i < full; i += 8) {
            const __m256 q = _mm256_loadu_ps(query + i);
            a0 = _mm256_fmadd_ps(q, _mm256_loadu_ps(r0 + i), a0);
            a1 = _mm256_fmadd_ps(q, _mm256_loadu_ps(r1 + i), a1);
            a2 = _mm256_fmadd_ps(q, _mm256_loadu_ps(r2 + i), a2);
            a3 = _mm256_fmadd_ps(q, _mm256_loadu_ps(r3 + i), a3);
        }
        if (full < dim) {
            const __m256i mask = tail_mask(dim - full);
            const __m256 q = _mm256_maskload_ps(query + full, mask);
            a0 = _mm256_fmadd_ps(q, _mm256_maskload_ps(r0 + full, mask), a0);
            a1 = _mm256_fmadd_ps(q, _mm256_maskload_ps(r1 + full, mask), a1);
            a2 = _mm256_fmadd_ps(q, _mm256_maskload_ps(r2 + full, mask), a2);
            a3 = _mm256_fmadd_ps(q, _mm256_maskload_ps(r3 + full, mask), a3);
        }
        out[r + 0] = reduce(a0);
        out[r + 1] = reduce(a1);
        out[r + 2] = reduce(a2);
        out[r + 3] = reduce(a3);
    }
    for (; r < n_rows; ++r) out[r] = dot_avx2(query, rows + r * dim, dim);
}

}  // namespace navigator::kernels
