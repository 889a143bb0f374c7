#include <arm_neon.h>

#include "navigator/kernels.hpp"

namespace navigator::kernels {

// Two q-registers emulate the eight reference lanes: lo = l0..l3, hi = l4..l7.
float dot_neon(const float* a, const float* b, std::size_t n) {
    float32x4_t lo = vdupq_n_f32(0.f);
    float32x4_t hi = vdupq_n_f32(0.f);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        lo = vfmaq_f32(lo, vld1q_f32(a + i), vld1q_f32(b + i));
        hi = vfmaq_f32(hi, vld1q_f32(a + i + 4), vld1q_f32(b + i + 4));
    }
    if (i < n) {
        float ta[8] = {0.f, 0.f, 0.f, 0.f, 0.f, 0.f, 0.f, 0.f};
        float tb[8] = {0.f, 0.f, 0.f, 0.f, 0.f, 0.f, 0.f, 0.f};
        for (std::size_t j = 0; i + j < n; ++j) {
            ta[j] = a[i + j];
            tb[j] = b[i + j];
        }
        lo = vfmaq_f32(lo, vld1q_f32(ta), vld1q_f32(tb));
        hi = vfmaq_f32(hi, vld1q_f32(ta + 4), vld1q_f32(tb + 4));
    }
    const float32x4_t quad = vaddq_f32(lo, hi);  // [l0+l4, l1+l5, l2+l6, l3+l7]
    const float even = vgetq_lane_f32(quad, 0) + vgetq_lane_f32(quad, 2);
    const float odd = vgetq_lane_f32(quad, 1) + vgetq_lane_f32(quad, 3);
    return even + odd;
}

void dot_batch_neon(const float* query, const float* rows, std::size_t n_rows, std::size_t dim, float* out) {
    for (std::size_t r = 0; r < n_rows; ++r) out[r] = dot_neon(query, rows + r * dim, dim);
}

}  // namespace navigator::kernels
