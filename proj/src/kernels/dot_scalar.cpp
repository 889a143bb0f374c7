#include <cmath>

#include "navigator/kernels.hpp"

namespace navigator::kernels {

float dot_scalar(const float* a, const float* b, std::size_t n) {
    float lane[8] = {0.f, 0.f, 0.f, 0.f, 0.f, 0.f, 0.f, 0.f};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        for (std::size_t j = 0; j < 8; ++j) lane[j] = std::fma(a[i + j], b[i + j], lane[j]);
    if (i < n) {
        // Zero-padded tail, as the masked vector loads see it.
        for (std::size_t j = 0; j < 8; ++j) {
            const float x = i + j < n ? a[i + j] : 0.f;
            const float y = i + j < n ? b[i + j] : 0.f;
            lane[j] = std::fma(x, y, lane[j]);
        }
    }
    return ((lane[0] + lane[4]) + (lane[2] + lane[6])) + ((lane[1] + lane[5]) + (lane[3] + lane[7]));
}

void dot_batch_scalar(const float* query, const float* rows, std::size_t n_rows, std::size_t dim, float* out) {
    for (std::size_t r = 0; r < n_rows; ++r) out[r] = dot_scalar(query, rows + r * dim, dim);
}

}  // namespace navigator::kernels
