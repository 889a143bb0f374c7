#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace navigator::kernels {

// Every variant accumulates in the same order: eight lanes, lane j holding
// fma(a[i], b[i], acc) over i ≡ j (mod 8), a zero-padded tail, and the
// reduction ((l0+l4)+(l2+l6)) + ((l1+l5)+(l3+l7)). Results are therefore
// bit-identical across variants, which keeps top-k rankings identical too.

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

using DotFn = float (*)(const float* a, const float* b, std::size_t n);
/// out[r] = dot(query, rows + r * dim) for r in [0, n_rows).
using DotBatchFn = void (*)(const float* query, const float* rows, std::size_t n_rows, std::size_t dim, float* out);

struct KernelTable {
    Isa isa;
    DotFn dot;
    DotBatchFn dot_batch;
};

float dot_scalar(const float* a, const float* b, std::size_t n);
void dot_batch_scalar(const float* query, const float* rows, std::size_t n_rows, std::size_t dim, float* out);

#if defined(__x86_64__) || defined(_M_X64)
float dot_avx2(const float* a, const float* b, std::size_t n);
void dot_batch_avx2(const float* query, const float* rows, std::size_t n_rows, std::size_t dim, float* out);
#endif

#if defined(__aarch64__)
float dot_neon(const float* a, const float* b, std::size_t n);
void dot_batch_neon(const float* query, const float* rows, std::size_t n_rows, std::size_t dim, float* out);
#endif

/// Whether this build and CPU can run `isa`.
bool supported(Isa isa);

/// The table for `isa`; throws std::runtime_error when unsupported.
const KernelTable& table(Isa isa);

/// Best supported variant, chosen once per process. The environment
/// variable NAVIGATOR_ISA (`scalar`, `avx2`, `neon`) overrides the choice.
const KernelTable& active();

inline float dot(std::span<const float> a, std::span<const float> b) {
    return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

}  // namespace navigator::kernels
