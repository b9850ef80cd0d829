// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <bit>

#include "tables.hpp"

namespace scp::kernels {
namespace {

void complement(std::span<const double> in, std::span<double> out) {
    const std::size_t n = in.size();
    const double* src = in.data();
    double* dst = out.data();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d a = _mm256_loadu_pd(src + i);
        __m256d b = _mm256_loadu_pd(src + i + 4);
        _mm256_storeu_pd(dst + i, _mm256_sub_pd(one, a));
        _mm256_storeu_pd(dst + i + 4, _mm256_sub_pd(one, b));
    }
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_sub_pd(one, _mm256_loadu_pd(src + i)));
    }
    for (; i < n; ++i) dst[i] = 1.0 - src[i];
}

void frequencies(std::span<const std::int32_t> counts, double total, std::span<double> out) {
    const std::size_t n = counts.size();
    const std::int32_t* src = counts.data();
    double* dst = out.data();
    const __m256d denom = _mm256_set1_pd(total);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i c = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i));
        _mm256_storeu_pd(dst + i, _mm256_div_pd(_mm256_cvtepi32_pd(c), denom));
    }
    for (; i < n; ++i) dst[i] = static_cast<double>(src[i]) / total;
}

std::size_t count_at_most(std::span<const double> values, double bound) {
    const std::size_t n = values.size();
    const double* src = values.data();
    const __m256d b = _mm256_set1_pd(bound);
    std::size_t hits = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const int m0 = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(src + i), b, _CMP_LE_OQ));
        const int m1 = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(src + i + 4), b, _CMP_LE_OQ));
        hits += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(m0 | (m1 << 4))));
    }
    for (; i + 4 <= n; i += 4) {
        const int m = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(src + i), b, _CMP_LE_OQ));
        hits += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(m)));
    }
    for (; i < n; ++i) hits += (src[i] <= bound) ? 1 : 0;
    return hits;
}

}  // namespace

const KernelTable& avx2_table() noexcept {
    static const KernelTable table{"avx2", &complement, &frequencies, &count_at_most};
    return table;
}

}  // namespace scp::kernels
