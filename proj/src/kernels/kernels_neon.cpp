#include <arm_neon.h>

#include "tables.hpp"

namespace scp::kernels {
namespace {

void complement(std::span<const double> in, std::span<double> out) {
    const std::size_t n = in.size();
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out.data() + i, vsubq_f64(one, vld1q_f64(in.data() + i)));
    for (; i < n; ++i) out[i] = 1.0 - in[i];
}

void frequencies(std::span<const std::int32_t> counts, double total, std::span<double> out) {
    const std::size_t n = counts.size();
    const float64x2_t denom = vdupq_n_f64(total);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const int32x2_t c = vld1_s32(counts.data() + i);
        const float64x2_t v = vcvtq_f64_s64(vmovl_s32(c));
        vst1q_f64(out.data() + i, vdivq_f64(v, denom));
    }
    for (; i < n; ++i) out[i] = static_cast<double>(counts[i]) / total;
}

std::size_t count_at_most(std::span<const double> values, double bound) {
    const std::size_t n = values.size();
    const float64x2_t b = vdupq_n_f64(bound);
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // Lanes are all-ones on hit; shifting right by 63 turns them into 1.
        acc = vaddq_u64(acc, vshrq_n_u64(vcleq_f64(vld1q_f64(values.data() + i), b), 63));
    }
    std::size_t hits = static_cast<std::size_t>(vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1));
    for (; i < n; ++i) hits += (values[i] <= bound) ? 1 : 0;
    return hits;
}

}  // namespace

const KernelTable& neon_table() noexcept {
    static const KernelTable table{"neon", &complement, &frequencies, &count_at_most};
    return table;
}

}  // namespace scp::kernels
