#include "tables.hpp"

namespace scp::kernels {
namespace {

void complement(std::span<const double> in, std::span<double> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = 1.0 - in[i];
}

void frequencies(std::span<const std::int32_t> counts, double total, std::span<double> out) {
    for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(counts[i]) / total;
}

std::size_t count_at_most(std::span<const double> values, double bound) {
    std::size_t n = 0;
    for (double v : values) n += (v <= bound) ? 1 : 0;
    return n;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
    static const KernelTable table{"scalar", &complement, &frequencies, &count_at_most};
    return table;
}

}  // namespace scp::kernels
