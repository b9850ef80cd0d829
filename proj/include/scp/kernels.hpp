#pragma once
// Data-parallel inner loops of the calibration and sweep paths.
//
// Every backend must produce bit-identical output to the scalar reference:
// the operations are a subtraction, a division and an ordered comparison,
// all of which IEEE-754 rounds the same way in vector and scalar units.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace scp::kernels {

struct KernelTable {
    std::string_view name;
    /// out[i] = 1 - in[i]. Spans must have equal length.
    void (*complement)(std::span<const double> in, std::span<double> out);
    /// out[i] = counts[i] / total. Spans must have equal length.
    void (*frequencies)(std::span<const std::int32_t> counts, double total, std::span<double> out);
    /// Number of i with values[i] <= bound (NaN never counts).
    std::size_t (*count_at_most)(std::span<const double> values, double bound);
};

const KernelTable& scalar_table() noexcept;

/// Vector backends compiled into this binary and supported by the running CPU.
std::vector<const KernelTable*> available_tables();

/// Best available backend. The SCP_KERNELS environment variable ("scalar",
/// "avx2", "neon") pins a specific one when it is available.
const KernelTable& active() noexcept;

}  // namespace scp::kernels
