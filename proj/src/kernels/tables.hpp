#pragma once

#include "scp/kernels.hpp"

namespace scp::kernels {

#if defined(SCP_HAVE_AVX2_KERNELS)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(SCP_HAVE_NEON_KERNELS)
const KernelTable& neon_table() noexcept;
#endif

}  // namespace scp::kernels
