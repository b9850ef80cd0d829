#include <cstdlib>
#include <string_view>

#include "tables.hpp"

namespace scp::kernels {
namespace {

#if defined(SCP_HAVE_AVX2_KERNELS)
bool cpu_has_avx2() noexcept {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}
#endif

const KernelTable& select() noexcept {
    const auto tables = available_tables();
    if (const char* pin = std::getenv("SCP_KERNELS")) {
        const std::string_view want(pin);
        if (want == "scalar") return scalar_table();
        for (const KernelTable* t : tables) {
            if (t->name == want) return *t;
        }
    }
    return tables.empty() ? scalar_table() : *tables.front();
}

}  // namespace

std::vector<const KernelTable*> available_tables() {
    std::vector<const KernelTable*> out;
#if defined(SCP_HAVE_AVX2_KERNELS)
    if (cpu_has_avx2()) out.push_back(&avx2_table());
#endif
#if defined(SCP_HAVE_NEON_KERNELS)
    out.push_back(&neon_table());
#endif
    return out;
}

const KernelTable& active() noexcept {
    static const KernelTable& chosen = select();
    return chosen;
}

}  // namespace scp::kernels
