#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "scp/kernels.hpp"

using scp::kernels::KernelTable;

namespace {

std::vector<const KernelTable*> vector_tables() { return scp::kernels::available_tables(); }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
    }
    return true;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-0.25, 1.25);
    std::uniform_int_distribution<int> grid(0, 36);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (rng() % 8) {
            case 0: v[i] = grid(rng) / 36.0; break;
            case 1: v[i] = 1.0 - grid(rng) / 36.0; break;
            case 2: v[i] = std::numeric_limits<double>::quiet_NaN(); break;
            case 3: v[i] = (rng() % 2) ? 0.0 : -0.0; break;
            default: v[i] = u(rng);
        }
    }
    return v;
}

}  // namespace

TEST_CASE("scalar reference kernels") {
    const auto& k = scp::kernels::scalar_table();
    std::vector<double> out(3);
    k.complement(std::vector<double>{0.0, 0.25, 1.0}, out);
    CHECK(out == std::vector<double>{1.0, 0.75, 0.0});
    k.frequencies(std::vector<std::int32_t>{18, 9, 9}, 36.0, out);
    CHECK(out == std::vector<double>{0.5, 0.25, 0.25});
    CHECK(k.count_at_most(std::vector<double>{0.1, 0.5, 0.5, 0.9}, 0.5) == 3);
    CHECK(k.count_at_most(std::vector<double>{std::nan("")}, 1.0) == 0);
    CHECK(k.count_at_most({}, 1.0) == 0);
}

TEST_CASE("active backend is one of the compiled tables") {
    const auto& active = scp::kernels::active();
    bool found = active.name == "scalar";
    for (const auto* t : vector_tables()) found = found || (t == &active);
    CHECK(found);
    MESSAGE("active kernels: " << active.name);
}

TEST_CASE("vector kernels are bit-identical to scalar") {
    const auto& ref = scp::kernels::scalar_table();
    const auto tables = vector_tables();
    if (tables.empty()) MESSAGE("no vector backend on this CPU; equivalence is vacuous");
    std::mt19937_64 rng(4242);
    for (const KernelTable* t : tables) {
        CAPTURE(t->name);
        for (std::size_t n = 0; n <= 67; ++n) {
            for (int rep = 0; rep < 20; ++rep) {
                const auto in = random_values(rng, n);
                std::vector<double> a(n), b(n);
                ref.complement(in, a);
                t->complement(in, b);
                REQUIRE(same_bits(a, b));

                std::vector<std::int32_t> counts(n);
                for (auto& c : counts) c = static_cast<std::int32_t>(rng() % 1000);
                const double total = 1.0 + static_cast<double>(rng() % 500);
                ref.frequencies(counts, total, a);
                t->frequencies(counts, total, b);
                REQUIRE(same_bits(a, b));

                const double bound = (rep == 0) ? std::nan("") : in.empty() ? 0.5 : in[rng() % n];
                REQUIRE(ref.count_at_most(in, bound) == t->count_at_most(in, bound));
            }
        }
        // A long buffer, as in the sweep engine's gathered test scores.
        const auto big = random_values(rng, 100003);
        REQUIRE(ref.count_at_most(big, 0.75) == t->count_at_most(big, 0.75));
    }
}
