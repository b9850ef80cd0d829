#include <doctest.h>

#include <algorithm>
#include <random>

#include "scp/answer_distribution.hpp"
#include "scp/error.hpp"

using namespace scp;

namespace {

QuestionRecord make(std::string id, std::vector<std::int32_t> counts, std::size_t truth) {
    QuestionRecord r;
    r.id = std::move(id);
    for (std::size_t i = 0; i < counts.size(); ++i) r.options.push_back(std::string(1, static_cast<char>('A' + i)));
    r.counts = std::move(counts);
    r.truth_index = truth;
    return r;
}

}  // namespace

TEST_CASE("frequency distribution divides by P") {
    const auto d = frequency_distribution(make("q", {18, 9, 6, 3}, 0));
    CHECK(d[0] == 0.5);
    CHECK(d[1] == 0.25);
    CHECK(d[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(d[3] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));

    const auto one_hot = frequency_distribution(make("q", {36, 0, 0, 0}, 0));
    CHECK(std::vector<double>(one_hot.probs().begin(), one_hot.probs().end()) ==
          std::vector<double>{1.0, 0.0, 0.0, 0.0});

    const auto flat = frequency_distribution(make("q", {12, 12, 12}, 0));
    for (double p : flat.probs()) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(frequency_distribution(make("q", {0, 0}, 0)), ValidationError);
}

TEST_CASE("frequency distributions are always valid") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 3000; ++t) {
        const std::size_t k = 2 + rng() % 12;
        const int p = 1 + static_cast<int>(rng() % 200);
        std::vector<std::int32_t> counts(k, 0);
        for (int i = 0; i < p; ++i) ++counts[rng() % k];
        // Constructing ClassDistribution re-checks range and the 1e-9 sum.
        REQUIRE_NOTHROW(frequency_distribution(make("q", counts, 0)));
    }
}

TEST_CASE("record validation names the record and rule") {
    auto message = [](const QuestionRecord& r, std::optional<std::uint32_t> p) {
        try {
            validate_record(r, p);
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(make("q1", {18, 9, 6, 3}, 0), 36).empty());
    CHECK(message(make("q2", {18, 9, 6, 2}, 0), 36).find("counts sum ≠ P") != std::string::npos);
    CHECK(message(make("q2", {18, 9, 6, 2}, 0), 36).find("'q2'") != std::string::npos);
    CHECK(message(make("q3", {36}, 0), 36).find("at least 2 options") != std::string::npos);
    CHECK(message(make("q4", {30, 6}, 2), 36).find("truth index") != std::string::npos);
    CHECK(message(make("q5", {40, -4}, 0), 36).find("negative") != std::string::npos);
    auto mismatched = make("q6", {30, 6}, 0);
    mismatched.options.push_back("C");
    CHECK(message(mismatched, 36).find("counts length") != std::string::npos);
}

TEST_CASE("dataset enforces shared P and unique ids") {
    CHECK_NOTHROW(Dataset({make("a", {30, 6}, 0), make("b", {1, 35}, 1)}, 36));
    CHECK_THROWS_AS(Dataset({make("a", {30, 6}, 0), make("b", {1, 34}, 1)}, 36), ValidationError);
    CHECK_THROWS_AS(Dataset({make("a", {30, 6}, 0), make("a", {1, 35}, 1)}, 36), ValidationError);
    CHECK(Dataset({}, 36).empty());
}

TEST_CASE("filter drops questions never answered correctly") {
    const Dataset data({make("gone", {0, 36}, 0), make("kept", {1, 35}, 0), make("also", {20, 16}, 1)}, 36);
    const auto [kept, discarded] = filter_unanswerable(data);
    CHECK(discarded == 1);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].id == "kept");
    CHECK(kept[1].id == "also");
    CHECK(kept.sampling_count() == 36);

    const Dataset clean({make("a", {30, 6}, 0), make("b", {6, 30}, 1), make("c", {18, 18}, 0)}, 36);
    const auto same = filter_unanswerable(clean);
    CHECK(same.discarded == 0);
    REQUIRE(same.data.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(same.data[i].id == clean[i].id);
}

TEST_CASE("filter is idempotent and order preserving") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        std::vector<QuestionRecord> recs;
        const std::size_t n = rng() % 40;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::int32_t> counts(4, 0);
            for (int s = 0; s < 36; ++s) ++counts[rng() % (1 + rng() % 4)];
            recs.push_back(make("r" + std::to_string(i), counts, rng() % 4));
        }
        const Dataset data(recs, 36);
        const auto once = filter_unanswerable(data);
        const auto twice = filter_unanswerable(once.data);
        REQUIRE(twice.discarded == 0);
        REQUIRE(twice.data.size() == once.data.size());
        REQUIRE(once.data.size() + once.discarded == data.size());

        // Subsequence check: ids appear in input order.
        std::size_t j = 0;
        for (const auto& r : once.data.records()) {
            while (j < data.size() && data[j].id != r.id) ++j;
            REQUIRE(j < data.size());
            REQUIRE(r.counts[r.truth_index] > 0);
            ++j;
        }
    }
}
