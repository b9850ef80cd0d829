#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "scp/conformal.hpp"
#include "scp/error.hpp"

using namespace scp;

namespace {

std::vector<double> random_scores(std::mt19937_64& rng, std::size_t n, bool with_ties) {
    std::vector<double> s(n);
    if (with_ties) {
        // Multiples of 1/36, as produced by 36 samplings.
        std::uniform_int_distribution<int> c(0, 36);
        for (double& v : s) v = 1.0 - c(rng) / 36.0;
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : s) v = u(rng);
    }
    return s;
}

ClassDistribution random_distribution(std::mt19937_64& rng, std::size_t k, int p = 36) {
    std::vector<int> counts(k, 0);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    for (int i = 0; i < p; ++i) ++counts[pick(rng)];
    std::vector<double> probs(k);
    for (std::size_t i = 0; i < k; ++i) probs[i] = static_cast<double>(counts[i]) / p;
    return ClassDistribution(probs);
}

}  // namespace

TEST_CASE("nonconformity scores complement the frequencies") {
    CHECK(nonconformity_scores(ClassDistribution({1.0, 0.0, 0.0, 0.0})) == ScoreVector{0.0, 1.0, 1.0, 1.0});
    CHECK(nonconformity_scores(ClassDistribution({0.25, 0.25, 0.25, 0.25})) ==
          ScoreVector{0.75, 0.75, 0.75, 0.75});

    const auto s = nonconformity_scores(ClassDistribution({0.5, 0.25, 1.0 / 6.0, 1.0 / 12.0}));
    REQUIRE(s.size() == 4);
    CHECK(s[0] == 0.5);
    CHECK(s[1] == 0.75);
    CHECK(s[2] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(s[3] == doctest::Approx(11.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("calibration score reads the truth column") {
    CHECK(calibration_score(ClassDistribution({0.5, 0.5}), 0) == 0.5);
    CHECK(calibration_score(ClassDistribution({1.0, 0.0}), 0) == 0.0);
    CHECK(calibration_score(ClassDistribution({0.9, 0.1}), 1) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK_THROWS_AS(calibration_score(ClassDistribution({0.5, 0.5}), 2), std::out_of_range);
}

TEST_CASE("domain types reject invalid values") {
    CHECK_THROWS_AS(RiskLevel(0.0), ValidationError);
    CHECK_THROWS_AS(RiskLevel(1.0), ValidationError);
    CHECK_THROWS_AS(RiskLevel(-0.2), ValidationError);
    CHECK_NOTHROW(RiskLevel(1e-6));

    CHECK_THROWS_AS(ClassDistribution({1.0}), ValidationError);
    CHECK_THROWS_AS(ClassDistribution({0.5, 0.6}), ValidationError);
    CHECK_THROWS_AS(ClassDistribution({1.2, -0.2}), ValidationError);
    CHECK_NOTHROW(ClassDistribution({0.5, 0.5 + 5e-10}));

    CHECK_THROWS_AS(CalibrationScores({}), ValidationError);
    CHECK_THROWS_AS(CalibrationScores({0.5, 1.5}), ValidationError);
    CHECK_THROWS_AS(Threshold::at(1.01), ValidationError);
    CHECK_THROWS_AS(Threshold::include_all().tau(), std::logic_error);
}

TEST_CASE("conformal threshold picks the k-th smallest score") {
    const CalibrationScores cal({0.40, 0.10, 0.30, 0.20});
    CHECK(conformal_rank(4, RiskLevel(0.5)) == 3);
    CHECK(conformal_threshold(cal, RiskLevel(0.5)) == Threshold::at(0.30));

    CHECK(conformal_rank(4, RiskLevel(0.1)) == 5);
    CHECK(conformal_threshold(cal, RiskLevel(0.1)).is_include_all());

    const CalibrationScores ties({0.7, 0.7, 0.7});
    CHECK(conformal_threshold(ties, RiskLevel(0.2)).is_include_all());
    CHECK(conformal_threshold(ties, RiskLevel(0.5)) == Threshold::at(0.7));

    try {
        (void)threshold_from_sorted({}, RiskLevel(0.5));
        FAIL("expected an error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()) == "empty calibration set");
    }
}

TEST_CASE("conformal rank survives alpha representation error") {
    // Naive ceil((1 - 0.7) * 10) is 4 because the product is 3.0000000000000004.
    CHECK(conformal_rank(9, RiskLevel(0.7)) == 3);
    CHECK(conformal_rank(99, RiskLevel(0.7)) == 30);
    CHECK(conformal_rank(99, RiskLevel(0.1)) == 90);
    CHECK(conformal_rank(9, RiskLevel(0.2)) == 8);
    for (std::size_t n = 1; n <= 200; ++n) {
        for (int a = 1; a <= 99; ++a) {
            const double alpha = a / 100.0;
            REQUIRE(conformal_rank(n, RiskLevel(alpha)) == testing::rank_by_scan(n, alpha));
            // Exact integer arithmetic on the percent grid.
            const std::size_t num = static_cast<std::size_t>(100 - a) * (n + 1);
            REQUIRE(conformal_rank(n, RiskLevel(alpha)) == (num + 99) / 100);
        }
    }
}

TEST_CASE("prediction set keeps options scoring at most tau") {
    const ClassDistribution d({0.5, 0.25, 0.15, 0.10});
    CHECK(prediction_set(d, Threshold::at(0.8)) == PredictionSet({0, 1}));
    CHECK(prediction_set(d, Threshold::include_all()) == PredictionSet::full(4));
    // Option 0 scores 0.6 > 0.5, so nothing survives.
    CHECK(prediction_set(ClassDistribution({0.4, 0.3, 0.3}), Threshold::at(0.5)).empty());
    // Inclusive comparison at equality.
    CHECK(prediction_set(ClassDistribution({0.5, 0.5}), Threshold::at(0.5)) == PredictionSet({0, 1}));
    CHECK(prediction_set(ClassDistribution({0.5, 0.5}), Threshold::at(0.25)).empty());
}

TEST_CASE("romano upper bound") {
    CHECK(romano_upper_bound(99, RiskLevel(0.1)) == doctest::Approx(0.91).epsilon(1e-15));
    CHECK(romano_upper_bound(1, RiskLevel(0.5)) == 1.0);
    CHECK(romano_upper_bound(9, RiskLevel(0.2)) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK_THROWS_AS(romano_upper_bound(0, RiskLevel(0.2)), ValidationError);
}

TEST_CASE("threshold matches the brute-force definition") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::size_t> size(1, 50);
    std::uniform_real_distribution<double> alpha(0.001, 0.999);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto scores = random_scores(rng, size(rng), trial % 2 == 0);
        const RiskLevel level(alpha(rng));
        const std::size_t k = testing::rank_by_scan(scores.size(), level.alpha());
        const auto expected = testing::threshold_by_definition(scores, k);
        const Threshold got = conformal_threshold(CalibrationScores(scores), level);
        if (expected) {
            REQUIRE(got == Threshold::at(*expected));
        } else {
            REQUIRE(got.is_include_all());
        }
    }
}

TEST_CASE("threshold properties") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> size(1, 60);
    for (int trial = 0; trial < 500; ++trial) {
        auto scores = random_scores(rng, size(rng), trial % 3 != 0);
        const CalibrationScores cal(scores);

        SUBCASE("finite thresholds are calibration scores") {
            for (int a = 1; a < 100; a += 7) {
                const Threshold t = conformal_threshold(cal, RiskLevel(a / 100.0));
                if (!t.is_include_all()) {
                    CHECK(std::find(scores.begin(), scores.end(), t.tau()) != scores.end());
                }
            }
        }
        SUBCASE("permutation invariance") {
            const RiskLevel level(0.05 + 0.9 * (trial % 10) / 10.0);
            const Threshold base = conformal_threshold(cal, level);
            for (int p = 0; p < 5; ++p) {
                std::shuffle(scores.begin(), scores.end(), rng);
                REQUIRE(conformal_threshold(CalibrationScores(scores), level) == base);
            }
            std::sort(scores.begin(), scores.end());
            REQUIRE(threshold_from_sorted(scores, level) == base);
        }
        SUBCASE("monotone in alpha, and so are set sizes") {
            const ClassDistribution test = random_distribution(rng, 2 + trial % 6);
            Threshold prev = Threshold::include_all();
            std::size_t prev_size = test.size();
            for (int a = 1; a < 100; ++a) {
                const Threshold t = conformal_threshold(cal, RiskLevel(a / 100.0));
                REQUIRE_FALSE(prev < t);
                const std::size_t sz = prediction_set(test, t).size();
                REQUIRE(sz <= prev_size);
                prev = t;
                prev_size = sz;
            }
        }
    }
}

TEST_CASE("scores stay in range and membership matches the frequency form") {
    // With tau = 1 - c/P, option y is admitted iff counts[y] >= c. The
    // comparison is done on integers: in doubles, p >= 1 - tau can differ from
    // 1 - p <= tau by one ulp (e.g. p = 3/10).
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t k = 2 + trial % 9;
        const int p = 1 + trial % 60;
        std::vector<int> counts(k, 0);
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        for (int i = 0; i < p; ++i) ++counts[pick(rng)];
        std::vector<double> probs(k);
        for (std::size_t y = 0; y < k; ++y) probs[y] = static_cast<double>(counts[y]) / p;
        const ClassDistribution d(probs);
        for (double s : nonconformity_scores(d)) REQUIRE((s >= 0.0 && s <= 1.0));

        const int c = static_cast<int>(rng() % static_cast<unsigned>(p + 1));
        const double tau = 1.0 - static_cast<double>(c) / p;
        const PredictionSet set = prediction_set(d, Threshold::at(tau));
        for (std::size_t y = 0; y < k; ++y) REQUIRE(set.contains(y) == (counts[y] >= c));
    }
}
