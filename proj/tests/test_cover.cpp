#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "recsketch/cover.hpp"

using namespace recsketch;

TEST_CASE("from_unsorted sorts by index and rejects duplicates") {
    Cover q = Cover::from_unsorted({{5, 2.0}, {1, 3.0}, {9, 0.0}});
    REQUIRE(q.size() == 3);
    CHECK(q.entries[0].index == 1);
    CHECK(q.entries[2].index == 9);
    CHECK(q.well_formed());
    CHECK_THROWS_AS(Cover::from_unsorted({{2, 1.0}, {2, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Cover::from_unsorted({{2, -1.0}}), std::invalid_argument);
}

TEST_CASE("weight lookup returns 0 for unlisted indices") {
    Cover q = Cover::from_unsorted({{4, 7.0}});
    CHECK(q.contains(4));
    CHECK(!q.contains(5));
    CHECK(q.weight_of(4) == 7.0);
    CHECK(q.weight_of(5) == 0.0);
}

TEST_CASE("cover_powers fixed points and exact powers") {
    Cover q = Cover::from_unsorted({{1, 1.0}, {2, 2.0}});
    Cover cubed = cover_powers(q, 3.0, 0.3);
    CHECK(cubed.weight_of(1) == doctest::Approx(1.0));
    CHECK(cubed.weight_of(2) == doctest::Approx(8.0));
}

TEST_CASE("power error budget: (1 + eps/(2k))^k stays within 1 + eps") {
    const double eps = 0.3;
    const double k = 3.0;
    const double eps_freq = eps / (2.0 * k);
    for (double f = 0.5; f <= 1e6; f *= 3.7) {
        double hi = std::pow((1.0 + eps_freq) * f, k) / std::pow(f, k);
        double lo = std::pow((1.0 - eps_freq) * f, k) / std::pow(f, k);
        CHECK(hi <= 1.0 + eps);
        CHECK(lo >= 1.0 - eps);
    }
}

TEST_CASE("cover_powers validates arguments") {
    Cover q = Cover::from_unsorted({{1, 2.0}});
    CHECK_THROWS_AS(cover_powers(q, 0.5, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(cover_powers(q, 3.0, 0.0), std::invalid_argument);
    Cover bad;
    bad.entries.push_back({1, -2.0});
    CHECK_THROWS_AS(cover_powers(bad, 3.0, 0.2), std::invalid_argument);
}
