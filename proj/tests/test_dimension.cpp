#include <doctest.h>

#include "zaremba/dimension.hpp"

using namespace zaremba;

TEST_CASE("asymptotic dimension values") {
    DimensionEstimate e5 = hensley_estimate(5);
    CHECK(e5.method == "hensley-asymptotic");
    // 1 - (6/pi^2)/5 - (72/pi^4) log(5)/25
    CHECK(e5.value == doctest::Approx(0.830832).epsilon(1e-4));
    // the asymptotic climbs toward 1 as A grows
    CHECK(hensley_estimate(2).value < hensley_estimate(5).value);
    CHECK(hensley_estimate(5).value < hensley_estimate(50).value);
    CHECK(hensley_estimate(1000).value > 0.999);
    CHECK_THROWS_AS(hensley_estimate(1), std::domain_error);
}

TEST_CASE("reference dimension only for the canonical alphabet") {
    CHECK(reference_dimension(Alphabet{1, 2, 3, 4, 5}).has_value());
    CHECK(reference_dimension(Alphabet{1, 2, 3, 4, 5})->value == doctest::Approx(0.8368));
    CHECK(!reference_dimension(Alphabet{1, 2}).has_value());
}

TEST_CASE("fit recovers a planted growth exponent") {
    // counts generated from F(x) = 3 x^{2*0.7} exactly
    std::vector<uint64_t> grid{1000, 10000, 100000, 1000000};
    std::vector<uint64_t> counts;
    for (uint64_t x : grid) counts.push_back(uint64_t(3.0 * std::pow(double(x), 1.4)));
    DimensionEstimate e = fit_dimension_from_counts(grid, counts);
    CHECK(e.value == doctest::Approx(0.7).epsilon(1e-3));
    CHECK(e.residual < 1e-3);
    CHECK_THROWS_AS(fit_dimension_from_counts({10, 100}, {5, 50}), std::domain_error);
}

TEST_CASE("empirical fit on a real census, small scale") {
    DimensionEstimate e = fit_dimension(Alphabet{1, 2}, {100, 1000, 10000, 100000}, 4);
    // the {1,2} dimension is about 0.531
    CHECK(e.value > 0.45);
    CHECK(e.value < 0.60);
    CHECK(e.residual < 0.5);
}
