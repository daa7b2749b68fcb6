#include "oracles.hpp"

#include "stefan1d/errors.hpp"
#include "stefan1d/measure.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace stefan1d;

TEST_CASE("indicator mass and first moment") {
    const auto mu = StepMeasure::indicator(0.0, std::sqrt(0.75), 0.99);
    CHECK(mu.mass() == doctest::Approx(0.99 * std::sqrt(0.75)).epsilon(1e-15));
    CHECK(mu.first_moment() == doctest::Approx(0.37125).epsilon(1e-14));

    const auto nu = StepMeasure::indicator(-0.5, 1.0, 0.99);
    CHECK(nu.mass() == doctest::Approx(1.485).epsilon(1e-15));
    CHECK(nu.first_moment() == doctest::Approx(0.37125).epsilon(1e-14));
}

TEST_CASE("empty measure") {
    const StepMeasure mu;
    CHECK(mu.empty());
    CHECK(mu.mass() == 0.0);
    CHECK(mu.first_moment() == 0.0);
    CHECK(mu.sup_density() == 0.0);
    CHECK(mu.support_intervals().empty());
    CHECK_THROWS_AS(mu.quantile(0.5), RangeError);
    CHECK(StepMeasure::indicator(1.0, 1.0).empty());
}

TEST_CASE("make rejects malformed input and names the index") {
    const double br[] = {0.0, 1.0, 0.5};
    const double v2[] = {1.0, 1.0};
    try {
        (void)StepMeasure::make(br, v2);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.index() == 2);
    }

    const double ok_br[] = {0.0, 1.0, 2.0};
    const double neg[] = {0.5, -0.1};
    try {
        (void)StepMeasure::make(ok_br, neg);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.index() == 1);
    }

    const double short_v[] = {1.0};
    CHECK_THROWS_AS((void)StepMeasure::make(ok_br, short_v), ValidationError);
    const double nan_v[] = {NAN, 1.0};
    CHECK_THROWS_AS((void)StepMeasure::make(ok_br, nan_v), ValidationError);
}

TEST_CASE("canonical form merges equal cells and trims zero ends") {
    const double br[] = {-1.0, 0.0, 0.5, 1.0, 2.0};
    const double v[] = {0.0, 0.7, 0.7, 0.0};
    const auto mu = StepMeasure::make(br, v);
    REQUIRE(mu.cells() == 1);
    CHECK(mu.breaks()[0] == 0.0);
    CHECK(mu.breaks()[1] == 1.0);
    CHECK(mu == StepMeasure::indicator(0.0, 1.0, 0.7));
}

TEST_CASE("union of overlapping blocks stacks") {
    const Interval blocks[] = {{0.0, 2.0}, {1.0, 3.0}, {5.0, 5.0}};
    const auto mu = StepMeasure::union_of(blocks);
    CHECK(mu.density_at(0.5) == 1.0);
    CHECK(mu.density_at(1.5) == 2.0);
    CHECK(mu.density_at(2.5) == 1.0);
    CHECK(mu.mass() == doctest::Approx(4.0));
    CHECK(mu.sup_density() == 2.0);
}

TEST_CASE("cdf and quantile are inverse") {
    const double br[] = {-1.0, 0.0, 0.5, 2.0};
    const double v[] = {0.3, 0.0, 0.8};
    const auto mu = StepMeasure::make(br, v);
    CHECK(mu.cdf(-2.0) == 0.0);
    CHECK(mu.cdf(0.25) == doctest::Approx(0.3));
    CHECK(mu.cdf(3.0) == doctest::Approx(mu.mass()));
    for (double u : {0.0, 0.1, 0.3, 0.5, 1.0, mu.mass()}) {
        CHECK(mu.cdf(mu.quantile(u)) == doctest::Approx(u).epsilon(1e-12));
    }
    // The gap (0, 0.5) carries no mass: the quantile at its level is its left end.
    CHECK(mu.quantile(0.3) == doctest::Approx(0.0));
    CHECK_THROWS_AS(mu.quantile(-0.1), RangeError);
    CHECK_THROWS_AS(mu.quantile(mu.mass() + 0.1), RangeError);
}

TEST_CASE("restriction and L1 distances") {
    const auto a = StepMeasure::indicator(0.0, 2.0, 0.5);
    const auto b = StepMeasure::indicator(1.0, 3.0, 1.0);
    CHECK(a.restricted_to(0.5, 1.0).mass() == doctest::Approx(0.25));
    CHECK(positive_part_l1(a, b) == doctest::Approx(0.5));
    CHECK(positive_part_l1(b, a) == doctest::Approx(1.5));
    CHECK(l1_distance(a, b) == doctest::Approx(2.0));
    CHECK(pointwise_leq(a.restricted_to(1.0, 2.0), b));
    CHECK_FALSE(pointwise_leq(a, b));
}

TEST_CASE("open sets") {
    CHECK_THROWS_AS(OpenSet1D::make({{0.0, 1.0}, {0.5, 2.0}}), ValidationError);
    CHECK_THROWS_AS(OpenSet1D::make({{1.0, 1.0}}), ValidationError);
    const auto o = OpenSet1D::make({{-1.0, 0.0}, {0.0, 1.0}});
    CHECK(o.total_length() == 2.0);
    CHECK(o.component_of(-0.5) == 0);
    CHECK(o.component_of(0.5) == 1);
    CHECK(o.component_of(0.0) == o.size());
}

TEST_CASE("restrict splits by component and reports leaks") {
    const auto o = OpenSet1D::make({{-1.0, 0.0}, {0.0, 1.0}});
    const auto mu = StepMeasure::indicator(-0.5, 0.5);
    const auto parts = restrict(mu, o);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].mass() == doctest::Approx(0.5));
    CHECK(parts[1].mass() == doctest::Approx(0.5));

    const auto leaky = StepMeasure::indicator(0.5, 1.5);
    CHECK(leaked_mass(leaky, o) == doctest::Approx(0.5));
    try {
        (void)restrict(leaky, o);
        FAIL("expected SupportError");
    } catch (const SupportError& e) {
        CHECK(e.leaked_mass() == doctest::Approx(0.5));
    }
}

TEST_CASE("random measures: moments against quadrature, algebra identities") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto o = oracle::random_open_set(rng);
        const auto mu = oracle::random_admissible(rng, o);
        const auto nu = oracle::random_admissible(rng, o);
        const auto [m, b] = oracle::moments_by_quadrature(mu);
        CHECK(mu.mass() == doctest::Approx(m).epsilon(1e-9));
        CHECK(mu.first_moment() == doctest::Approx(b).epsilon(1e-9).scale(1.0));
        CHECK((mu + nu).mass() == doctest::Approx(mu.mass() + nu.mass()));
        CHECK((mu * 0.5).first_moment() == doctest::Approx(0.5 * mu.first_moment()).scale(1.0));
        CHECK(l1_distance(mu, nu) ==
              doctest::Approx(positive_part_l1(mu, nu) + positive_part_l1(nu, mu)).scale(1.0));
        CHECK(leaked_mass(mu, o) == doctest::Approx(0.0).scale(1.0));
        CHECK(mu.sup_density() <= 1.0);
    }
}
