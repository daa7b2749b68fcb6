#include "stefan1d/errors.hpp"
#include "stefan1d/json_io.hpp"
#include "stefan1d/particles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace stefan1d;

namespace {

const StepMeasure kMu = StepMeasure::indicator(0.0, std::sqrt(0.75), 0.99);
const OpenSet1D kUnit = OpenSet1D::interval(-1.0, 1.0);

SimConfig small_config(std::size_t n, std::uint64_t seed) {
    SimConfig cfg;
    cfg.n_particles = n;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("counter RNG: streams are distinct and reproducible") {
    CounterRng a(CounterRng::derive(1, 0, 0, 2));
    CounterRng b(CounterRng::derive(1, 0, 0, 2));
    CounterRng c(CounterRng::derive(1, 0, 1, 2));
    CounterRng d(CounterRng::derive(2, 0, 0, 2));
    const auto a0 = a();
    CHECK(a0 == b());
    CHECK(a0 != c());
    CHECK(a0 != d());
    std::set<std::uint64_t> keys;
    for (std::uint64_t p = 0; p < 10000; ++p) {
        keys.insert(CounterRng::derive(7, 0, p, 2));
    }
    CHECK(keys.size() == 10000);
}

TEST_CASE("counter RNG: uniform moments") {
    CounterRng rng(CounterRng::derive(3, 0, 0, 1));
    const int n = 200000;
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("sample_initial follows the normalized density") {
    const double br[] = {-1.0, 0.0, 0.5};
    const double v[] = {0.2, 0.8};
    const auto mu = StepMeasure::make(br, v);
    const auto xs = sample_initial(mu, 100000, 9);
    double left = 0.0;
    double mean = 0.0;
    for (double x : xs) {
        CHECK_FALSE((x < -1.0 || x > 0.5));
        left += x < 0.0 ? 1.0 : 0.0;
        mean += x;
    }
    const double n = static_cast<double>(xs.size());
    // P(x < 0) = 0.2 / 0.6; 5 standard errors.
    CHECK(std::abs(left / n - 1.0 / 3.0) < 5.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / n));
    CHECK(mean / n == doctest::Approx(mu.first_moment() / mu.mass()).epsilon(0.02));

    // Particle i's draw does not depend on how many particles exist.
    const auto prefix = sample_initial(mu, 1000, 9);
    CHECK(std::equal(prefix.begin(), prefix.end(), xs.begin()));
    CHECK_THROWS_AS(sample_initial(StepMeasure{}, 10, 1), SamplingError);
}

TEST_CASE("allocate_particles") {
    const ComponentData parts[] = {{0.3, 0.0}, {0.0, 0.0}, {0.7, 0.0}, {1e-9, 0.0}};
    const auto counts = allocate_particles(parts, 1000);
    CHECK(counts[0] == 300);
    CHECK(counts[1] == 0);
    CHECK(counts[2] == 700);
    CHECK(counts[3] == 1);
}

TEST_CASE("config validation") {
    SimConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SimConfig{};
    cfg.n_particles = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    CHECK_THROWS_AS(run(StepMeasure::indicator(0.0, 0.5, 1.5), kUnit, SimConfig{}), AdmissibilityError);
    CHECK_THROWS_AS(run(StepMeasure::indicator(0.5, 1.5, 0.5), kUnit, SimConfig{}), SupportError);
}

TEST_CASE("run: mass accounting and freezing") {
    const auto report = run(kMu, kUnit, small_config(5000, 4));
    REQUIRE(report.components.size() == 1);
    const auto& c = report.components[0];
    CHECK(report.complete());
    CHECK(c.fronts.left_count + c.fronts.right_count == c.particles);
    CHECK(c.p_hat + c.q_hat == doctest::Approx(kMu.mass()).epsilon(1e-13));
    CHECK(c.fronts.left == doctest::Approx(-1.0 + c.p_hat));
    CHECK(c.fronts.right == doctest::Approx(1.0 - c.q_hat));
    CHECK(c.histogram.mass() == doctest::Approx(kMu.mass()).epsilon(1e-12));
    CHECK(report.frozen.sup_density() <= 1.0 + 1e-12);
    CHECK(c.effective_dt == doctest::Approx(4e-4));
}

TEST_CASE("run: identical seeds give identical reports") {
    const auto a = to_json(run(kMu, kUnit, small_config(3000, 11))).dump();
    const auto b = to_json(run(kMu, kUnit, small_config(3000, 11))).dump();
    const auto c = to_json(run(kMu, kUnit, small_config(3000, 12))).dump();
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("run: parallel components match the serial run") {
    const auto o = OpenSet1D::make({{-2.0, -0.5}, {0.0, 1.0}});
    const auto mu = StepMeasure::indicator(-1.5, -1.0, 0.5) + StepMeasure::indicator(0.2, 0.9, 0.8);
    auto cfg = small_config(4000, 5);
    const auto serial = to_json(run(mu, o, cfg)).dump();
    cfg.parallel_components = true;
    auto par = run(mu, o, cfg);
    CHECK(par.components.size() == 2);
    // The config itself is not part of the report, so the dumps must agree.
    CHECK(to_json(par).dump() == serial);
}

TEST_CASE("run: t_max exhaustion is reported, not thrown") {
    auto cfg = small_config(500, 3);
    cfg.t_max = 1e-3;
    const auto report = run(kMu, kUnit, cfg);
    CHECK_FALSE(report.complete());
    CHECK(report.unfrozen() > 0);
}

TEST_CASE("run: estimate within 5 standard errors of the formula") {
    const auto report = run(kMu, kUnit, small_config(20000, 21));
    const auto sol = solve(kMu, kUnit);
    const auto err = compare_to_formula(report, sol);
    REQUIRE(err.size() == 1);
    CHECK(err[0].p_error < 5.0 * err[0].standard_error + 2e-3);
    CHECK(err[0].p_error == doctest::Approx(err[0].q_error).epsilon(1e-9).scale(1.0));
    CHECK(err[0].frozen_l1 == doctest::Approx(2.0 * err[0].p_error).epsilon(1e-9).scale(1.0));
    CHECK_THROWS_AS(compare_to_formula(report, solve(kMu, OpenSet1D::interval(-1.0, 2.0))), ValidationError);
}

TEST_CASE("without the bridge correction the bias shrinks like sqrt(dt)") {
    // Quartering dt should halve the overshoot bias. n = 1e5 keeps the noise
    // (about 9e-4) well below the biases (about 0.03 and 0.016).
    auto bias = [](double dt) {
        auto cfg = small_config(100000, 8);
        cfg.dt = dt;
        cfg.bridge_correction = false;
        const auto report = run(kMu, kUnit, cfg);
        return report.components[0].p_hat - solve(kMu, kUnit).blocks[0].left_width();
    };
    const double coarse = bias(4e-3);
    const double fine = bias(1e-3);
    CHECK(coarse > 0.0);
    CHECK(fine > 0.0);
    const double ratio = fine / coarse;
    MESSAGE("bias ratio under dt/4: " << ratio);
    CHECK(ratio > 0.3);
    CHECK(ratio < 0.75);
}
