#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "envc/errors.hpp"
#include "envc/rng.hpp"
#include "envc/stats.hpp"

using namespace envc;

namespace {

// Independent oracle: invert the std::erfc-based CDF by bisection.
double quantile_by_bisection(double p) {
    double lo = -42.0, hi = 42.0;
    for (int i = 0; i < 220; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("normal cdf/sf anchors") {
    CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(stats::normal_cdf(1.2815515655446004) == doctest::Approx(0.9).epsilon(1e-13));
    CHECK(stats::normal_cdf(-1.6448536269514722) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(stats::normal_sf(2.3263478740408408) == doctest::Approx(0.01).epsilon(1e-12));
    // sf keeps precision deep in the tail where 1 - cdf would cancel
    CHECK(stats::normal_sf(8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
}

namespace {

// A probability stored as a double pins z no tighter than ulp(p)/phi(z);
// anything beyond that is unrecoverable upper-tail cancellation in 1 - p.
double z_resolution(double p, double z) {
    const double ulp = (p >= 0.5) ? 0x1.0p-52 : p * 0x1.0p-52;
    return 4.0 * ulp / stats::normal_pdf(z) + 1e-12;
}

} // namespace

TEST_CASE("normal quantile matches the bisection oracle") {
    const double ps[] = {1e-9,  1e-6, 1e-3, 0.025, 0.05, 0.1, 0.3,  0.5,
                         0.7,   0.9,  0.95, 0.975, 0.99, 0.999, 1.0 - 1e-6,
                         1.0 - 1e-9};
    for (const double p : ps) {
        const double got = stats::normal_quantile(p);
        const double want = quantile_by_bisection(p);
        CHECK(std::abs(got - want) <= z_resolution(p, want));
    }
    CHECK(stats::normal_quantile(0.9) ==
          doctest::Approx(1.2815515655446004).epsilon(1e-14));
    CHECK(stats::normal_quantile(0.5) == 0.0);
}

TEST_CASE("normal quantile round trip") {
    for (double z = -6.0; z <= 6.0; z += 0.37) {
        const double back = stats::normal_quantile(stats::normal_cdf(z));
        CHECK(std::abs(back - z) <= z_resolution(stats::normal_cdf(z), z));
    }
    CHECK_THROWS_AS(stats::normal_quantile(0.0), input_error);
    CHECK_THROWS_AS(stats::normal_quantile(1.0), input_error);
    CHECK_THROWS_AS(stats::normal_quantile(-0.1), input_error);
}

TEST_CASE("normal hazard") {
    CHECK(stats::normal_hazard(0.0) ==
          doctest::Approx(0.7978845608028654).epsilon(1e-14));
    // agrees with the direct ratio where both are stable
    for (double z = -5.0; z <= 7.5; z += 0.5) {
        CHECK(stats::normal_hazard(z) ==
              doctest::Approx(stats::normal_pdf(z) / stats::normal_sf(z)).epsilon(1e-12));
    }
    // continuous across the continued-fraction switch at z = 8
    const double below = stats::normal_hazard(7.9999999);
    const double above = stats::normal_hazard(8.0000001);
    CHECK(std::abs(below - above) < 1e-6);
    // asymptote z + 1/z - 2/z^3 + ...
    CHECK(stats::normal_hazard(50.0) ==
          doctest::Approx(50.0 + 1.0 / 50.0 - 2.0 / 125000.0).epsilon(1e-9));
    // monotone increasing
    double prev = stats::normal_hazard(-10.0);
    for (double z = -9.5; z <= 12.0; z += 0.5) {
        const double cur = stats::normal_hazard(z);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("counter stream is pure and schedule independent") {
    const CounterRng a(12345);
    const CounterRng b(12345);
    for (std::uint64_t i : {0ull, 1ull, 17ull, 1000000ull}) {
        CHECK(a.bits(i) == b.bits(i));
        CHECK(a.uniform(i) == b.uniform(i));
    }
    const CounterRng c(12346);
    CHECK(a.bits(0) != c.bits(0));
    // substreams decouple from the parent
    CHECK(a.substream(1).bits(0) != a.bits(0));
    CHECK(a.substream(1).bits(0) != a.substream(2).bits(0));
}

TEST_CASE("uniform draws live strictly inside (0,1) and look uniform") {
    const CounterRng rng(777);
    double sum = 0.0;
    double mn = 1.0, mx = 0.0;
    const std::size_t n = 200000;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform(i);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        sum += u;
        mn = std::min(mn, u);
        mx = std::max(mx, u);
    }
    CHECK(sum / static_cast<double>(n) == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(mn < 1e-4);
    CHECK(mx > 1.0 - 1e-4);
}

TEST_CASE("normal draws have the right first two moments") {
    const CounterRng rng(2024);
    const std::size_t n = 500000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.normal(i);
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - mean * mean;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}
