#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "julia_rays/quadmap.hpp"

using namespace julia_rays;
using Catch::Matchers::WithinAbs;
using C = std::complex<double>;

TEST_CASE("map from multiplier", "[quadmap]") {
    QuadraticMap m1 = QuadraticMap::from_multiplier({1.0, 0.0});
    CHECK_THAT(m1.c().real(), WithinAbs(0.25, 1e-15));
    CHECK_THAT(m1.c().imag(), WithinAbs(0.0, 1e-15));

    // formula check off the unit circle goes through the unchecked variant
    QuadraticMap m0 = QuadraticMap::from_multiplier_unchecked({0.0, 0.0});
    CHECK(m0.c() == C(0.0, 0.0));
    CHECK_THROWS_AS(QuadraticMap::from_multiplier({0.0, 0.0}), InvalidInputError);
    CHECK_THROWS_AS(QuadraticMap::from_multiplier({1.0 + 1e-9, 0.0}), InvalidInputError);

    double theta = (std::sqrt(5.0) - 1.0) / 2.0;
    QuadraticMap mg = QuadraticMap::from_rotation(theta);
    CHECK_THAT(mg.c().real(), WithinAbs(-0.390541, 1e-6));
    CHECK_THAT(mg.c().imag(), WithinAbs(-0.586788, 1e-6));
    CHECK_THAT(std::abs(mg.multiplier()), WithinAbs(1.0, 1e-12));
    CHECK(mg.source() == QuadraticMap::Source::from_multiplier);
    REQUIRE(mg.rotation_theta().has_value());
    CHECK(*mg.rotation_theta() == theta);
    CHECK_FALSE(QuadraticMap::from_c({-2.0, 0.0}).rotation_theta().has_value());
}

TEST_CASE("fixed point convention", "[quadmap]") {
    auto [a2, b2] = fixed_points(C{-2.0, 0.0});
    CHECK_THAT(a2.real(), WithinAbs(-1.0, 1e-12));
    CHECK_THAT(b2.real(), WithinAbs(2.0, 1e-12));

    auto [a0, b0] = fixed_points(C{0.0, 0.0});
    CHECK_THAT(std::abs(a0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(b0 - 1.0), WithinAbs(0.0, 1e-12));

    CHECK_THROWS_AS(fixed_points(C{0.5, 0.0}), ConventionUndefinedError);
    CHECK_THROWS_AS(fixed_points(C{0.25, 0.0}), ConventionUndefinedError);
    CHECK_NOTHROW(fixed_points_unordered(C{0.5, 0.0}));
    CHECK_NOTHROW(fixed_points(C{0.5, 1e-9}));

    QuadraticMap on_ray = QuadraticMap::from_c({0.5, 0.0});
    CHECK_THROWS_AS(on_ray.alpha(), ConventionUndefinedError);
    CHECK(on_ray.c() == C(0.5, 0.0));
}

TEST_CASE("fixed point invariants on random parameters", "[quadmap]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int tested = 0;
    while (tested < 10000) {
        C c{u(rng), u(rng)};
        if (std::abs(c) > 2.0) continue;
        if (c.imag() == 0.0 && c.real() >= 0.25) continue;
        auto [a, b] = fixed_points(c);
        CHECK(std::abs(a + b - 1.0) <= 1e-12);
        CHECK(std::abs(a * b - c) <= 1e-12 * std::max(1.0, std::abs(c)));
        CHECK(a.real() < b.real());  // strict off the excluded ray
        // |lambda| <= |2 - lambda| with lambda = 2 alpha
        CHECK(std::abs(2.0 * a) <= std::abs(2.0 - 2.0 * a) + 1e-12);
        ++tested;
    }
}

TEST_CASE("multiplier round trip", "[quadmap]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double arg = 2 * std::numbers::pi * u(rng);
        C lambda{std::cos(arg), std::sin(arg)};
        QuadraticMap m = QuadraticMap::from_multiplier(lambda);
        CHECK(std::abs(m.multiplier() - lambda) <= 1e-12);
        CHECK(std::abs(m.c() - lambda * (2.0 - lambda) / 4.0) <= 1e-15);
    }
}

TEST_CASE("iteration", "[quadmap]") {
    QuadraticMap cheb = QuadraticMap::from_c({-2.0, 0.0});
    CHECK(cheb.iterate({2.0, 0.0}, 57) == C(2.0, 0.0));

    QuadraticMap zero = QuadraticMap::from_c({0.0, 0.0});
    CHECK(zero.iterate({2.0, 0.0}, 3) == C(256.0, 0.0));

    QuadraticMap basilica = QuadraticMap::from_c({-1.0, 0.0});
    CHECK(basilica.iterate({0.0, 0.0}, 2) == C(0.0, 0.0));

    CHECK_THROWS_AS(zero.iterate({2.0, 0.0}, -1), InvalidInputError);
}

TEST_CASE("overflow reports the escape sentinel, never NaN", "[quadmap]") {
    QuadraticMap m = QuadraticMap::from_c({0.3, 0.4});
    C z = m.iterate({1e20, 0.0}, 64);
    CHECK(QuadraticMap::is_escape_sentinel(z));
    CHECK_FALSE(std::isnan(z.real()));
    CHECK_FALSE(std::isnan(z.imag()));
}

TEST_CASE("even symmetry f(z) = f(-z) is exact", "[quadmap]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    QuadraticMap m = QuadraticMap::from_c({-0.39054087, -0.58678790});
    for (int i = 0; i < 2000; ++i) {
        C z{u(rng), u(rng)};
        CHECK(m.apply(z) == m.apply(-z));
    }
}

TEST_CASE("green estimates", "[quadmap]") {
    QuadraticMap zero = QuadraticMap::from_c({0.0, 0.0});
    auto g = zero.green({std::exp(2.0), 0.0}, 1e-12);
    CHECK(g.escaped);
    CHECK_THAT(g.green_estimate, WithinAbs(2.0, 1e-12));
    CHECK(g.error_bound <= 1e-12);

    QuadraticMap cheb = QuadraticMap::from_c({-2.0, 0.0});
    auto fixed = cheb.green({-1.0, 0.0}, 1e-9);
    CHECK_FALSE(fixed.escaped);
    CHECK(fixed.green_estimate == 0.0);

    // functional equation G(f(z)) = 2 G(z)
    double tol = 1e-10;
    auto gz = cheb.green({3.0, 0.0}, tol);
    auto gfz = cheb.green(cheb.apply({3.0, 0.0}), tol);
    CHECK(gz.escaped);
    CHECK(gfz.escaped);
    CHECK_THAT(gfz.green_estimate, WithinAbs(2.0 * gz.green_estimate, 2 * tol));

    CHECK_THROWS_AS(zero.green({1.0, 0.0}, 0.0), InvalidInputError);
    CHECK(zero.green({0.5, 0.0}, 1e-9, 100).escaped == false);
}

TEST_CASE("golden Siegel critical orbit stays bounded", "[quadmap]") {
    // the critical orbit lives on the Siegel disk boundary
    QuadraticMap m = QuadraticMap::from_rotation((std::sqrt(5.0) - 1.0) / 2.0);
    C z = 0;
    double max_mod = 0;
    for (int i = 0; i < 20000; ++i) {
        z = m.apply(z);
        max_mod = std::max(max_mod, std::abs(z));
    }
    CHECK(max_mod < 2.0);
    CHECK_FALSE(QuadraticMap::is_escape_sentinel(z));
}

TEST_CASE("map is usable at other precisions", "[quadmap]") {
    using MapLD = QuadraticMapT<long double>;
    MapLD m = MapLD::from_c({-2.0L, 0.0L});
    auto [a, b] = fixed_points(std::complex<long double>{-2.0L, 0.0L});
    CHECK(std::abs(a + 1.0L) < 1e-18L);
    CHECK(std::abs(b - 2.0L) < 1e-18L);
    CHECK(m.iterate({2.0L, 0.0L}, 10) == std::complex<long double>(2.0L, 0.0L));
}
