#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "twosq/counting.hpp"
#include "twosq/sieve.hpp"

using namespace twosq;

namespace {

const IndicatorSet& ind_1e6() {
    static FactorTable t = FactorTable::build(1000000);
    static IndicatorSet s = IndicatorSet::build(t, 0, 4);
    return s;
}

}  // namespace

TEST_CASE("representable counts") {
    const auto& s = ind_1e6();
    CHECK(count_representable(1, s) == 1);
    CHECK(count_representable(10, s) == 7);
    CHECK(count_representable(20, s) == 12);

    SUBCASE("agrees with the representation oracle up to 2000") {
        std::uint64_t running = 0;
        for (std::uint64_t n = 1; n <= 2000; ++n) {
            running += two_square_representation(n).has_value();
            if (n % 97 == 0 || n < 25) CHECK(count_representable(n, s) == running);
        }
    }
}

TEST_CASE("progression counts") {
    const auto& s = ind_1e6();
    CHECK(count_representable_progression({.x = 100, .q = 4, .a = 3}, s) == 0);
    CHECK(count_representable_progression({.x = 20, .q = 4, .a = 1}, s) == 5);
    CHECK(count_representable_progression({.x = 20, .q = 1, .a = 0}, s) == 12);

    SUBCASE("residue classes partition the count") {
        for (std::uint64_t q = 1; q <= 16; ++q) {
            std::uint64_t total = 0;
            for (std::uint64_t a = 0; a < q; ++a)
                total += count_representable_progression({.x = 100000, .q = q, .a = a}, s);
            CHECK(total == count_representable(100000, s));
        }
    }
    CHECK_THROWS_AS(count_representable_progression({.x = 10, .q = 4, .a = 4}, s),
                    ValidationError);
    CHECK_THROWS_AS(count_representable_progression({.x = 0, .q = 4, .a = 1}, s),
                    ValidationError);
}

TEST_CASE("proper progression counts") {
    const auto& s = ind_1e6();
    auto unrestricted = count_proper_progression({.x = 100, .q = 1, .a = 0}, s);
    CHECK(unrestricted.raw_count == 15);
    auto q4 = count_proper_progression({.x = 10, .q = 4, .a = 1}, s);
    CHECK(q4.raw_count == 2);
    CHECK(q4.main_term > 0);
    CHECK(q4.normalized == doctest::Approx(q4.raw_count / q4.main_term));

    SUBCASE("hypothesis checks") {
        CHECK_THROWS_AS(count_proper_progression({.x = 100, .q = 4, .a = 2}, s),
                        ValidationError);  // gcd(2,4) != 1
        CHECK_THROWS_AS(count_proper_progression({.x = 100, .q = 4, .a = 3}, s),
                        ValidationError);  // a != 1 mod 4
        CHECK_THROWS_AS(count_proper_progression({.x = 100, .q = 12, .a = 5}, s),
                        ValidationError);  // a != 1 mod 4
        CHECK_NOTHROW(count_proper_progression({.x = 100, .q = 12, .a = 1}, s));
        CHECK_NOTHROW(count_proper_progression({.x = 100, .q = 5, .a = 3}, s));
    }
    SUBCASE("monotone in x") {
        std::uint64_t prev = 0;
        for (std::uint64_t x = 10; x <= 100000; x *= 10) {
            auto r = count_proper_progression({.x = x, .q = 4, .a = 1}, s);
            CHECK(r.raw_count >= prev);
            prev = r.raw_count;
        }
    }
}

TEST_CASE("short interval counts") {
    const auto& s = ind_1e6();
    auto empty = short_interval_count({.x = 1000, .y = 0, .q = 5, .a = 1}, s);
    CHECK(empty.raw_count == 0);
    CHECK(empty.main_term == 0);

    CHECK_THROWS_AS(short_interval_count({.x = 1000, .y = 10, .q = 4, .a = 1}, s),
                    ValidationError);  // even q
    CHECK_THROWS_AS(short_interval_count({.x = 1000, .y = 10, .q = 9, .a = 3}, s),
                    ValidationError);  // gcd != 1
    CHECK_THROWS_AS(short_interval_count({.x = 999999, .y = 2, .q = 5, .a = 1}, s),
                    ValidationError);  // beyond range

    SUBCASE("interval equals cumulative difference") {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 200; ++i) {
            std::uint64_t q = 2 * (rng() % 8) + 1;
            std::uint64_t a = rng() % q;
            if (std::gcd(a, q) != 1) continue;
            std::uint64_t x = 1 + rng() % 10000;
            std::uint64_t y = rng() % 10000;
            auto iv = short_interval_count({.x = x, .y = y, .q = q, .a = a}, s);
            std::uint64_t hi =
                count_representable_progression({.x = x + y, .q = q, .a = a}, s);
            std::uint64_t lo =
                count_representable_progression({.x = x, .q = q, .a = a}, s);
            CHECK(iv.raw_count == hi - lo);
        }
    }
}

TEST_CASE("landau ratio") {
    const auto& s = ind_1e6();
    CHECK(landau_ratio(20, s) == doctest::Approx(1.0385).epsilon(1e-3));
    double r6 = landau_ratio(1000000, s);
    CHECK(r6 > 0.76);
    CHECK(r6 < 1.05);
    CHECK(landau_ratio(100000, s) > r6);  // decreasing trend
    CHECK_THROWS_AS(landau_ratio(15, s), ValidationError);

    SUBCASE("bounded sanity band") {
        for (std::uint64_t x = 100; x <= 1000000; x *= 10) {
            double r = landau_ratio(x, s);
            CHECK(r > 0);
            CHECK(r < 1.2);
        }
    }
}

TEST_CASE("progression constant c_q") {
    CHECK(progression_constant(4) == doctest::Approx(1.5284).epsilon(1e-3));
    CHECK(progression_constant(12) == doctest::Approx(2.0379).epsilon(1e-3));
    CHECK(progression_constant(5) == doctest::Approx(0.3821).epsilon(1e-3));
    CHECK(progression_constant(8) == doctest::Approx(2 * kLandauRamanujan));
    CHECK_THROWS_AS(progression_constant(6), ValidationError);
    CHECK_THROWS_AS(progression_constant(2), ValidationError);
    CHECK_THROWS_AS(progression_constant(0), ValidationError);
}

TEST_CASE("class D counts") {
    const auto& s = ind_1e6();
    CHECK(count_class_d(1, 30, s).raw_count == 6);  // 1, 5, 13, 17, 25, 29
    CHECK(count_class_d(3, 30, s).raw_count == 6);  // 1, 3, 7, 9, 21, 27
    CHECK(count_class_d(1, 1, s).raw_count == 1);

    SUBCASE("D1 never outcounts the representables") {
        for (std::uint64_t x = 1; x <= 10000; x += 37)
            CHECK(count_class_d(1, x, s).raw_count <= count_representable(x, s));
    }
}
