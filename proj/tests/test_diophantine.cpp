#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "twosq/diophantine.hpp"
#include "twosq/sieve.hpp"

using namespace twosq;

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("1/3") == Rational(1, 3));
    CHECK(parse_rational("-3/9") == Rational(-1, 3));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("0") == Rational(0));
    CHECK(rational_str(Rational(0)) == "0/1");
    CHECK(rational_str(Rational(22, 7)) == "22/7");
    CHECK(rational_str(parse_rational("4/6")) == "2/3");
    CHECK_THROWS_AS(parse_rational("0.5"), ValidationError);
    CHECK_THROWS_AS(parse_rational("1e-3"), ValidationError);
    CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
    CHECK_THROWS_AS(parse_rational(""), ValidationError);
}

TEST_CASE("distance to the nearest integer") {
    CHECK(dist_nearest_int(Rational(1, 2)) == Rational(1, 2));
    CHECK(dist_nearest_int(Rational(23, 10)) == Rational(3, 10));
    CHECK(dist_nearest_int(Rational(-1, 10)) == Rational(1, 10));
    CHECK(dist_nearest_int(Rational(7)) == Rational(0));

    SUBCASE("periodic, symmetric, bounded, denominator divides") {
        std::mt19937_64 rng(19);
        for (int i = 0; i < 300; ++i) {
            long num = long(rng() % 2000) - 1000;
            unsigned long den = 1 + rng() % 999;
            Rational x(num, den);
            x.canonicalize();
            Rational d = dist_nearest_int(x);
            CHECK(d >= 0);
            CHECK(d <= Rational(1, 2));
            CHECK(dist_nearest_int(x + 3) == d);
            CHECK(dist_nearest_int(x - 5) == d);
            CHECK(dist_nearest_int(-x) == d);
            CHECK(x.get_den() % d.get_den() == 0);
        }
    }
}

TEST_CASE("continued fractions of rationals") {
    auto half = continued_fraction(Rational(1, 2), 10);
    REQUIRE(half.partial_quotients.size() == 2);
    CHECK(half.partial_quotients[0] == 0);
    CHECK(half.partial_quotients[1] == 2);

    auto pi_like = continued_fraction(Rational(355, 113), 10);
    REQUIRE(pi_like.partial_quotients.size() == 3);
    CHECK(pi_like.partial_quotients[0] == 3);
    CHECK(pi_like.partial_quotients[1] == 7);
    CHECK(pi_like.partial_quotients[2] == 16);
    REQUIRE(pi_like.convergents.size() == 3);
    CHECK(pi_like.convergents[0].p == 3);
    CHECK(pi_like.convergents[0].q == 1);
    CHECK(pi_like.convergents[1].p == 22);
    CHECK(pi_like.convergents[1].q == 7);
    CHECK(pi_like.convergents[2].p == 355);
    CHECK(pi_like.convergents[2].q == 113);

    SUBCASE("determinant identity and approximation quality") {
        std::mt19937_64 rng(83);
        for (int i = 0; i < 200; ++i) {
            Rational x(long(rng() % 100000), (unsigned long)(1 + rng() % 99999));
            x.canonicalize();
            auto cf = continued_fraction(x, 64);
            for (std::size_t k = 1; k < cf.convergents.size(); ++k) {
                BigInt det = cf.convergents[k].p * cf.convergents[k - 1].q -
                             cf.convergents[k - 1].p * cf.convergents[k].q;
                CHECK((det == 1 || det == -1));
                CHECK(cf.convergents[k].q > cf.convergents[k - 1].q);
                Rational approx(cf.convergents[k - 1].p, cf.convergents[k - 1].q);
                approx.canonicalize();
                Rational err = x - approx;
                if (sgn(err) < 0) err = -err;
                Rational bound(1, 1);
                bound /= Rational(cf.convergents[k - 1].q * cf.convergents[k].q);
                CHECK(err <= bound);
            }
        }
    }
}

TEST_CASE("continued fraction of a double is certified") {
    double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    auto cf = continued_fraction(golden, 25);
    REQUIRE(cf.partial_quotients.size() == 25);
    for (const auto& a : cf.partial_quotients) CHECK(a == 1);

    auto prefix = certified_continued_fraction(golden);
    CHECK(prefix.partial_quotients.size() >= 30);
    CHECK(prefix.truncated_by_precision);
    for (const auto& a : prefix.partial_quotients) CHECK(a == 1);

    SUBCASE("asking past certified depth raises") {
        CHECK_THROWS_AS(continued_fraction(golden, 200), IndeterminateError);
        try {
            continued_fraction(golden, 200);
        } catch (const IndeterminateError& e) {
            CHECK(e.safe_depth >= 30);
            CHECK(e.safe_depth < 60);
        }
    }
    CHECK_THROWS_AS(continued_fraction(std::nan(""), 5), ValidationError);
}

TEST_CASE("spiking alpha construction") {
    Rational alpha = construct_spiking_alpha(10, 100, 2, 42);
    // within 1/(10N) at every k <= K, exactly
    for (std::uint64_t k = 1; k <= 2; ++k) {
        Rational arg = alpha * Rational(10 * k);
        CHECK(dist_nearest_int(arg) <= Rational(1, 1000));
        CHECK(dist_nearest_int(arg) > 0);
    }
    // no guarantee past K: the drift crosses the threshold by 2K + 2
    Rational far = alpha * Rational(10 * 6);
    CHECK(dist_nearest_int(far) > Rational(1, 1000));

    SUBCASE("deterministic in the seed") {
        CHECK(construct_spiking_alpha(97, 512, 3, 9) ==
              construct_spiking_alpha(97, 512, 3, 9));
        bool any_different = false;
        for (std::uint64_t seed = 1; seed <= 6; ++seed)
            any_different = any_different ||
                            construct_spiking_alpha(97, 512, 3, seed) !=
                                construct_spiking_alpha(97, 512, 3, 0);
        CHECK(any_different);
    }
    SUBCASE("n = 1 degenerates to a pure drift") {
        Rational a1 = construct_spiking_alpha(1, 50, 2, 7);
        CHECK(dist_nearest_int(a1 * Rational(2)) <= Rational(1, 500));
        CHECK(a1 != Rational(0));
    }
    CHECK_THROWS_AS(construct_spiking_alpha(0, 10, 1, 1), ValidationError);
}

TEST_CASE("convergent denominator scan") {
    auto members_two_squares = [](const BigInt& q) {
        return q.fits_ulong_p() &&
               two_square_representation(q.get_ui()).has_value();
    };
    auto rows = convergent_denominator_scan(Rational(355, 113), 10,
                                            members_two_squares);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].q == 1);
    CHECK(rows[0].member);
    CHECK(rows[1].q == 7);
    CHECK_FALSE(rows[1].member);
    CHECK(rows[2].q == 113);
    CHECK(rows[2].member);  // 49 + 64

    auto half = convergent_denominator_scan(Rational(1, 2), 10,
                                            members_two_squares);
    REQUIRE(half.size() == 1);  // leading 0/1 skipped
    CHECK(half[0].q == 2);
    CHECK(half[0].member);

    auto none = convergent_denominator_scan(Rational(355, 113), 10,
                                            [](const BigInt&) { return false; });
    for (const auto& r : none) CHECK_FALSE(r.member);
}

TEST_CASE("vaaler partial sums") {
    FactorTable table = FactorTable::build(100000);
    auto all = [](std::uint32_t) { return true; };
    auto nothing = [](std::uint32_t) { return false; };

    double first_term = vaaler_partial_sum(all, 0.9, 2, table);
    CHECK(first_term == doctest::Approx(0.34769).epsilon(1e-4));
    CHECK(vaaler_partial_sum(nothing, 0.9, 1000, table) == 0.0);

    double s10 = vaaler_partial_sum(all, 0.9, 10, table);
    double s100 = vaaler_partial_sum(all, 0.9, 100, table);
    double s10000 = vaaler_partial_sum(all, 0.9, 10000, table);
    CHECK(s10 < s100);
    CHECK(s100 < s10000);

    CHECK_THROWS_AS(vaaler_partial_sum(all, 1.0, 100, table), ValidationError);
    CHECK_THROWS_AS(vaaler_partial_sum(all, 0.0, 100, table), ValidationError);
    CHECK_THROWS_AS(vaaler_partial_sum(all, 0.9, 1, table), ValidationError);
}

TEST_CASE("random rationals are reproducible") {
    Rational a = random_rational(1234);
    Rational b = random_rational(1234);
    Rational c = random_rational(1235);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(mpz_sizeinbase(a.get_den().get_mpz_t(), 2) == 128);
    CHECK(a >= 0);
    CHECK(a < 1);
}
