#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "twosq/rational.hpp"
#include "twosq/sieve.hpp"

namespace twosq {

// ||x||: distance to the nearest integer, exact, in [0, 1/2].
Rational dist_nearest_int(const Rational& x);

struct Convergent {
    BigInt p;
    BigInt q;
};

struct ContinuedFraction {
    std::vector<BigInt> partial_quotients;  // a_0 may be 0
    std::vector<Convergent> convergents;    // p_k q_{k-1} - p_{k-1} q_k = +-1
    bool truncated_by_precision = false;    // double input only
};

// Standard expansion, at most max_depth quotients. Terminates early when
// the rational is exhausted.
ContinuedFraction continued_fraction(const Rational& x, std::size_t max_depth);

// Expansion of a double through its exact binary rational. Quotients are
// kept only while certified against a one-ulp input perturbation
// (2 eps q_k q_{k+1} <= 1); asking for more depth than can be certified
// raises IndeterminateError carrying the deepest safe depth.
ContinuedFraction continued_fraction(double x, std::size_t max_depth);
// Longest certified prefix, never throws on depth.
ContinuedFraction certified_continued_fraction(double x);

// alpha = r/n + delta with gcd(r, n) = 1, r and the sign of delta drawn
// from the seeded generator, and delta = +-1/q for the first q >= 20*N*K*n
// coprime to n. Guarantees ||n k alpha|| <= 1/(20N) <= 1/(10N) for all
// k <= K, verified exactly before returning; alpha is never exactly r/n.
Rational construct_spiking_alpha(std::uint64_t n, std::uint64_t N,
                                 std::uint64_t K, std::uint64_t seed);

struct ConvergentScanRow {
    std::size_t k = 0;
    BigInt q;
    bool member = false;
};

// Convergent denominators of alpha with a membership flag. The leading
// 0/1 convergent (integer part zero) is skipped: its denominator is not a
// denominator of a nonzero approximation.
std::vector<ConvergentScanRow> convergent_denominator_scan(
    const Rational& alpha, std::size_t depth,
    const std::function<bool(const BigInt&)>& membership);

// sum_{2 <= n <= X, n in set} phi(n) / (n^2 (log n)^h), 0 < h < 1,
// accumulated in extended precision.
double vaaler_partial_sum(const std::function<bool(std::uint32_t)>& in_set,
                          double h, std::uint32_t X, const FactorTable& table);

// Seeded rational with denominator of exactly `denominator_bits` bits,
// numerator uniform below it, reduced. Used for Monte Carlo controls.
Rational random_rational(std::uint64_t seed, unsigned denominator_bits = 128);

}  // namespace twosq
