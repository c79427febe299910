#pragma once
#include <cstdint>

#include "twosq/sieve.hpp"

namespace twosq {

// Landau-Ramanujan constant: lim A(x) sqrt(log x) / x.
inline constexpr double kLandauRamanujan = 0.76422365358922066;
// Density constant of the class of integers with all prime factors
// 1 mod 4: count(x) ~ beta x / sqrt(log x), beta = 1/(2 sqrt 2).
inline constexpr double kClassD1Beta = 0.35355339059327379;

struct ProgressionQuery {
    std::uint64_t x = 0;  // count up to x (or interval start)
    std::uint64_t y = 0;  // interval length for (x, x+y]
    std::uint64_t q = 1;  // modulus
    std::uint64_t a = 0;  // residue, 0 <= a < q
};

struct CountReport {
    std::uint64_t raw_count = 0;
    double main_term = 0.0;
    double normalized = 0.0;  // raw_count / main_term when main_term > 0
};

// A(x): representable integers up to x.
std::uint64_t count_representable(std::uint64_t x, const IndicatorSet& ind);

// A_{q,a}(x): representable n <= x with n = a mod q. No coprimality
// requirement for this raw count.
std::uint64_t count_representable_progression(const ProgressionQuery& query,
                                              const IndicatorSet& ind);

// Properly-represented odd n <= x with n = a mod q. Requires gcd(a,q) = 1
// and a = 1 mod gcd(4,q). Main term c_q x / (q sqrt(log x)).
CountReport count_proper_progression(const ProgressionQuery& query,
                                     const IndicatorSet& ind);

// Representable n in (x, x+y] with n = a mod q, q odd and gcd(a,q) = 1.
// Main term y / (q sqrt(log x)).
CountReport short_interval_count(const ProgressionQuery& query,
                                 const IndicatorSet& ind);

// A(x) sqrt(log x) / x, defined for x >= 16.
double landau_ratio(std::uint64_t x, const IndicatorSet& ind);

// c_q: 2 kappa prod_{p|q, p=3(4)} (1+1/p) for q = 0 mod 4, a quarter of
// that for gcd(q,4) = 1. q = 2 mod 4 is rejected as unsupported.
double progression_constant(std::uint64_t q);

// Members of class D_u up to x. Main term beta x / sqrt(log x); for u = 3
// the same beta is used purely as a display scale.
CountReport count_class_d(unsigned u, std::uint64_t x, const IndicatorSet& ind);

}  // namespace twosq
