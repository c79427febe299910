#include "twosq/counting.hpp"

#include <cmath>
#include <numeric>

#include "twosq/errors.hpp"

namespace twosq {

namespace {

void check_x(std::uint64_t x, const IndicatorSet& ind, const char* op) {
    if (x < 1 || x > ind.limit())
        throw ValidationError(std::string(op) + ": x=" + std::to_string(x) +
                              " outside [1, " + std::to_string(ind.limit()) +
                              "]");
}

// counts set bits at n <= x with n = a (mod q)
std::uint64_t strided_count(const Bitset& bits, std::uint64_t x,
                            std::uint64_t q, std::uint64_t a) {
    if (q == 1) return bits.count_prefix(x) /* bit 0 is never set */;
    std::uint64_t n = a == 0 ? q : a;
    std::uint64_t cnt = 0;
    for (; n <= x; n += q) cnt += bits.test(n);
    return cnt;
}

double main_term_guard(std::uint64_t x) {
    // log x must be positive for the sqrt scale to mean anything
    return x >= 2 ? std::sqrt(std::log(double(x))) : 0.0;
}

CountReport make_report(std::uint64_t raw, double main) {
    CountReport r;
    r.raw_count = raw;
    r.main_term = main;
    r.normalized = main > 0 ? double(raw) / main : 0.0;
    return r;
}

}  // namespace

std::uint64_t count_representable(std::uint64_t x, const IndicatorSet& ind) {
    check_x(x, ind, "count_representable");
    return ind.representable_bits().count_prefix(x);
}

std::uint64_t count_representable_progression(const ProgressionQuery& query,
                                              const IndicatorSet& ind) {
    check_x(query.x, ind, "count_representable_progression");
    if (query.q == 0) throw ValidationError("modulus must be positive");
    if (query.a >= query.q)
        throw ValidationError("residue must satisfy 0 <= a < q");
    return strided_count(ind.representable_bits(), query.x, query.q, query.a);
}

CountReport count_proper_progression(const ProgressionQuery& query,
                                     const IndicatorSet& ind) {
    check_x(query.x, ind, "count_proper_progression");
    if (query.q == 0) throw ValidationError("modulus must be positive");
    if (query.a >= query.q)
        throw ValidationError("residue must satisfy 0 <= a < q");
    if (std::gcd(query.a, query.q) != 1)
        throw ValidationError("count_proper_progression requires gcd(a, q) = 1");
    std::uint64_t g4 = std::gcd<std::uint64_t>(4, query.q);
    if (query.a % g4 != 1 % g4)
        throw ValidationError(
            "count_proper_progression requires a = 1 mod gcd(4, q)");
    std::uint64_t raw =
        strided_count(ind.proper_bits(), query.x, query.q, query.a);
    double sl = main_term_guard(query.x);
    double main = sl > 0 ? progression_constant(query.q) * double(query.x) /
                               (double(query.q) * sl)
                         : 0.0;
    return make_report(raw, main);
}

CountReport short_interval_count(const ProgressionQuery& query,
                                 const IndicatorSet& ind) {
    if (query.q == 0 || query.q % 2 == 0)
        throw ValidationError("short_interval_count requires odd q");
    if (query.a >= query.q)
        throw ValidationError("residue must satisfy 0 <= a < q");
    if (std::gcd(query.a, query.q) != 1)
        throw ValidationError("short_interval_count requires gcd(a, q) = 1");
    if (query.x < 1 || query.x + query.y > ind.limit())
        throw ValidationError("short_interval_count: interval (x, x+y] outside "
                              "indicator range");
    // first n > x with n = a (mod q)
    std::uint64_t raw = 0;
    if (query.y > 0) {
        std::uint64_t n = query.x + 1 + (query.a + query.q -
                                         (query.x + 1) % query.q) % query.q;
        const Bitset& bits = ind.representable_bits();
        for (; n <= query.x + query.y; n += query.q) raw += bits.test(n);
    }
    double sl = main_term_guard(query.x);
    double main = sl > 0 ? double(query.y) / (double(query.q) * sl) : 0.0;
    return make_report(raw, main);
}

double landau_ratio(std::uint64_t x, const IndicatorSet& ind) {
    if (x < 16) throw ValidationError("landau_ratio requires x >= 16");
    check_x(x, ind, "landau_ratio");
    std::uint64_t a = ind.representable_bits().count_prefix(x);
    return double(a) * std::sqrt(std::log(double(x))) / double(x);
}

double progression_constant(std::uint64_t q) {
    if (q == 0) throw ValidationError("modulus must be positive");
    if (q % 4 == 2)
        throw ValidationError("c_q is undefined for q = 2 mod 4");
    double prod = 1.0;
    std::uint64_t m = q;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        if (p % 4 == 3) prod *= 1.0 + 1.0 / double(p);
        while (m % p == 0) m /= p;
    }
    if (m > 1 && m % 4 == 3) prod *= 1.0 + 1.0 / double(m);
    double c = 2.0 * kLandauRamanujan * prod;
    return q % 4 == 0 ? c : 0.25 * c;
}

CountReport count_class_d(unsigned u, std::uint64_t x, const IndicatorSet& ind) {
    check_x(x, ind, "count_class_d");
    std::uint64_t raw = ind.class_d_bits(u).count_prefix(x);
    double sl = main_term_guard(x);
    double main = sl > 0 ? kClassD1Beta * double(x) / sl : 0.0;
    return make_report(raw, main);
}

}  // namespace twosq
