#pragma once
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "twosq/bitset.hpp"
#include "twosq/errors.hpp"
#include "twosq/rational.hpp"

namespace twosq {

struct PrimePower {
    std::uint32_t prime;
    std::uint32_t exponent;
};

// Smallest-prime-factor table for [2, limit]. Immutable after build and
// safe to share across threads. spf(n) is prime and divides n; spf(p) = p
// exactly for primes.
class FactorTable {
public:
    // Linear sieve. Throws CapacityError when 4*(limit+1) bytes would
    // exceed max_bytes, ValidationError when limit < 2.
    static FactorTable build(std::uint32_t limit,
                             std::uint64_t max_bytes = std::uint64_t{4} << 30);

    std::uint32_t limit() const { return limit_; }

    std::uint32_t smallest_factor(std::uint32_t n) const {
        check_range(n, 2);
        return spf_[n];
    }

    bool is_prime(std::uint32_t n) const {
        check_range(n, 2);
        return spf_[n] == n;
    }

    // Calls fn(prime, exponent) for each prime power in n, primes ascending.
    // n = 1 makes no calls.
    template <typename Fn>
    void for_each_prime_power(std::uint32_t n, Fn&& fn) const {
        check_range(n, 1);
        while (n > 1) {
            std::uint32_t p = spf_[n];
            std::uint32_t e = 0;
            do {
                n /= p;
                ++e;
            } while (n > 1 && spf_[n] == p);
            fn(p, e);
        }
    }

    std::vector<PrimePower> factor(std::uint32_t n) const;

    // Binary cache: magic, version, limit, checksum, then the spf entries
    // for [2, limit] as 32-bit little-endian words. load() validates the
    // header fields and the checksum.
    void save(const std::filesystem::path& path) const;
    static FactorTable load(const std::filesystem::path& path);

private:
    void check_range(std::uint32_t n, std::uint32_t lo) const;

    std::uint32_t limit_ = 0;
    std::vector<std::uint32_t> spf_;
};

// Smallest representation n = a^2 + b^2 with a <= b (a minimal), or
// absent. O(sqrt n) scan; serves as the independent oracle for the
// factorization-based classifiers below.
struct TwoSquareRep {
    std::uint64_t a;
    std::uint64_t b;
};
std::optional<TwoSquareRep> two_square_representation(std::uint64_t n);

// Classification via the factor table. All take 1 <= n <= table.limit().
bool is_sum_of_two_squares(std::uint32_t n, const FactorTable& table);
// Odd n whose prime factors are all 1 mod 4: exactly the odd n admitting
// a representation with coprime parts.
bool is_properly_represented_odd(std::uint32_t n, const FactorTable& table);
// Every prime divisor of n is congruent to u mod 4 (u in {1, 3});
// n = 1 qualifies for both classes (empty product).
bool in_class_d(unsigned u, std::uint32_t n, const FactorTable& table);
std::uint64_t euler_phi(std::uint32_t n, const FactorTable& table);
// prod_{p | n, p = 3 mod 4} (1 + 1/p), exact.
Rational bad_prime_product(std::uint32_t n, const FactorTable& table);

// Bit tables for the four indicators over [1, limit]. Immutable after
// build; construction may be range-partitioned and is bit-identical for
// any thread count.
class IndicatorSet {
public:
    static IndicatorSet build(const FactorTable& table, std::uint32_t limit = 0,
                              unsigned threads = 1);

    std::uint32_t limit() const { return limit_; }

    bool representable(std::uint64_t n) const {
        check(n);
        return b_.test(n);
    }
    bool properly_represented_odd(std::uint64_t n) const {
        check(n);
        return bprime_.test(n);
    }
    bool in_class_d(unsigned u, std::uint64_t n) const;

    const Bitset& representable_bits() const { return b_; }
    const Bitset& proper_bits() const { return bprime_; }
    const Bitset& class_d_bits(unsigned u) const;

    // All representable n <= max_value, ascending.
    std::vector<std::uint64_t> values_up_to(std::uint64_t max_value) const;
    // First `count` representable values. Throws CapacityError (with a
    // suggested limit) when the table does not reach that far.
    std::vector<std::uint64_t> first_values(std::uint64_t count) const;

private:
    void check(std::uint64_t n) const;

    std::uint32_t limit_ = 0;
    Bitset b_, bprime_, d1_, d3_;
};

}  // namespace twosq
