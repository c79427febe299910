#include "twosq/sieve.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

namespace twosq {

namespace {

std::uint64_t isqrt_u64(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const unsigned char* data, std::size_t len,
                    std::uint64_t h = kFnvOffset) {
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= kFnvPrime;
    }
    return h;
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

constexpr char kCacheMagic[8] = {'T', 'W', 'O', 'S', 'Q', 'S', 'P', 'F'};
constexpr std::uint32_t kCacheVersion = 1;

}  // namespace

void FactorTable::check_range(std::uint32_t n, std::uint32_t lo) const {
    if (n < lo || n > limit_)
        throw ValidationError("factor table lookup out of range: n=" +
                              std::to_string(n) + ", limit=" +
                              std::to_string(limit_));
}

FactorTable FactorTable::build(std::uint32_t limit, std::uint64_t max_bytes) {
    if (limit < 2) throw ValidationError("factor table limit must be >= 2");
    std::uint64_t bytes = 4 * (std::uint64_t{limit} + 1);
    if (bytes > max_bytes)
        throw CapacityError("factor table of limit " + std::to_string(limit) +
                                " needs " + std::to_string(bytes) +
                                " bytes, budget is " + std::to_string(max_bytes),
                            limit);

    FactorTable t;
    t.limit_ = limit;
    t.spf_.assign(std::uint64_t{limit} + 1, 0);
    std::vector<std::uint32_t> primes;
    primes.reserve(static_cast<std::size_t>(
        limit / std::max(1.0, std::log(double(limit)) - 1.1)));
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (t.spf_[i] == 0) {
            t.spf_[i] = i;
            primes.push_back(i);
        }
        for (std::uint32_t p : primes) {
            if (p > t.spf_[i]) break;
            std::uint64_t c = std::uint64_t{p} * i;
            if (c > limit) break;
            t.spf_[c] = p;
        }
    }
    return t;
}

std::vector<PrimePower> FactorTable::factor(std::uint32_t n) const {
    std::vector<PrimePower> out;
    for_each_prime_power(n, [&](std::uint32_t p, std::uint32_t e) {
        out.push_back({p, e});
    });
    return out;
}

void FactorTable::save(const std::filesystem::path& path) const {
    std::string payload;
    payload.reserve(4 * (std::uint64_t{limit_} - 1));
    for (std::uint32_t n = 2; n <= limit_; ++n) put_u32(payload, spf_[n]);
    std::uint64_t checksum =
        fnv1a(reinterpret_cast<const unsigned char*>(payload.data()),
              payload.size());

    std::string header;
    header.append(kCacheMagic, sizeof(kCacheMagic));
    put_u32(header, kCacheVersion);
    put_u32(header, 0);  // reserved
    put_u64(header, limit_);
    put_u64(header, checksum);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open cache file for writing: " +
                                    path.string());
    out.write(header.data(), std::streamsize(header.size()));
    out.write(payload.data(), std::streamsize(payload.size()));
    if (!out) throw ValidationError("short write to cache file: " + path.string());
}

FactorTable FactorTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open cache file: " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    constexpr std::size_t kHeaderSize = 8 + 4 + 4 + 8 + 8;
    if (data.size() < kHeaderSize)
        throw ValidationError("cache file truncated: " + path.string());
    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    if (std::memcmp(p, kCacheMagic, sizeof(kCacheMagic)) != 0)
        throw ValidationError("cache file has wrong magic: " + path.string());
    std::uint32_t version = get_u32(p + 8);
    if (version != kCacheVersion)
        throw ValidationError("unsupported cache version " +
                              std::to_string(version));
    std::uint64_t limit = get_u64(p + 16);
    std::uint64_t checksum = get_u64(p + 24);
    if (limit < 2 || limit > 0xffffffffULL)
        throw ValidationError("cache file limit out of range");
    std::size_t expected = kHeaderSize + 4 * (std::size_t(limit) - 1);
    if (data.size() != expected)
        throw ValidationError("cache file size mismatch: " + path.string());
    std::uint64_t actual = fnv1a(p + kHeaderSize, data.size() - kHeaderSize);
    if (actual != checksum)
        throw ValidationError("cache file checksum mismatch: " + path.string());

    FactorTable t;
    t.limit_ = static_cast<std::uint32_t>(limit);
    t.spf_.assign(limit + 1, 0);
    for (std::uint64_t n = 2; n <= limit; ++n)
        t.spf_[n] = get_u32(p + kHeaderSize + 4 * (n - 2));
    return t;
}

std::optional<TwoSquareRep> two_square_representation(std::uint64_t n) {
    for (std::uint64_t a = 0; 2 * a * a <= n; ++a) {
        std::uint64_t rest = n - a * a;
        std::uint64_t b = isqrt_u64(rest);
        if (b * b == rest) return TwoSquareRep{a, b};
    }
    return std::nullopt;
}

namespace {

void check_classify_range(std::uint32_t n, const FactorTable& table,
                          const char* op) {
    if (n < 1 || n > table.limit())
        throw ValidationError(std::string(op) + ": n=" + std::to_string(n) +
                              " outside [1, " + std::to_string(table.limit()) +
                              "]");
}

}  // namespace

bool is_sum_of_two_squares(std::uint32_t n, const FactorTable& table) {
    check_classify_range(n, table, "is_sum_of_two_squares");
    if (n == 1) return true;
    bool ok = true;
    table.for_each_prime_power(n, [&](std::uint32_t p, std::uint32_t e) {
        if (p % 4 == 3 && (e & 1)) ok = false;
    });
    return ok;
}

bool is_properly_represented_odd(std::uint32_t n, const FactorTable& table) {
    check_classify_range(n, table, "is_properly_represented_odd");
    if (n % 2 == 0) return false;
    if (n == 1) return true;
    bool ok = true;
    table.for_each_prime_power(n, [&](std::uint32_t p, std::uint32_t) {
        if (p % 4 != 1) ok = false;
    });
    return ok;
}

bool in_class_d(unsigned u, std::uint32_t n, const FactorTable& table) {
    if (u != 1 && u != 3) throw ValidationError("class D residue must be 1 or 3");
    check_classify_range(n, table, "in_class_d");
    if (n == 1) return true;
    bool ok = true;
    table.for_each_prime_power(n, [&](std::uint32_t p, std::uint32_t) {
        if (p % 4 != u) ok = false;
    });
    return ok;
}

std::uint64_t euler_phi(std::uint32_t n, const FactorTable& table) {
    std::uint64_t phi = 1;
    table.for_each_prime_power(n, [&](std::uint32_t p, std::uint32_t e) {
        std::uint64_t pe = 1;
        for (std::uint32_t i = 1; i < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    });
    return phi;
}

Rational bad_prime_product(std::uint32_t n, const FactorTable& table) {
    Rational prod(1);
    table.for_each_prime_power(n, [&](std::uint32_t p, std::uint32_t) {
        if (p % 4 == 3) prod *= Rational(p + 1, p);
    });
    return prod;
}

void IndicatorSet::check(std::uint64_t n) const {
    if (n < 1 || n > limit_)
        throw ValidationError("indicator lookup out of range: n=" +
                              std::to_string(n) + ", limit=" +
                              std::to_string(limit_));
}

bool IndicatorSet::in_class_d(unsigned u, std::uint64_t n) const {
    check(n);
    return class_d_bits(u).test(n);
}

const Bitset& IndicatorSet::class_d_bits(unsigned u) const {
    if (u == 1) return d1_;
    if (u == 3) return d3_;
    throw ValidationError("class D residue must be 1 or 3");
}

IndicatorSet IndicatorSet::build(const FactorTable& table, std::uint32_t limit,
                                 unsigned threads) {
    if (limit == 0) limit = table.limit();
    if (limit > table.limit())
        throw ValidationError("indicator limit exceeds factor table limit");
    IndicatorSet s;
    s.limit_ = limit;
    std::uint64_t bits = std::uint64_t{limit} + 1;
    s.b_ = Bitset(bits);
    s.bprime_ = Bitset(bits);
    s.d1_ = Bitset(bits);
    s.d3_ = Bitset(bits);

    auto classify_range = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t n = std::max<std::uint64_t>(lo, 1); n < hi; ++n) {
            if (n == 1) {
                s.b_.set(1);
                s.bprime_.set(1);
                s.d1_.set(1);
                s.d3_.set(1);
                continue;
            }
            bool rep = true;
            bool proper = (n & 1) != 0;
            bool c1 = true, c3 = true;
            table.for_each_prime_power(
                static_cast<std::uint32_t>(n),
                [&](std::uint32_t p, std::uint32_t e) {
                    switch (p % 4) {
                        case 1:
                            c3 = false;
                            break;
                        case 2:
                            c1 = c3 = false;
                            break;
                        default:  // 3 mod 4
                            c1 = false;
                            proper = false;
                            if (e & 1) rep = false;
                            break;
                    }
                });
            if (rep) s.b_.set(n);
            if (proper) s.bprime_.set(n);
            if (c1) s.d1_.set(n);
            if (c3) s.d3_.set(n);
        }
    };

    std::uint64_t total_words = (bits + 63) / 64;
    unsigned t = std::clamp<unsigned>(threads, 1, 256);
    if (t == 1 || total_words < 2 * t) {
        classify_range(1, bits);
    } else {
        // word-aligned chunks so no two threads touch the same word
        std::vector<std::thread> workers;
        workers.reserve(t);
        for (unsigned i = 0; i < t; ++i) {
            std::uint64_t w0 = total_words * i / t;
            std::uint64_t w1 = total_words * (i + 1) / t;
            workers.emplace_back(classify_range, w0 * 64,
                                 std::min(bits, w1 * 64));
        }
        for (auto& w : workers) w.join();
    }
    return s;
}

std::vector<std::uint64_t> IndicatorSet::values_up_to(
    std::uint64_t max_value) const {
    if (max_value > limit_)
        throw ValidationError("sequence request beyond indicator limit");
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= max_value; ++n)
        if (b_.test(n)) out.push_back(n);
    return out;
}

std::vector<std::uint64_t> IndicatorSet::first_values(
    std::uint64_t count) const {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    const auto& words = b_.words();
    for (std::size_t w = 0; w < words.size() && out.size() < count; ++w) {
        std::uint64_t word = words[w];
        while (word) {
            unsigned bit = std::countr_zero(word);
            word &= word - 1;
            std::uint64_t n = 64 * w + bit;
            if (n > limit_) break;
            out.push_back(n);
            if (out.size() == count) break;
        }
    }
    if (out.size() < count) {
        // Landau-based guess at how far the table must reach.
        double c = double(count);
        auto suggest = static_cast<std::uint64_t>(
            1.35 * c * std::sqrt(std::max(1.0, std::log(3.0 * c))));
        throw CapacityError(
            "only " + std::to_string(out.size()) + " representable values <= " +
                std::to_string(limit_) + ", need " + std::to_string(count) +
                "; suggest limit >= " + std::to_string(suggest),
            suggest);
    }
    return out;
}

}  // namespace twosq
