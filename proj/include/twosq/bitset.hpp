#pragma once
#include <cassert>
#include <cstdint>
#include <vector>

namespace twosq {

// Flat bit array indexed by value: bit i = membership of i.
// Backed by 64-bit words, all bits start cleared.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::uint64_t bits)
        : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::uint64_t size() const { return bits_; }

    void set(std::uint64_t i) {
        assert(i < bits_);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    bool test(std::uint64_t i) const {
        assert(i < bits_);
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    // Number of set bits with index <= i.
    std::uint64_t count_prefix(std::uint64_t i) const;

    // #{m in [lo, hi] : test(m) && test(m + offset)}, word-parallel.
    // Requires hi + offset < size().
    std::uint64_t count_pairs_shifted(std::uint64_t lo, std::uint64_t hi,
                                      std::uint64_t offset) const;

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    bool operator==(const Bitset&) const = default;

private:
    std::uint64_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace twosq
