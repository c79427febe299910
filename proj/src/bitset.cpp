#include "twosq/bitset.hpp"

#include <bit>

namespace twosq {

std::uint64_t Bitset::count_prefix(std::uint64_t i) const {
    if (bits_ == 0) return 0;
    if (i >= bits_) i = bits_ - 1;
    std::uint64_t full = i >> 6;
    std::uint64_t total = 0;
    for (std::uint64_t w = 0; w < full; ++w)
        total += std::popcount(words_[w]);
    unsigned rem = unsigned(i & 63);
    std::uint64_t mask =
        rem == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (rem + 1)) - 1);
    total += std::popcount(words_[full] & mask);
    return total;
}

std::uint64_t Bitset::count_pairs_shifted(std::uint64_t lo, std::uint64_t hi,
                                          std::uint64_t offset) const {
    if (lo > hi) return 0;
    assert(hi + offset < bits_);
    const std::uint64_t nwords = words_.size();
    const std::uint64_t shift_words = offset >> 6;
    const unsigned shift_bits = unsigned(offset & 63);

    auto shifted_word = [&](std::uint64_t w) -> std::uint64_t {
        // bits of the set at positions w*64+offset .. w*64+63+offset
        std::uint64_t a =
            w + shift_words < nwords ? words_[w + shift_words] : 0;
        if (shift_bits == 0) return a;
        std::uint64_t b =
            w + shift_words + 1 < nwords ? words_[w + shift_words + 1] : 0;
        return (a >> shift_bits) | (b << (64 - shift_bits));
    };

    std::uint64_t w0 = lo >> 6, w1 = hi >> 6;
    std::uint64_t total = 0;
    for (std::uint64_t w = w0; w <= w1; ++w) {
        std::uint64_t both = words_[w] & shifted_word(w);
        if (w == w0) {
            unsigned r = unsigned(lo & 63);
            both &= ~std::uint64_t{0} << r;
        }
        if (w == w1) {
            unsigned r = unsigned(hi & 63);
            both &= r == 63 ? ~std::uint64_t{0}
                            : ((std::uint64_t{1} << (r + 1)) - 1);
        }
        total += std::popcount(both);
    }
    return total;
}

}  // namespace twosq
