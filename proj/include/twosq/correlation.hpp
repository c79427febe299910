#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "twosq/rational.hpp"
#include "twosq/sieve.hpp"

namespace twosq {

// Difference counts of a strictly increasing prefix a_1..a_N:
// count(v) = #{(i, j) : i < j <= N, a_j - a_i = v}. Dense storage indexed
// by v; absent keys read as zero. Total mass is always N(N-1)/2 and is
// verified on every construction.
class DifferenceHistogram {
public:
    // Partitioned accumulation: origin indices are dealt round-robin to
    // threads, private count arrays are merged in index order, so counts
    // are identical for every thread count.
    static DifferenceHistogram build(std::span<const std::uint64_t> seq,
                                     std::uint64_t N, unsigned threads = 1);

    std::uint64_t prefix_length() const { return N_; }
    std::uint64_t total_mass() const { return mass_; }
    std::uint64_t max_difference() const {
        return counts_.empty() ? 0 : counts_.size() - 1;
    }

    std::uint64_t count(std::uint64_t v) const {
        return v < counts_.size() ? counts_[v] : 0;
    }

    // Visits (v, count) for nonzero entries, v ascending.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::uint64_t v = 1; v < counts_.size(); ++v)
            if (counts_[v]) fn(v, std::uint64_t{counts_[v]});
    }

private:
    std::uint64_t N_ = 0;
    std::uint64_t mass_ = 0;
    std::vector<std::uint32_t> counts_;
};

enum class EnergyMethod { exact_hash, accelerated };
const char* method_name(EnergyMethod m);

struct EnergyResult {
    std::uint64_t N = 0;
    std::uint64_t energy = 0;  // ordered quadruples, diagonal included
    EnergyMethod method = EnergyMethod::exact_hash;
    double normalized = 0.0;  // energy * sqrt(log N) / N^3
};

// E(N) = #{(n,m,k,l) <= N : a_m - a_n = a_k - a_l} = N^2 + 2 sum_v R(v)^2.
// exact_hash accumulates the difference multiset in O(N^2). accelerated
// autocorrelates the 0/1 indicator by FFT; outputs are rounded and then
// required to pass residual and mass checks, so a result is either the
// exact integer or an error, never a silently wrong count.
EnergyResult additive_energy(std::span<const std::uint64_t> seq,
                             std::uint64_t N, EnergyMethod method);

struct PairStatistic {
    std::uint64_t passing_mass = 0;  // sum of R(v) over passing v
    std::uint64_t N = 0;
    double value = 0.0;  // passing_mass / N
};

// T(alpha, N, s) = (1/N) sum_v R(v) [ ||v alpha|| <= s/N ]. The indicator
// is decided in exact rational arithmetic; the inequality is closed.
PairStatistic pair_correlation_statistic(const DifferenceHistogram& hist,
                                         const Rational& alpha,
                                         const Rational& s);

// Energy at each N on the representable sequence. By default runs the
// accelerated path and falls back to exact_hash on a capacity error.
std::vector<EnergyResult> energy_scaling_scan(const IndicatorSet& ind,
                                              std::span<const std::uint64_t> Ns,
                                              EnergyMethod method,
                                              bool allow_fallback = true);

}  // namespace twosq
