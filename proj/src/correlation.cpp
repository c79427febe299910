#include "twosq/correlation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>
#include <unordered_map>

#include "twosq/errors.hpp"

namespace twosq {

namespace {

// dense accumulation is used while the value span stays below this
constexpr std::uint64_t kDenseSpanBudget = std::uint64_t{1} << 27;
// FFT length budget for the accelerated energy path
constexpr std::uint64_t kTransformBudget = std::uint64_t{1} << 24;
// energies stay within uint64 for N up to 2e6 (E <= N^3)
constexpr std::uint64_t kEnergyPrefixBudget = 2'000'000;

void validate_prefix(std::span<const std::uint64_t> seq, std::uint64_t N,
                     const char* op) {
    if (N < 1) throw ValidationError(std::string(op) + ": N must be >= 1");
    if (N > seq.size())
        throw ValidationError(std::string(op) + ": N=" + std::to_string(N) +
                              " exceeds sequence length " +
                              std::to_string(seq.size()));
    for (std::uint64_t i = 1; i < N; ++i)
        if (seq[i] <= seq[i - 1])
            throw ValidationError(std::string(op) +
                                  ": sequence not strictly increasing at index " +
                                  std::to_string(i));
}

void fft_inplace(std::vector<std::complex<double>>& a, bool invert) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / double(len) * (invert ? -1 : 1);
        std::complex<double> step(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                auto u = a[i + j];
                auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= step;
            }
        }
    }
    if (invert)
        for (auto& x : a) x /= double(n);
}

// r(v) = #{(i, j) : a_j - a_i = v} for v = 0..span via autocorrelation of
// the 0/1 indicator. Rounded outputs must sit within 1e-3 of an integer
// and reproduce r(0) = N and the total pair mass, otherwise an error.
std::vector<std::uint64_t> autocorrelation_counts(
    std::span<const std::uint64_t> seq, std::uint64_t N) {
    std::uint64_t span = seq[N - 1] - seq[0];
    std::uint64_t L = std::bit_ceil(2 * span + 2);
    if (L > kTransformBudget)
        throw CapacityError("autocorrelation length " + std::to_string(L) +
                                " exceeds transform budget " +
                                std::to_string(kTransformBudget),
                            L);
    std::vector<std::complex<double>> f(L, {0.0, 0.0});
    for (std::uint64_t i = 0; i < N; ++i) f[seq[i] - seq[0]] = {1.0, 0.0};
    fft_inplace(f, false);
    for (auto& z : f) z = {std::norm(z), 0.0};
    fft_inplace(f, true);

    std::vector<std::uint64_t> r(span + 1);
    double max_residual = 0.0;
    for (std::uint64_t v = 0; v <= span; ++v) {
        double raw = f[v].real();
        double rounded = std::round(raw);
        max_residual = std::max(max_residual, std::abs(raw - rounded));
        if (rounded < 0) rounded = 0;
        r[v] = static_cast<std::uint64_t>(rounded);
    }
    if (max_residual > 1e-3)
        throw IndeterminateError(
            "autocorrelation residual " + std::to_string(max_residual) +
            " too large to certify integer counts");
    if (r[0] != N)
        throw IndeterminateError("autocorrelation diagonal mismatch");
    std::uint64_t mass = 0;
    for (std::uint64_t v = 1; v <= span; ++v) mass += r[v];
    if (mass != N * (N - 1) / 2)
        throw IndeterminateError("autocorrelation mass mismatch");
    return r;
}

}  // namespace

DifferenceHistogram DifferenceHistogram::build(
    std::span<const std::uint64_t> seq, std::uint64_t N, unsigned threads) {
    validate_prefix(seq, N, "difference_histogram");
    DifferenceHistogram h;
    h.N_ = N;
    if (N == 1) {
        h.mass_ = 0;
        return h;
    }
    std::uint64_t span = seq[N - 1] - seq[0];
    if (span >= kDenseSpanBudget)
        throw CapacityError("difference span " + std::to_string(span) +
                                " exceeds dense histogram budget",
                            span);
    h.counts_.assign(span + 1, 0);

    auto accumulate = [&](std::uint32_t* counts, std::uint64_t first,
                          std::uint64_t step) {
        for (std::uint64_t i = first; i + 1 < N; i += step) {
            std::uint64_t ai = seq[i];
            for (std::uint64_t j = i + 1; j < N; ++j) ++counts[seq[j] - ai];
        }
    };

    unsigned t = std::clamp<unsigned>(threads, 1, 256);
    if (t == 1 || N < 4096) {
        accumulate(h.counts_.data(), 0, 1);
    } else {
        // round-robin origin indices balance the triangular workload
        std::vector<std::vector<std::uint32_t>> partial(
            t, std::vector<std::uint32_t>(span + 1, 0));
        std::vector<std::thread> workers;
        workers.reserve(t);
        for (unsigned i = 0; i < t; ++i)
            workers.emplace_back(accumulate, partial[i].data(), i, t);
        for (auto& w : workers) w.join();
        for (unsigned i = 0; i < t; ++i)
            for (std::uint64_t v = 0; v <= span; ++v)
                h.counts_[v] += partial[i][v];
    }

    std::uint64_t mass = 0;
    for (std::uint32_t c : h.counts_) mass += c;
    if (mass != N * (N - 1) / 2)
        throw std::logic_error("difference histogram mass identity violated");
    h.mass_ = mass;
    return h;
}

const char* method_name(EnergyMethod m) {
    return m == EnergyMethod::exact_hash ? "exact_hash" : "accelerated";
}

EnergyResult additive_energy(std::span<const std::uint64_t> seq,
                             std::uint64_t N, EnergyMethod method) {
    validate_prefix(seq, N, "additive_energy");
    if (N > kEnergyPrefixBudget)
        throw CapacityError("energy prefix " + std::to_string(N) +
                                " exceeds uint64-safe budget",
                            N);
    EnergyResult res;
    res.N = N;
    res.method = method;
    if (N == 1) {
        res.energy = 1;
        res.normalized = 0.0;
        return res;
    }

    std::uint64_t energy = std::uint64_t{N} * N;  // diagonal v = 0
    if (method == EnergyMethod::accelerated) {
        auto r = autocorrelation_counts(seq, N);
        for (std::uint64_t v = 1; v < r.size(); ++v)
            energy += 2 * r[v] * r[v];
    } else {
        std::uint64_t span = seq[N - 1] - seq[0];
        if (span < kDenseSpanBudget) {
            std::vector<std::uint32_t> counts(span + 1, 0);
            for (std::uint64_t i = 0; i + 1 < N; ++i)
                for (std::uint64_t j = i + 1; j < N; ++j)
                    ++counts[seq[j] - seq[i]];
            for (std::uint64_t v = 1; v <= span; ++v)
                energy += 2 * std::uint64_t{counts[v]} * counts[v];
        } else {
            std::unordered_map<std::uint64_t, std::uint64_t> counts;
            counts.reserve(std::size_t(N) * 4);
            for (std::uint64_t i = 0; i + 1 < N; ++i)
                for (std::uint64_t j = i + 1; j < N; ++j)
                    ++counts[seq[j] - seq[i]];
            for (const auto& [v, c] : counts) energy += 2 * c * c;
        }
    }
    res.energy = energy;
    double n3 = double(N) * double(N) * double(N);
    res.normalized = double(energy) * std::sqrt(std::log(double(N))) / n3;
    return res;
}

PairStatistic pair_correlation_statistic(const DifferenceHistogram& hist,
                                         const Rational& alpha,
                                         const Rational& s) {
    if (s < 0) throw ValidationError("pair correlation scale s must be >= 0");
    PairStatistic out;
    out.N = hist.prefix_length();

    // v passes iff min(vp mod q, q - vp mod q) / q <= s / N, cross-multiplied
    // to d * s_den * N <= s_num * q over integers.
    const BigInt& p = alpha.get_num();
    const BigInt& q = alpha.get_den();
    BigInt rhs = s.get_num() * q;
    BigInt s_den = s.get_den();
    BigInt m, d, lhs;
    std::uint64_t mass = 0;
    hist.for_each([&](std::uint64_t v, std::uint64_t c) {
        mpz_mul_ui(m.get_mpz_t(), p.get_mpz_t(), v);
        mpz_mod(m.get_mpz_t(), m.get_mpz_t(), q.get_mpz_t());
        mpz_sub(d.get_mpz_t(), q.get_mpz_t(), m.get_mpz_t());
        if (mpz_cmp(m.get_mpz_t(), d.get_mpz_t()) < 0)
            mpz_set(d.get_mpz_t(), m.get_mpz_t());
        mpz_mul(lhs.get_mpz_t(), d.get_mpz_t(), s_den.get_mpz_t());
        mpz_mul_ui(lhs.get_mpz_t(), lhs.get_mpz_t(), out.N);
        if (mpz_cmp(lhs.get_mpz_t(), rhs.get_mpz_t()) <= 0) mass += c;
    });
    out.passing_mass = mass;
    out.value = double(mass) / double(out.N);
    return out;
}

std::vector<EnergyResult> energy_scaling_scan(const IndicatorSet& ind,
                                              std::span<const std::uint64_t> Ns,
                                              EnergyMethod method,
                                              bool allow_fallback) {
    if (Ns.empty()) return {};
    std::uint64_t max_n = *std::max_element(Ns.begin(), Ns.end());
    auto seq = ind.first_values(max_n);
    std::vector<EnergyResult> out;
    out.reserve(Ns.size());
    for (std::uint64_t n : Ns) {
        try {
            out.push_back(additive_energy(seq, n, method));
        } catch (const CapacityError&) {
            if (!allow_fallback || method != EnergyMethod::accelerated) throw;
            out.push_back(additive_energy(seq, n, EnergyMethod::exact_hash));
        }
    }
    return out;
}

}  // namespace twosq
