#include "twosq/diophantine.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "twosq/errors.hpp"

namespace twosq {

namespace {

// unbiased draw from [0, bound)
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw ValidationError("uniform_below: bound must be > 0");
    std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        std::uint64_t v = rng();
        if (v >= threshold) return v % bound;
    }
}

struct CfState {
    ContinuedFraction cf;

    void push(const BigInt& a) {
        std::size_t k = cf.partial_quotients.size();
        cf.partial_quotients.push_back(a);
        Convergent c;
        if (k == 0) {
            c.p = a;
            c.q = 1;
        } else if (k == 1) {
            c.p = a * cf.convergents[0].p + 1;
            c.q = a;
        } else {
            c.p = a * cf.convergents[k - 1].p + cf.convergents[k - 2].p;
            c.q = a * cf.convergents[k - 1].q + cf.convergents[k - 2].q;
        }
        cf.convergents.push_back(std::move(c));
    }
};

}  // namespace

Rational dist_nearest_int(const Rational& x) {
    const BigInt& den = x.get_den();
    BigInt frac;
    mpz_fdiv_r(frac.get_mpz_t(), x.get_num().get_mpz_t(), den.get_mpz_t());
    BigInt other = den - frac;
    Rational out(frac <= other ? frac : other, den);
    out.canonicalize();
    return out;
}

ContinuedFraction continued_fraction(const Rational& x, std::size_t max_depth) {
    if (max_depth < 1)
        throw ValidationError("continued fraction depth must be >= 1");
    CfState st;
    BigInt num = x.get_num(), den = x.get_den();
    while (st.cf.partial_quotients.size() < max_depth) {
        BigInt a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(),
                    den.get_mpz_t());
        st.push(a);
        if (r == 0) break;
        num = den;
        den = r;
    }
    return st.cf;
}

ContinuedFraction certified_continued_fraction(double x) {
    if (!std::isfinite(x))
        throw ValidationError("continued fraction input must be finite");
    Rational exact;
    mpq_set_d(exact.get_mpq_t(), x);
    // one-ulp uncertainty of the binary input
    double ulp = std::max(std::ldexp(std::abs(x), -52),
                          std::numeric_limits<double>::denorm_min());
    Rational eps;
    mpq_set_d(eps.get_mpq_t(), ulp);
    Rational lo_x = exact - eps, hi_x = exact + eps;

    ContinuedFraction full = continued_fraction(exact, 512);
    CfState st;
    st.cf.truncated_by_precision = true;
    for (std::size_t k = 0; k < full.partial_quotients.size(); ++k) {
        // quotient k is certified iff every real within eps of the input
        // lies strictly inside the cylinder of the prefix a_0..a_k, whose
        // endpoints are p_k/q_k and (p_k + p_{k-1})/(q_k + q_{k-1})
        BigInt pp = k > 0 ? full.convergents[k - 1].p : BigInt(1);
        BigInt pq = k > 0 ? full.convergents[k - 1].q : BigInt(0);
        Rational end1(full.convergents[k].p, full.convergents[k].q);
        end1.canonicalize();
        Rational end2(full.convergents[k].p + pp, full.convergents[k].q + pq);
        end2.canonicalize();
        if (end2 < end1) swap(end1, end2);
        if (!(end1 < lo_x && hi_x < end2)) break;
        st.push(full.partial_quotients[k]);
    }
    return st.cf;
}

ContinuedFraction continued_fraction(double x, std::size_t max_depth) {
    if (max_depth < 1)
        throw ValidationError("continued fraction depth must be >= 1");
    ContinuedFraction cf = certified_continued_fraction(x);
    if (cf.partial_quotients.size() < max_depth && cf.truncated_by_precision)
        throw IndeterminateError(
            "double precision certifies only " +
                std::to_string(cf.partial_quotients.size()) +
                " partial quotients, " + std::to_string(max_depth) +
                " requested",
            cf.partial_quotients.size());
    if (cf.partial_quotients.size() > max_depth) {
        cf.partial_quotients.resize(max_depth);
        cf.convergents.resize(max_depth);
    }
    return cf;
}

Rational construct_spiking_alpha(std::uint64_t n, std::uint64_t N,
                                 std::uint64_t K, std::uint64_t seed) {
    if (n < 1 || N < 1 || K < 1)
        throw ValidationError("construct_spiking_alpha requires n, N, K >= 1");
    BigInt q0 = BigInt(20) * BigInt(N) * BigInt(K) * BigInt(n);
    if (mpz_sizeinbase(q0.get_mpz_t(), 2) > 512)
        throw CapacityError("spiking alpha denominator exceeds precision budget");

    std::mt19937_64 rng(seed);
    std::uint64_t r = uniform_below(rng, n);
    while (std::gcd(r, n) != 1) r = uniform_below(rng, n);
    bool negative = (rng() & 1) != 0;

    BigInt q = q0;
    BigInt nz(static_cast<unsigned long>(n));
    while (gcd(q, nz) != 1) q += 1;

    Rational alpha(static_cast<unsigned long>(r), static_cast<unsigned long>(n));
    alpha.canonicalize();
    Rational delta(1);
    delta /= Rational(q);
    alpha += negative ? -delta : delta;

    // exact postcondition check: ||n k alpha|| <= 1/(10N) for k = 1..K
    Rational bound(1, 10 * static_cast<unsigned long>(N));
    bound.canonicalize();
    Rational base(static_cast<unsigned long>(r), static_cast<unsigned long>(n));
    base.canonicalize();
    if (alpha == base)
        throw std::logic_error("spiking alpha collapsed onto r/n");
    for (std::uint64_t k = 1; k <= K; ++k) {
        Rational arg = alpha;
        arg *= Rational(BigInt(static_cast<unsigned long>(n)) *
                        BigInt(static_cast<unsigned long>(k)));
        Rational d = dist_nearest_int(arg);
        if (d > bound || sgn(d) == 0)
            throw std::logic_error(
                "spiking alpha postcondition failed at k = " +
                std::to_string(k));
    }
    return alpha;
}

std::vector<ConvergentScanRow> convergent_denominator_scan(
    const Rational& alpha, std::size_t depth,
    const std::function<bool(const BigInt&)>& membership) {
    ContinuedFraction cf = continued_fraction(alpha, depth);
    std::vector<ConvergentScanRow> rows;
    rows.reserve(cf.convergents.size());
    for (std::size_t k = 0; k < cf.convergents.size(); ++k) {
        if (k == 0 && cf.convergents[0].p == 0) continue;
        ConvergentScanRow row;
        row.k = k;
        row.q = cf.convergents[k].q;
        row.member = membership(row.q);
        rows.push_back(std::move(row));
    }
    return rows;
}

double vaaler_partial_sum(const std::function<bool(std::uint32_t)>& in_set,
                          double h, std::uint32_t X, const FactorTable& table) {
    if (!(h > 0.0 && h < 1.0))
        throw ValidationError("vaaler_partial_sum requires 0 < h < 1");
    if (X < 2 || X > table.limit())
        throw ValidationError("vaaler_partial_sum requires 2 <= X <= limit");
    long double sum = 0.0L, comp = 0.0L;  // Kahan
    for (std::uint32_t n = 2; n <= X; ++n) {
        if (!in_set(n)) continue;
        long double nn = n;
        long double term = static_cast<long double>(euler_phi(n, table)) /
                           (nn * nn * std::pow((long double)std::log(nn), (long double)h));
        long double y = term - comp;
        long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return static_cast<double>(sum);
}

Rational random_rational(std::uint64_t seed, unsigned denominator_bits) {
    if (denominator_bits < 2 || denominator_bits > 4096)
        throw ValidationError("denominator bits must be in [2, 4096]");
    std::mt19937_64 rng(seed);
    auto draw_bits = [&](unsigned bits) {
        BigInt v = 0;
        unsigned produced = 0;
        while (produced < bits) {
            unsigned chunk = std::min(64u, bits - produced);
            std::uint64_t w = rng();
            if (chunk < 64) w &= (std::uint64_t{1} << chunk) - 1;
            v <<= chunk;
            v += BigInt(static_cast<unsigned long>(w));
            produced += chunk;
        }
        return v;
    };
    BigInt den = draw_bits(denominator_bits);
    mpz_setbit(den.get_mpz_t(), denominator_bits - 1);  // force exact bit count
    BigInt num = draw_bits(denominator_bits) % den;
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace twosq
