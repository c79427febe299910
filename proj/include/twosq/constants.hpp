#pragma once
#include <cstdint>
#include <filesystem>

#include "twosq/sieve.hpp"

namespace twosq {

// Frozen calibration constants. The asymptotic statements behind the
// experiments carry implied constants, so each one is measured once at
// the smallest configured scale, shrunk by a declared safety margin, and
// then asserted unchanged at larger scales. The measured_* fields keep
// the raw measurements for audit.
struct CalibrationConstants {
    int version = 1;
    std::uint64_t calibrated_at_M = 0;        // dyadic block for c_star/c1/c2
    std::uint64_t upper_calibrated_at_M = 0;  // dyadic block for upper_C
    std::uint64_t lemma2_calibrated_at_x = 0;

    double c_star = 0.0;       // membership threshold coefficient
    double c1_mean = 0.0;      // dyadic mean floor coefficient
    double c2_density = 0.0;   // membership density floor coefficient
    double upper_C = 0.0;      // pointwise upper bound constant
    double lemma2_floor = 0.0; // short-interval normalized floor
    double mertens_C = 0.0;    // bad_prime_product(n) <= C loglog(3n)

    double measured_mean_ratio = 0.0;
    double measured_quantile_ratio = 0.0;
    std::uint64_t measured_member_count = 0;
    double measured_upper_max = 0.0;
    double measured_lemma2_min = 0.0;
    double measured_mertens_max = 0.0;
};

// Safety margins baked into the freeze step.
inline constexpr double kMeanFloorMargin = 0.5;    // c1 = margin * measured
inline constexpr double kDensityRankMargin = 2.0;  // quantile rank multiplier
inline constexpr double kDensityFloorMargin = 0.5; // c2 = margin * achieved
inline constexpr double kUpperMargin = 2.0;        // upper_C = margin * max
inline constexpr double kLemma2Margin = 0.5;       // floor = margin * min
inline constexpr double kMertensMargin = 1.5;      // C = margin * max

CalibrationConstants calibrate(const IndicatorSet& ind, const FactorTable& table,
                               std::uint64_t M0 = 4096,
                               std::uint64_t upper_M = 1024,
                               std::uint64_t lemma2_x0 = 100000,
                               unsigned threads = 1);

void save_constants(const CalibrationConstants& c,
                    const std::filesystem::path& path);
CalibrationConstants load_constants(const std::filesystem::path& path);

}  // namespace twosq
