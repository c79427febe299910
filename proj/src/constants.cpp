#include "twosq/constants.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "twosq/errors.hpp"
#include "twosq/experiments.hpp"

namespace twosq {

CalibrationConstants calibrate(const IndicatorSet& ind, const FactorTable& table,
                               std::uint64_t M0, std::uint64_t upper_M,
                               std::uint64_t lemma2_x0, unsigned threads) {
    if (M0 < 16 || upper_M < 16)
        throw ValidationError("calibration blocks must satisfy M >= 16");
    CalibrationConstants c;
    c.calibrated_at_M = M0;
    c.upper_calibrated_at_M = upper_M;
    c.lemma2_calibrated_at_x = lemma2_x0;

    // dyadic block statistics at the smallest configured scale
    auto values = g_block(M0, ind, threads);
    std::vector<double> ratios(M0);
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < M0; ++i) {
        total += values[i];
        ratios[i] = double(values[i]) / g_lower_shape(M0 + i);
    }
    double lnln = std::log(std::log(double(M0)));
    double mean = double(total) / double(M0);
    c.measured_mean_ratio = mean * lnln / (double(M0) * std::pow(std::log(double(M0)), 0.25));
    c.c1_mean = kMeanFloorMargin * c.measured_mean_ratio;

    // membership threshold: the ratio quantile whose rank is a declared
    // multiple of the density the block must certify
    auto required = static_cast<std::uint64_t>(std::ceil(double(M0) / (lnln * lnln)));
    std::uint64_t rank = std::min<std::uint64_t>(
        M0 - 1, static_cast<std::uint64_t>(kDensityRankMargin * double(required)) - 1);
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    c.c_star = sorted[rank];
    c.measured_quantile_ratio = c.c_star;
    // count the same way the membership scan does (multiplied form)
    std::uint64_t members = 0;
    for (std::uint64_t i = 0; i < M0; ++i)
        members += double(values[i]) >= c.c_star * g_lower_shape(M0 + i);
    c.measured_member_count = members;
    c.c2_density = kDensityFloorMargin * double(members) * lnln * lnln / double(M0);

    // pointwise upper constant from its own (smaller) block
    auto upper_values = g_block(upper_M, ind, threads);
    double upper_max = 0.0;
    for (std::uint64_t i = 0; i < upper_M; ++i)
        upper_max = std::max(upper_max,
                             double(upper_values[i]) / g_upper_shape(upper_M + i));
    c.measured_upper_max = upper_max;
    c.upper_C = kUpperMargin * upper_max;

    // short-interval floor
    Lemma2Result l2 = lemma2_empirical(lemma2_x0, lemma2_x0, ind);
    c.measured_lemma2_min = l2.min_normalized;
    c.lemma2_floor = kLemma2Margin * l2.min_normalized;

    // Mertens-style cap on the bad prime product
    double mertens_max = 0.0;
    std::uint32_t mertens_scan =
        static_cast<std::uint32_t>(std::min<std::uint64_t>(10000, table.limit()));
    for (std::uint32_t n = 2; n <= mertens_scan; ++n) {
        double v = bad_prime_product(n, table).get_d() /
                   std::log(std::log(3.0 * double(n)));
        mertens_max = std::max(mertens_max, v);
    }
    c.measured_mertens_max = mertens_max;
    c.mertens_C = kMertensMargin * mertens_max;
    return c;
}

void save_constants(const CalibrationConstants& c,
                    const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["version"] = c.version;
    j["calibrated_at_M"] = c.calibrated_at_M;
    j["upper_calibrated_at_M"] = c.upper_calibrated_at_M;
    j["lemma2_calibrated_at_x"] = c.lemma2_calibrated_at_x;
    j["c_star"] = c.c_star;
    j["c1_mean"] = c.c1_mean;
    j["c2_density"] = c.c2_density;
    j["upper_C"] = c.upper_C;
    j["lemma2_floor"] = c.lemma2_floor;
    j["mertens_C"] = c.mertens_C;
    j["measured"] = {
        {"mean_ratio", c.measured_mean_ratio},
        {"quantile_ratio", c.measured_quantile_ratio},
        {"member_count", c.measured_member_count},
        {"upper_max", c.measured_upper_max},
        {"lemma2_min", c.measured_lemma2_min},
        {"mertens_max", c.measured_mertens_max},
    };
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw ValidationError("cannot write constants file: " + path.string());
    out << j.dump(2) << '\n';
}

CalibrationConstants load_constants(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open constants file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed constants file " + path.string() +
                              ": " + e.what());
    }
    CalibrationConstants c;
    try {
        c.version = j.at("version").get<int>();
        c.calibrated_at_M = j.at("calibrated_at_M").get<std::uint64_t>();
        c.upper_calibrated_at_M = j.at("upper_calibrated_at_M").get<std::uint64_t>();
        c.lemma2_calibrated_at_x = j.at("lemma2_calibrated_at_x").get<std::uint64_t>();
        c.c_star = j.at("c_star").get<double>();
        c.c1_mean = j.at("c1_mean").get<double>();
        c.c2_density = j.at("c2_density").get<double>();
        c.upper_C = j.at("upper_C").get<double>();
        c.lemma2_floor = j.at("lemma2_floor").get<double>();
        c.mertens_C = j.at("mertens_C").get<double>();
        const auto& m = j.at("measured");
        c.measured_mean_ratio = m.at("mean_ratio").get<double>();
        c.measured_quantile_ratio = m.at("quantile_ratio").get<double>();
        c.measured_member_count = m.at("member_count").get<std::uint64_t>();
        c.measured_upper_max = m.at("upper_max").get<double>();
        c.measured_lemma2_min = m.at("lemma2_min").get<double>();
        c.measured_mertens_max = m.at("mertens_max").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("constants file " + path.string() +
                              " missing fields: " + e.what());
    }
    if (c.version != 1)
        throw ValidationError("unsupported constants file version");
    return c;
}

}  // namespace twosq
