// twosq: experiments on the gap and pair structure of the integers
// representable as a sum of two squares.
//
// Subcommands cover sieving, counting along progressions and short
// intervals, additive energy, the pair correlation statistic T, the lag
// correlation function G, thresholded member sets, the end-to-end spike
// demonstration, and exact Diophantine helpers. Output is CSV or JSON;
// every randomized choice is driven by an explicit --seed, so identical
// invocations produce identical bytes.
//
// Exit codes: 0 success, 1 validation error, 2 capacity error,
// 3 failed demonstration.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "twosq/constants.hpp"
#include "twosq/counting.hpp"
#include "twosq/correlation.hpp"
#include "twosq/diophantine.hpp"
#include "twosq/errors.hpp"
#include "twosq/experiments.hpp"
#include "twosq/sieve.hpp"

using namespace twosq;
using nlohmann::ordered_json;

namespace {

// shortest round-trip decimal form, shared by CSV and JSON output
std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct CommonOptions {
    std::uint64_t limit = 1000000;
    unsigned threads = 1;
    std::string format = "csv";
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOptions& opt, std::uint64_t default_limit,
                const std::string& default_format) {
    opt.limit = default_limit;
    opt.format = default_format;
    cmd->add_option("--limit", opt.limit,
                    "sieve limit in integers (upper bound of the tables)")
        ->capture_default_str();
    cmd->add_option("--threads", opt.threads,
                    "worker thread count (results are identical for any value)")
        ->capture_default_str();
    cmd->add_option("--format", opt.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", opt.out_path,
                    "output file path (default: standard output)");
}

void emit(const CommonOptions& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(opt.out_path, std::ios::trunc);
    if (!f) throw ValidationError("cannot open output file: " + opt.out_path);
    f << text;
}

// tabular emission: one header, rows of (string) cells
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render(const std::string& format) const {
        if (format == "json") {
            ordered_json arr = ordered_json::array();
            for (const auto& row : rows) {
                ordered_json obj;
                for (std::size_t i = 0; i < header.size(); ++i)
                    obj[header[i]] = row[i];
                arr.push_back(obj);
            }
            return arr.dump(2) + "\n";
        }
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i)
            os << header[i] << (i + 1 < header.size() ? ',' : '\n');
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                os << row[i] << (i + 1 < row.size() ? ',' : '\n');
        return os.str();
    }
};

struct SieveContext {
    FactorTable table;
    IndicatorSet ind;
};

SieveContext build_context(std::uint64_t limit, unsigned threads) {
    if (limit < 2 || limit > 0xffffffffULL)
        throw ValidationError("--limit must lie in [2, 2^32)");
    SieveContext ctx{FactorTable::build(static_cast<std::uint32_t>(limit)),
                     IndicatorSet()};
    ctx.ind = IndicatorSet::build(ctx.table, 0, threads);
    return ctx;
}

double resolve_c(const std::string& c_text, const std::string& constants_path,
                 const SieveContext& ctx, unsigned threads) {
    if (c_text != "auto") {
        double v = 0.0;
        auto res = std::from_chars(c_text.data(), c_text.data() + c_text.size(), v);
        if (res.ec != std::errc() || res.ptr != c_text.data() + c_text.size())
            throw ValidationError("--c expects a number or 'auto'");
        return v;
    }
    if (!constants_path.empty())
        return load_constants(constants_path).c_star;
    std::filesystem::path fallback = "constants.json";
    if (std::filesystem::exists(fallback))
        return load_constants(fallback).c_star;
    // no frozen file available: calibrate in-process at the default scale
    return calibrate(ctx.ind, ctx.table, 4096, 1024,
                     std::min<std::uint64_t>(100000, ctx.ind.limit() / 2),
                     threads)
        .c_star;
}

int run_sieve(const CommonOptions& opt, const std::string& save_path,
              const std::string& load_path) {
    std::optional<SieveContext> ctx;
    if (!load_path.empty()) {
        FactorTable t = FactorTable::load(load_path);
        IndicatorSet ind = IndicatorSet::build(t, 0, opt.threads);
        ctx.emplace(SieveContext{std::move(t), std::move(ind)});
    } else {
        ctx.emplace(build_context(opt.limit, opt.threads));
    }
    if (!save_path.empty()) ctx->table.save(save_path);

    std::uint64_t lim = ctx->ind.limit();
    ordered_json j;
    j["limit"] = lim;
    j["representable_count"] = count_representable(lim, ctx->ind);
    j["properly_represented_odd_count"] =
        ctx->ind.proper_bits().count_prefix(lim);
    j["class_d1_count"] = ctx->ind.class_d_bits(1).count_prefix(lim);
    j["class_d3_count"] = ctx->ind.class_d_bits(3).count_prefix(lim);
    if (lim >= 16) j["landau_ratio"] = landau_ratio(lim, ctx->ind);
    emit(opt, j.dump(2) + "\n");
    return 0;
}

int run_count(const CommonOptions& opt, const std::string& what,
              const std::vector<std::uint64_t>& xs, std::uint64_t q,
              std::uint64_t a, std::uint64_t y, unsigned u) {
    if (what == "cq") {
        Table t;
        t.header = {"q", "c_q"};
        t.rows.push_back({std::to_string(q), fmt_double(progression_constant(q))});
        emit(opt, t.render(opt.format));
        return 0;
    }
    auto ctx = build_context(opt.limit, opt.threads);
    Table t;
    t.header = {"x", "raw_count", "main_term", "normalized"};
    for (std::uint64_t x : xs) {
        CountReport r;
        if (what == "representable") {
            r.raw_count = count_representable(x, ctx.ind);
            r.main_term = x >= 2 ? kLandauRamanujan * double(x) /
                                       std::sqrt(std::log(double(x)))
                                 : 0.0;
            r.normalized = r.main_term > 0 ? r.raw_count / r.main_term : 0.0;
        } else if (what == "progression") {
            r.raw_count =
                count_representable_progression({.x = x, .q = q, .a = a}, ctx.ind);
            double ax = double(count_representable(x, ctx.ind));
            r.main_term = ax / double(q);
            r.normalized = r.main_term > 0 ? r.raw_count / r.main_term : 0.0;
        } else if (what == "proper") {
            r = count_proper_progression({.x = x, .q = q, .a = a}, ctx.ind);
        } else if (what == "interval") {
            r = short_interval_count({.x = x, .y = y, .q = q, .a = a}, ctx.ind);
        } else if (what == "landau") {
            r.raw_count = count_representable(x, ctx.ind);
            r.main_term = double(x) / std::sqrt(std::log(double(x)));
            r.normalized = landau_ratio(x, ctx.ind);
        } else if (what == "dclass") {
            r = count_class_d(u, x, ctx.ind);
        } else {
            throw ValidationError("unknown --what mode: " + what);
        }
        t.rows.push_back({std::to_string(x), std::to_string(r.raw_count),
                          fmt_double(r.main_term), fmt_double(r.normalized)});
    }
    emit(opt, t.render(opt.format));
    return 0;
}

int run_energy(const CommonOptions& opt, const std::vector<std::uint64_t>& Ns,
               const std::vector<std::uint64_t>& seq_values,
               const std::string& method, bool timing) {
    Table t;
    t.header = {"N", "E", "normalized", "method"};
    if (timing) t.header.push_back("wall_ms");

    auto run_one = [&](std::span<const std::uint64_t> seq, std::uint64_t N,
                       EnergyMethod m) {
        auto start = std::chrono::steady_clock::now();
        EnergyResult r = additive_energy(seq, N, m);
        auto ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::vector<std::string> row{
            std::to_string(r.N), std::to_string(r.energy),
            fmt_double(r.normalized), method_name(r.method)};
        if (timing) row.push_back(fmt_double(ms));
        t.rows.push_back(std::move(row));
    };

    std::vector<std::uint64_t> seq = seq_values;
    if (seq.empty()) {
        auto ctx = build_context(opt.limit, opt.threads);
        std::uint64_t max_n = *std::max_element(Ns.begin(), Ns.end());
        seq = ctx.ind.first_values(max_n);
    }
    for (std::uint64_t n : Ns) {
        if (method == "both") {
            run_one(seq, n, EnergyMethod::exact_hash);
            run_one(seq, n, EnergyMethod::accelerated);
        } else if (method == "exact") {
            run_one(seq, n, EnergyMethod::exact_hash);
        } else if (method == "accel") {
            run_one(seq, n, EnergyMethod::accelerated);
        } else {  // auto
            try {
                run_one(seq, n, EnergyMethod::accelerated);
            } catch (const CapacityError&) {
                run_one(seq, n, EnergyMethod::exact_hash);
            }
        }
    }
    emit(opt, t.render(opt.format));
    return 0;
}

int run_paircorr(const CommonOptions& opt, std::uint64_t N,
                 const std::string& alpha_text, const std::string& s_text,
                 const std::vector<std::uint64_t>& seq_values,
                 std::optional<std::uint64_t> random_seed) {
    Rational alpha = random_seed ? random_rational(*random_seed)
                                 : parse_rational(alpha_text);
    Rational s = parse_rational(s_text);

    std::vector<std::uint64_t> seq = seq_values;
    if (seq.empty()) {
        auto ctx = build_context(opt.limit, opt.threads);
        seq = ctx.ind.first_values(N);
    }
    auto hist = DifferenceHistogram::build(seq, N, opt.threads);
    auto t = pair_correlation_statistic(hist, alpha, s);

    ordered_json j;
    j["N"] = t.N;
    j["alpha"] = rational_str(alpha);
    j["s"] = rational_str(s);
    j["passing_mass"] = t.passing_mass;
    j["T_value"] = t.value;
    emit(opt, j.dump(2) + "\n");
    return 0;
}

int run_gfunc(const CommonOptions& opt, const std::vector<std::uint64_t>& ns,
              std::uint64_t M, const std::string& c_text,
              const std::string& constants_path) {
    auto ctx = build_context(opt.limit, opt.threads);
    if (M > 0) {
        double c = resolve_c(c_text, constants_path, ctx, opt.threads);
        DyadicStats st = dyadic_g_stats(M, c, ctx.ind, opt.threads);
        ordered_json j;
        j["M"] = M;
        j["mean"] = st.mean;
        j["threshold_count"] = st.threshold_count;
        j["c_used"] = st.c_used;
        emit(opt, j.dump(2) + "\n");
        return 0;
    }
    Table t;
    t.header = {"n", "K", "M_limit", "G", "bound", "ratio"};
    for (std::uint64_t n : ns) {
        GValue g = compute_g(n, ctx.ind);
        double bound = g_lower_shape(n);
        t.rows.push_back({std::to_string(g.n), std::to_string(g.K),
                          std::to_string(g.M_limit), std::to_string(g.value),
                          fmt_double(bound),
                          fmt_double(bound > 0 ? double(g.value) / bound : 0.0)});
    }
    emit(opt, t.render(opt.format));
    return 0;
}

int run_bset(const CommonOptions& opt, std::uint64_t M, const std::string& c_text,
             const std::string& constants_path) {
    auto ctx = build_context(opt.limit, opt.threads);
    double c = resolve_c(c_text, constants_path, ctx, opt.threads);
    auto members = b_set_members(M, c, ctx.ind, opt.threads);
    Table t;
    t.header = {"n", "G", "ratio"};
    for (std::uint64_t n : members) {
        GValue g = compute_g(n, ctx.ind);
        double bound = g_lower_shape(n);
        t.rows.push_back({std::to_string(n), std::to_string(g.value),
                          fmt_double(bound > 0 ? double(g.value) / bound : 0.0)});
    }
    emit(opt, t.render(opt.format));
    return 0;
}

int run_spike(const CommonOptions& opt, std::uint64_t M, const std::string& c_text,
              std::uint64_t seed, const std::string& constants_path,
              std::optional<std::uint64_t> control_seed) {
    auto ctx = build_context(opt.limit, opt.threads);
    double c = resolve_c(c_text, constants_path, ctx, opt.threads);
    ExperimentReport rep = spike_demo(M, c, seed, ctx.ind, opt.threads);

    ordered_json j = ordered_json::parse(experiment_report_json(rep));
    if (control_seed) {
        // negative control: a generic alpha at the same prefix length
        Rational control = random_rational(*control_seed);
        auto seq = ctx.ind.first_values(10 * rep.N);
        auto hist = DifferenceHistogram::build(seq, 10 * rep.N, opt.threads);
        auto t = pair_correlation_statistic(hist, control, Rational(1));
        j["control"] = {{"seed", *control_seed},
                        {"alpha", rational_str(control)},
                        {"T_value", t.value}};
    }
    emit(opt, j.dump(2) + "\n");
    return rep.passed ? 0 : 3;
}

int run_lemma2(const CommonOptions& opt, std::uint64_t x, std::uint64_t y) {
    auto ctx = build_context(opt.limit, opt.threads);
    Lemma2Result r = lemma2_empirical(x, y, ctx.ind);
    ordered_json j;
    j["x"] = x;
    j["y"] = y;
    j["q_max"] = static_cast<std::uint64_t>(std::log(double(x)));
    j["min_normalized"] = r.min_normalized;
    j["q"] = r.q;
    j["a"] = r.a;
    j["raw_count"] = r.raw_count;
    emit(opt, j.dump(2) + "\n");
    return 0;
}

int run_vaaler(const CommonOptions& opt, double h,
               const std::vector<std::uint64_t>& Xs, const std::string& set_name) {
    auto ctx = build_context(opt.limit, opt.threads);
    std::function<bool(std::uint32_t)> pred;
    if (set_name == "all")
        pred = [](std::uint32_t) { return true; };
    else if (set_name == "none")
        pred = [](std::uint32_t) { return false; };
    else if (set_name == "d1")
        pred = [&](std::uint32_t n) { return ctx.ind.in_class_d(1, n); };
    else if (set_name == "bprime")
        pred = [&](std::uint32_t n) { return ctx.ind.properly_represented_odd(n); };
    else
        throw ValidationError("--set must be all, none, d1, or bprime");

    Table t;
    t.header = {"X", "sum"};
    for (std::uint64_t X : Xs) {
        if (X > ctx.ind.limit())
            throw ValidationError("X exceeds the sieve limit");
        double s = vaaler_partial_sum(pred, h, static_cast<std::uint32_t>(X),
                                      ctx.table);
        t.rows.push_back({std::to_string(X), fmt_double(s)});
    }
    emit(opt, t.render(opt.format));
    return 0;
}

int run_alpha(const CommonOptions& opt, std::uint64_t n, std::uint64_t N,
              std::uint64_t K, std::uint64_t seed, const std::string& expand,
              std::uint64_t depth, const std::string& membership) {
    if (!expand.empty()) {
        Rational x = parse_rational(expand);
        std::function<bool(const BigInt&)> member;
        if (membership == "twosquares")
            member = [](const BigInt& q) {
                return q.fits_ulong_p() &&
                       two_square_representation(q.get_ui()).has_value();
            };
        else if (membership == "none")
            member = [](const BigInt&) { return false; };
        else
            throw ValidationError("--membership must be twosquares or none");
        auto rows = convergent_denominator_scan(x, depth, member);
        Table t;
        t.header = {"k", "q_k", "member"};
        for (const auto& row : rows)
            t.rows.push_back({std::to_string(row.k), row.q.get_str(),
                              row.member ? "1" : "0"});
        emit(opt, t.render(opt.format));
        return 0;
    }
    Rational alpha = construct_spiking_alpha(n, N, K, seed);
    Rational worst(0);
    for (std::uint64_t k = 1; k <= K; ++k) {
        Rational d = dist_nearest_int(alpha * Rational(BigInt(n) * BigInt(k)));
        if (d > worst) worst = d;
    }
    ordered_json j;
    j["n"] = n;
    j["N"] = N;
    j["K"] = K;
    j["seed"] = seed;
    j["alpha"] = rational_str(alpha);
    j["max_dist"] = rational_str(worst);
    j["bound"] = rational_str(Rational(1, 10 * static_cast<unsigned long>(N)));
    emit(opt, j.dump(2) + "\n");
    return 0;
}

int run_calibrate(const CommonOptions& opt, std::uint64_t M0,
                  std::uint64_t upper_M, std::uint64_t x0,
                  const std::string& out_path) {
    auto ctx = build_context(opt.limit, opt.threads);
    CalibrationConstants c =
        calibrate(ctx.ind, ctx.table, M0, upper_M, x0, opt.threads);
    if (!out_path.empty()) save_constants(c, out_path);
    ordered_json j;
    j["calibrated_at_M"] = c.calibrated_at_M;
    j["c_star"] = c.c_star;
    j["c1_mean"] = c.c1_mean;
    j["c2_density"] = c.c2_density;
    j["upper_C"] = c.upper_C;
    j["lemma2_floor"] = c.lemma2_floor;
    j["mertens_C"] = c.mertens_C;
    j["written_to"] = out_path;
    emit(opt, j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"experiments on sums of two squares: sieving, counting, "
                 "pair correlation, additive energy"};
    app.require_subcommand(1);

    // sieve
    CommonOptions sieve_opt;
    std::string sieve_save, sieve_load;
    auto* sieve_cmd = app.add_subcommand("sieve", "build tables and summarize");
    add_common(sieve_cmd, sieve_opt, 1000000, "json");
    sieve_cmd->add_option("--save", sieve_save, "write the factor table cache");
    sieve_cmd->add_option("--load", sieve_load, "load a factor table cache");

    // count
    CommonOptions count_opt;
    std::string count_what = "representable";
    std::vector<std::uint64_t> count_x{100};
    std::uint64_t count_q = 1, count_a = 0, count_y = 0;
    unsigned count_u = 1;
    auto* count_cmd = app.add_subcommand("count", "counting functions");
    add_common(count_cmd, count_opt, 1000000, "csv");
    count_cmd->add_option("--what", count_what,
                          "representable|progression|proper|interval|landau|"
                          "dclass|cq")
        ->capture_default_str();
    count_cmd->add_option("--x", count_x, "query points (integers)")
        ->delimiter(',');
    count_cmd->add_option("--q", count_q, "modulus")->capture_default_str();
    count_cmd->add_option("--a", count_a, "residue, 0 <= a < q")
        ->capture_default_str();
    count_cmd->add_option("--y", count_y, "interval length for --what interval")
        ->capture_default_str();
    count_cmd->add_option("--u", count_u, "class residue for --what dclass: 1 or 3")
        ->capture_default_str();

    // energy
    CommonOptions energy_opt;
    std::vector<std::uint64_t> energy_N{1024};
    std::vector<std::uint64_t> energy_seq;
    std::string energy_method = "auto";
    bool energy_timing = false;
    auto* energy_cmd = app.add_subcommand("energy", "additive energy scan");
    add_common(energy_cmd, energy_opt, 1000000, "csv");
    energy_cmd->add_option("--N", energy_N, "prefix lengths (element counts)")
        ->delimiter(',');
    energy_cmd->add_option("--seq", energy_seq,
                           "explicit strictly increasing sequence (overrides "
                           "the sieved sequence)")
        ->delimiter(',');
    energy_cmd->add_option("--method", energy_method, "exact|accel|auto|both")
        ->check(CLI::IsMember({"exact", "accel", "auto", "both"}))
        ->capture_default_str();
    energy_cmd->add_flag("--timing", energy_timing,
                         "append a wall_ms column (non-deterministic)");

    // paircorr
    CommonOptions pc_opt;
    std::uint64_t pc_N = 1000;
    std::string pc_alpha = "0/1", pc_s = "1/1";
    std::vector<std::uint64_t> pc_seq;
    std::uint64_t pc_random_seed = 0;
    bool pc_random = false;
    auto* pc_cmd = app.add_subcommand("paircorr", "pair correlation statistic T");
    add_common(pc_cmd, pc_opt, 1000000, "json");
    pc_cmd->add_option("--N", pc_N, "prefix length (element count)")
        ->capture_default_str();
    pc_cmd->add_option("--alpha", pc_alpha, "exact rational num/den")
        ->capture_default_str();
    pc_cmd->add_option("--s", pc_s, "scale s as exact rational num/den")
        ->capture_default_str();
    pc_cmd->add_option("--seq", pc_seq, "explicit sequence")->delimiter(',');
    auto* pc_rand = pc_cmd->add_option(
        "--random-alpha-seed", pc_random_seed,
        "draw alpha as a seeded 128-bit-denominator rational");
    (void)pc_rand;

    // gfunc
    CommonOptions g_opt;
    std::vector<std::uint64_t> g_n;
    std::uint64_t g_M = 0;
    std::string g_c = "auto", g_constants;
    auto* g_cmd = app.add_subcommand("gfunc", "lag correlation sums G(n)");
    add_common(g_cmd, g_opt, 1000000, "csv");
    g_cmd->add_option("--n", g_n, "evaluation points")->delimiter(',');
    g_cmd->add_option("--M", g_M, "dyadic block start (switches to block stats)");
    g_cmd->add_option("--c", g_c, "threshold coefficient or 'auto'")
        ->capture_default_str();
    g_cmd->add_option("--constants", g_constants, "frozen constants file");

    // bset
    CommonOptions b_opt;
    std::uint64_t b_M = 4096;
    std::string b_c = "auto", b_constants;
    auto* b_cmd = app.add_subcommand("bset", "thresholded members of [M, 2M)");
    add_common(b_cmd, b_opt, 1000000, "csv");
    b_cmd->add_option("--M", b_M, "dyadic block start")->capture_default_str();
    b_cmd->add_option("--c", b_c, "threshold coefficient or 'auto'")
        ->capture_default_str();
    b_cmd->add_option("--constants", b_constants, "frozen constants file");

    // spike
    CommonOptions spike_opt;
    std::uint64_t spike_M = 4096, spike_seed = 1;
    std::string spike_c = "auto", spike_constants;
    std::uint64_t spike_control_seed = 0;
    bool spike_control = false;
    auto* spike_cmd =
        app.add_subcommand("spike", "end-to-end spike demonstration");
    add_common(spike_cmd, spike_opt, 10000000, "json");
    spike_cmd->add_option("--M", spike_M, "dyadic block start")
        ->capture_default_str();
    spike_cmd->add_option("--c", spike_c, "threshold coefficient or 'auto'")
        ->capture_default_str();
    spike_cmd->add_option("--seed", spike_seed, "seed for the alpha draw")
        ->capture_default_str();
    spike_cmd->add_option("--constants", spike_constants, "frozen constants file");
    auto* spike_ctl = spike_cmd->add_option(
        "--control-seed", spike_control_seed,
        "also report T for a seeded random alpha (negative control)");
    (void)spike_ctl;

    // lemma2
    CommonOptions l2_opt;
    std::uint64_t l2_x = 100000, l2_y = 100000;
    auto* l2_cmd = app.add_subcommand(
        "lemma2", "minimum normalized short-interval progression count");
    add_common(l2_cmd, l2_opt, 1000000, "json");
    l2_cmd->add_option("--x", l2_x, "interval start")->capture_default_str();
    l2_cmd->add_option("--y", l2_y, "interval length")->capture_default_str();

    // vaaler
    CommonOptions v_opt;
    double v_h = 0.9;
    std::vector<std::uint64_t> v_X{1000};
    std::string v_set = "all";
    auto* v_cmd = app.add_subcommand(
        "vaaler", "partial sums of phi(n)/(n^2 (log n)^h) over a set");
    add_common(v_cmd, v_opt, 1000000, "csv");
    v_cmd->add_option("--h", v_h, "exponent, 0 < h < 1")->capture_default_str();
    v_cmd->add_option("--X", v_X, "partial sum endpoints")->delimiter(',');
    v_cmd->add_option("--set", v_set, "all|none|d1|bprime")
        ->capture_default_str();

    // alpha
    CommonOptions a_opt;
    std::uint64_t a_n = 10, a_N = 100, a_K = 2, a_seed = 1, a_depth = 32;
    std::string a_expand, a_membership = "twosquares";
    auto* a_cmd = app.add_subcommand(
        "alpha", "construct a spiking alpha or scan convergent denominators");
    add_common(a_cmd, a_opt, 1000000, "json");
    a_cmd->add_option("--n", a_n, "approximation index")->capture_default_str();
    a_cmd->add_option("--N", a_N, "target scale")->capture_default_str();
    a_cmd->add_option("--K", a_K, "protected lag count")->capture_default_str();
    a_cmd->add_option("--seed", a_seed, "seed for r and the drift sign")
        ->capture_default_str();
    a_cmd->add_option("--expand", a_expand,
                      "expand this rational into convergents instead");
    a_cmd->add_option("--depth", a_depth, "expansion depth")
        ->capture_default_str();
    a_cmd->add_option("--membership", a_membership,
                      "denominator predicate: twosquares or none")
        ->capture_default_str();

    // calibrate
    CommonOptions cal_opt;
    std::uint64_t cal_M0 = 4096, cal_upper = 1024, cal_x0 = 100000;
    std::string cal_out = "constants.json";
    auto* cal_cmd = app.add_subcommand(
        "calibrate", "measure and freeze the calibration constants");
    add_common(cal_cmd, cal_opt, 1000000, "json");
    cal_cmd->add_option("--M0", cal_M0, "dyadic calibration block")
        ->capture_default_str();
    cal_cmd->add_option("--upper-M", cal_upper, "upper-bound calibration block")
        ->capture_default_str();
    cal_cmd->add_option("--x0", cal_x0, "short-interval calibration scale")
        ->capture_default_str();
    cal_cmd->add_option("--write", cal_out, "constants file to write")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sieve_cmd->parsed()) return run_sieve(sieve_opt, sieve_save, sieve_load);
        if (count_cmd->parsed())
            return run_count(count_opt, count_what, count_x, count_q, count_a,
                             count_y, count_u);
        if (energy_cmd->parsed())
            return run_energy(energy_opt, energy_N, energy_seq, energy_method,
                              energy_timing);
        if (pc_cmd->parsed()) {
            pc_random = pc_cmd->count("--random-alpha-seed") > 0;
            return run_paircorr(pc_opt, pc_N, pc_alpha, pc_s, pc_seq,
                                pc_random ? std::optional<std::uint64_t>(
                                                pc_random_seed)
                                          : std::nullopt);
        }
        if (g_cmd->parsed()) return run_gfunc(g_opt, g_n, g_M, g_c, g_constants);
        if (b_cmd->parsed()) return run_bset(b_opt, b_M, b_c, b_constants);
        if (spike_cmd->parsed()) {
            spike_control = spike_cmd->count("--control-seed") > 0;
            return run_spike(spike_opt, spike_M, spike_c, spike_seed,
                             spike_constants,
                             spike_control ? std::optional<std::uint64_t>(
                                                 spike_control_seed)
                                           : std::nullopt);
        }
        if (l2_cmd->parsed()) return run_lemma2(l2_opt, l2_x, l2_y);
        if (v_cmd->parsed()) return run_vaaler(v_opt, v_h, v_X, v_set);
        if (a_cmd->parsed())
            return run_alpha(a_opt, a_n, a_N, a_K, a_seed, a_expand, a_depth,
                             a_membership);
        if (cal_cmd->parsed())
            return run_calibrate(cal_opt, cal_M0, cal_upper, cal_x0, cal_out);
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IndeterminateError& e) {
        std::cerr << "indeterminate: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
