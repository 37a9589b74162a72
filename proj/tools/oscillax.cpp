#include "CLI11.hpp"
#include "json.hpp"

#include "oscillax/arith.hpp"
#include "oscillax/conjectures.hpp"
#include "oscillax/explicit.hpp"
#include "oscillax/factor_table.hpp"
#include "oscillax/oscillation.hpp"
#include "oscillax/run.hpp"
#include "oscillax/zeta.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef OSCILLAX_DATA_DIR
#define OSCILLAX_DATA_DIR "data"
#endif

using namespace oscillax;
namespace fs = std::filesystem;

namespace {

struct Options {
    // shared
    std::vector<std::string> family;
    std::vector<double> alpha;
    std::uint64_t limit = 0;
    std::string table;
    std::string zeros = std::string(OSCILLAX_DATA_DIR) + "/zeros5000.txt";
    std::uint64_t block_size = 1 << 24;
    int workers = 1;
    std::string out;
    bool resume = false;
    std::vector<std::string> threshold;
    std::string kernel = "jp";
    long big_n = 0;
    double big_t = 0.0;
    std::uint64_t stop_after_blocks = 0;
    // table
    std::string mode = "parity-n-minus-omega";
    // run
    double log_step = 0.01;
    std::uint64_t stride = 0;
    // bound
    std::size_t count = 0;
    std::string assumption;
    std::string rank;
    double sweep = 0.0;
    // explicit
    double u_lo = 0.0;
    double u_hi = 0.0;
    double du = 1e-4;
    double tolerance = 1e-6;
    std::uint64_t compare_limit = 0;
};

void log(const std::string &msg)
{
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%H:%M:%S", std::localtime(&now));
    std::cerr << "[" << stamp << "] " << msg << '\n';
}

std::uint64_t default_table_limit(std::uint64_t x)
{
    return std::max<std::uint64_t>(30, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x))) + 2);
}

FactorTable obtain_table(const std::string &path, std::uint64_t x, const std::vector<SumSpec> &specs)
{
    if (!path.empty()) {
        FactorTable t = FactorTable::load(path);
        for (const SumSpec &s : specs) {
            if (!mode_supports(t.mode(), s)) {
                throw std::invalid_argument("table " + path + " (" + mode_name(t.mode()) + ") cannot serve " +
                                            s.label());
            }
        }
        return t;
    }
    return build_base_table(default_table_limit(x), required_mode(specs));
}

std::vector<SumSpec> specs_from(const Options &o)
{
    if (o.family.empty()) {
        throw std::invalid_argument("--family is required");
    }
    if (o.alpha.size() > 1 && o.alpha.size() != o.family.size()) {
        throw std::invalid_argument("give one --alpha, or one per --family");
    }
    std::vector<SumSpec> specs;
    for (std::size_t i = 0; i < o.family.size(); ++i) {
        const double a = o.alpha.empty() ? 0.0 : o.alpha[o.alpha.size() == 1 ? 0 : i];
        SumSpec s = parse_spec(o.family[i], a);
        s.validate();
        specs.push_back(s);
    }
    return specs;
}

ZeroSet zeros_from(const Options &o)
{
    ZeroSet z = load_zeros(o.zeros);
    log("loaded " + std::to_string(z.size()) + " zeros from " + o.zeros);
    return z;
}

double default_big_t(const ZeroSet &z)
{
    if (z.size() < 3701) {
        throw std::invalid_argument("the default T needs 3701 zeros; pass --big-t");
    }
    return z.gamma(3701).to_double() - 1e-10;
}

// ---------------------------------------------------------------- table

int cmd_table(const Options &o)
{
    if (o.limit < 30) {
        throw std::invalid_argument("--limit must be at least 30");
    }
    if (o.out.empty()) {
        throw std::invalid_argument("--out is required");
    }
    const TableMode mode = parse_mode(o.mode);
    if (fs::exists(o.out)) {
        const auto [limit, have] = FactorTable::peek(o.out);
        if (limit == o.limit && have == mode) {
            std::cout << "table " << o.out << " already holds M=" << limit << " " << mode_name(mode)
                      << "; nothing to do\n";
            return 0;
        }
        log("existing table differs; rebuilding");
    }
    log("building M=" + std::to_string(o.limit) + " " + mode_name(mode));
    const FactorTable t = build_base_table(o.limit, mode);
    t.save(o.out);
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::uint64_t> pick(1, o.limit);
    int checked = 0;
    int bad = 0;
    while (checked < 10000) {
        const std::uint64_t n = pick(rng);
        if (!wheel30::coprime(n)) {
            continue;
        }
        const Factorization f = factorize(n);
        unsigned want = 0;
        switch (mode) {
        case TableMode::ParityNMinusOmega:
            want = static_cast<unsigned>((n - static_cast<std::uint64_t>(f.big_omega())) & 1);
            break;
        case TableMode::ParityOmegaDistinct:
            want = static_cast<unsigned>(f.small_omega() & 1);
            break;
        case TableMode::OmegaValue:
            want = static_cast<unsigned>(f.big_omega());
            break;
        }
        bad += t.value(n) != want ? 1 : 0;
        ++checked;
    }
    std::cout << "table " << o.out << " M=" << o.limit << " " << mode_name(mode) << " fingerprint "
              << t.fingerprint() << "\nvalidated " << checked << " random entries, " << bad << " mismatches\n";
    return bad == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- run

int cmd_run(const Options &o)
{
    if (o.limit < 1) {
        throw std::invalid_argument("--limit must be positive");
    }
    if (o.out.empty()) {
        throw std::invalid_argument("--out is required");
    }
    const std::vector<SumSpec> specs = specs_from(o);
    std::vector<Threshold> thresholds;
    for (const std::string &t : o.threshold) {
        thresholds.push_back(Threshold::parse(t));
    }
    // sums needing different table modes run as separate passes, each with its own checkpoint
    std::map<TableMode, std::vector<SumSpec>> groups;
    for (const SumSpec &s : specs) {
        groups[o.table.empty() ? required_mode({s}) : FactorTable::peek(o.table).second].push_back(s);
    }
    std::vector<SpecSeries> done;
    bool complete = true;
    for (const auto &[mode, members] : groups) {
        RunPlan plan;
        plan.last = o.limit;
        plan.block_size = o.block_size;
        plan.workers = o.workers;
        plan.sampling.log_step = o.log_step;
        plan.sampling.stride = o.stride;
        for (const SumSpec &s : members) {
            plan.specs.push_back({s, NormalizationRule::scaling_only(s), thresholds});
        }
        const FactorTable table = obtain_table(o.table, o.limit, members);
        const SieveContext context(table, o.limit);
        CheckpointOptions co;
        co.output_dir = o.out;
        co.checkpoint = fs::path(o.out) / (groups.size() == 1 ? std::string("checkpoint.txt")
                                                              : "checkpoint-" + mode_name(mode) + ".txt");
        co.resume = o.resume;
        co.stop_after_blocks = o.stop_after_blocks;
        log("sieving [1, " + std::to_string(o.limit) + "] with " + mode_name(mode));
        CheckpointedOutcome res = run_checkpointed(context, plan, co);
        if (!res.completed) {
            std::cout << mode_name(mode) << " pass stopped after " << res.blocks_done
                      << " blocks; rerun with --resume to continue\n";
            complete = false;
            continue;
        }
        for (SpecSeries &s : res.series.specs) {
            done.push_back(std::move(s));
        }
    }
    if (!complete) {
        return 0;
    }
    std::ofstream summary(fs::path(o.out) / "summary.csv");
    summary << "sum,total,max_x,max_value,min_x,min_value\n";
    std::ofstream viol(fs::path(o.out) / "thresholds.csv");
    viol << "sum,threshold,violations,first_x,last_x\n";
    char buf[512];
    for (const SpecSeries &s : done) {
        std::snprintf(buf, sizeof buf, "%s,%s,%llu,%.17g,%llu,%.17g\n", s.spec.label().c_str(),
                      s.total.value_string().c_str(), static_cast<unsigned long long>(s.max.x), s.max.value,
                      static_cast<unsigned long long>(s.min.x), s.min.value);
        summary << buf;
        std::cout << buf;
        for (std::size_t i = 0; i < s.traces.size(); ++i) {
            const ThresholdTrace &tr = s.traces[i];
            const auto first = tr.first();
            std::snprintf(buf, sizeof buf, "%s,%s,%llu,%llu,%llu\n", s.spec.label().c_str(),
                          thresholds.at(i).describe().c_str(), static_cast<unsigned long long>(tr.violations),
                          static_cast<unsigned long long>(first.value_or(0)),
                          static_cast<unsigned long long>(tr.last));
            viol << buf;
            std::cout << buf;
        }
    }
    return 0;
}

// ---------------------------------------------------------------- bound

int cmd_bound(const Options &o)
{
    const BoundFamily family = parse_family(o.family.empty() ? std::string("S") : o.family.front());
    const ZeroSet zeros = zeros_from(o);
    const double T = o.big_t > 0.0 ? o.big_t : default_big_t(zeros);
    const long n = o.big_n > 0 ? o.big_n : (family == BoundFamily::S ? 3100 : 3950);
    const std::size_t count = o.count > 0 ? o.count : (family == BoundFamily::S ? 250 : 239);
    const Kernel kernel{parse_kernel(o.kernel), T};
    const GreedyRank rank =
        o.rank.empty() ? (family == BoundFamily::S ? GreedyRank::Liouville : GreedyRank::Own) : parse_rank(o.rank);
    log("residues for zeros up to T=" + std::to_string(T));
    const ResidueTable table = ResidueTable::build(zeros, T, family, o.workers);

    std::vector<double> alphas;
    if (o.sweep > 0.0) {
        for (int k = 0; k * o.sweep <= 1.0 + 1e-12; ++k) {
            alphas.push_back(std::min(1.0, k * o.sweep));
        }
    } else {
        alphas.push_back(o.alpha.empty() ? 0.0 : o.alpha.front());
    }
    // a file fixes Gamma'; otherwise greedy at the first alpha, reused across a sweep
    const IndependenceAssumption assumption =
        o.assumption.empty() ? select_zeros_greedy(alphas.front(), family, table, kernel, count, n, rank)
                             : load_assumption(o.assumption, zeros, n, T);
    if (alphas.size() > 1) {
        std::cout << "alpha,center,amplitude,liminf_bound,limsup_bound\n";
        for (const double a : alphas) {
            const BoundReport r = anderson_stark_bounds(family, a, assumption, kernel, table);
            std::printf("%.4f,%.10f,%.10f,%.10f,%.10f\n", a, r.center.intercept.to_double(), r.amplitude,
                        r.liminf_bound, r.limsup_bound);
        }
        return 0;
    }
    const double a = alphas.front();
    const BoundReport r = anderson_stark_bounds(family, a, assumption, kernel, table);
    if (!o.out.empty()) {
        write_bound_csv(r, o.out);
        log("wrote " + o.out);
    }
    std::cout << bound_summary(r);
    const TheoremTarget t = family == BoundFamily::S ? theorem_targets(a) : h_family_target(a);
    std::printf("target_amplitude,%.10g\ntarget_lower,%.10g\ntarget_upper,%.10g\namplitude_ratio,%.6f\n",
                t.amplitude, t.lower, t.upper, r.amplitude / t.amplitude);
    return 0;
}

// ---------------------------------------------------------------- explicit

int cmd_explicit(const Options &o)
{
    const BoundFamily family = parse_family(o.family.empty() ? std::string("S") : o.family.front());
    ExplicitConfig c;
    c.family = family;
    c.alpha = o.alpha.empty() ? 0.0 : o.alpha.front();
    c.T = o.big_t > 0.0 ? o.big_t : 3000.0;
    c.u_lo = o.u_lo;
    c.u_hi = o.u_hi;
    c.du = o.du;
    c.tolerance = o.tolerance;
    c.workers = o.workers;
    const ZeroSet zeros = zeros_from(o);
    const ExplicitEstimator est(zeros, family, c.alpha, c.T, o.workers);
    EstimateSeries s = estimate(c, est);
    std::vector<double> levels;
    for (const std::string &t : o.threshold) {
        levels.push_back(std::stod(t));
    }
    find_estimate_crossings(s, est, levels);
    double lo = INFINITY;
    double hi = -INFINITY;
    double u_min = 0.0;
    double u_max = 0.0;
    for (const EstimatePoint &p : s.points) {
        if (p.value < lo) {
            lo = p.value;
            u_min = p.u;
        }
        if (p.value > hi) {
            hi = p.value;
            u_max = p.u;
        }
    }
    std::printf("zeros,%zu\nT,%.10g\npoints,%zu\nmin,%.12f\nu_at_min,%.6f\nmax,%.12f\nu_at_max,%.6f\nlast_term,%.3e\n",
                s.zeros_used, c.T, s.points.size(), lo, u_min, hi, u_max, s.last_term);
    std::cout << "threshold,u_lo,u_hi,u_star\n";
    for (const EstimateCrossing &x : s.crossings) {
        std::printf("%.10g,%.12f,%.12f,%.12f\n", x.threshold, x.u_lo, x.u_hi, x.u_star);
    }
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        write_estimate_csv(s, (fs::path(o.out) / "estimate.csv").string());
        write_crossings_csv(s, (fs::path(o.out) / "crossings.csv").string());
        log("wrote estimate.csv and crossings.csv to " + o.out);
    }
    if (o.compare_limit > 0) {
        if (family != BoundFamily::S) {
            throw std::invalid_argument("sieve comparison is implemented for the S family");
        }
        const SumSpec spec = SumSpec::sun_s(c.alpha);
        const FactorTable table = obtain_table(o.table, o.compare_limit, {spec});
        const SieveContext ctx(table, o.compare_limit);
        RunPlan plan;
        plan.last = o.compare_limit;
        plan.block_size = o.block_size;
        plan.workers = o.workers;
        plan.sampling.log_step = 1e-3;
        plan.specs.push_back({spec, sieve_rule(c.alpha), {}});
        log("sieving to " + std::to_string(o.compare_limit) + " for comparison");
        const SampleSeries ss = o.workers > 1 ? run_range(ctx, plan) : run_range_serial(ctx, plan);
        const ResidualStats r = compare_to_sieve(est, comparison_points(ss.specs.front()), c.u_lo, c.u_hi);
        std::printf("compare_points,%zu\ncompare_mean_abs,%.6f\ncompare_max_abs,%.6f\ncompare_worst_u,%.6f\n",
                    r.points, r.mean_abs, r.max_abs, r.worst_u);
    }
    return 0;
}

// ---------------------------------------------------------------- conjectures

int cmd_conjectures(const Options &o)
{
    ConjectureOptions co;
    co.workers = o.workers;
    co.block_size = o.block_size;
    const ConjectureReport r = verify_conjectures(o.limit, co);
    nlohmann::ordered_json j;
    j["limit"] = r.limit;
    j["conjectures"] = nlohmann::ordered_json::array();
    for (const ConjectureResult &c : r.results) {
        nlohmann::ordered_json e;
        e["id"] = c.id;
        e["statement"] = c.statement;
        e["from"] = c.from ? nlohmann::ordered_json(*c.from) : nlohmann::ordered_json(nullptr);
        e["status"] = status_name(c.status);
        e["violations"] = c.violations;
        e["first_violation"] =
            c.first_violation ? nlohmann::ordered_json(*c.first_violation) : nlohmann::ordered_json(nullptr);
        if (c.empirical_onset) {
            e["empirical_onset"] = *c.empirical_onset;
        }
        e["early_violations"] = c.early_violations;
        j["conjectures"].push_back(e);
    }
    j["all_pass"] = !r.any_failure();
    const std::string text = j.dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream(o.out) << text;
        log("wrote " + o.out);
    }
    return r.any_failure() ? 1 : 0;
}

// ---------------------------------------------------------------- selfcheck

int cmd_selfcheck(const Options &o)
{
    int failures = 0;
    const auto report = [&](const std::string &name, bool ok) {
        std::cout << "selfcheck " << name << ": " << (ok ? "PASS" : "FAIL") << '\n';
        failures += ok ? 0 : 1;
    };
    {
        const std::uint64_t x = 100000;
        const std::vector<SumSpec> specs = {SumSpec::sun_s(0.0), SumSpec::grosswald_w(), SumSpec::div_count(3),
                                            SumSpec::twisted_s(-4), SumSpec::sun_s(0.25)};
        RunPlan plan;
        plan.last = x;
        plan.block_size = 1 << 14;
        for (const SumSpec &s : specs) {
            plan.specs.push_back({s, NormalizationRule::scaling_only(s), {}});
        }
        const FactorTable t = build_base_table(default_table_limit(x), required_mode(specs));
        const SieveContext ctx(t, x);
        const SampleSeries s = run_range_serial(ctx, plan);
        bool ok = true;
        for (const SumSpec &spec : specs) {
            const ExactAccumulator want = oracle_sum(spec, x);
            const ExactAccumulator &got = s.at(spec).total;
            if (spec.fractional()) {
                ok = ok && std::abs(got.to_double() - want.to_double()) <= 1e-12 * std::abs(want.to_double());
            } else {
                ok = ok && got == want;
            }
        }
        report("sieve matches oracle at 1e5", ok);
    }
    {
        const DDouble z2 = zeta_real(DDouble(2.0));
        report("zeta(2)", std::abs((z2 - dd::pi * dd::pi / DDouble(6.0)).to_double()) < 1e-28);
    }
    {
        const auto c = h_series_check();
        report("F6 coefficients", c[0] == -18 && c[1] == -30 && c[2] == -56);
        report("center at alpha 0", std::abs(res_F_at_zero(0.0).intercept.to_double() - 1.6531) < 1e-4);
    }
    try {
        const ZeroSet z = load_zeros(o.zeros);
        const ZeroCheck c = validate_zeros(z, std::min<std::size_t>(z.size(), 100));
        report("zero table (first 100)", c.max_abs_zeta < 1e-6);
    } catch (const std::exception &e) {
        std::cout << "selfcheck zero table: FAIL (" << e.what() << ")\n";
        ++failures;
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Sieving, residue and explicit-formula computations for Liouville-type sums"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&](CLI::App *c) {
        c->add_option("--workers", o.workers, "OpenMP worker threads")->check(CLI::PositiveNumber);
        c->add_option("--out", o.out, "Output file or directory");
    };
    const auto zeros_opt = [&](CLI::App *c) {
        c->add_option("--zeros", o.zeros, "Zero ordinate file")->capture_default_str();
    };

    CLI::App *table = app.add_subcommand("table", "Build and persist a factor table");
    table->add_option("--limit", o.limit, "Table size M")->required();
    table->add_option("--mode", o.mode, "parity-n-minus-omega, parity-omega-distinct or omega-value")
        ->capture_default_str();
    common(table);

    CLI::App *run = app.add_subcommand("run", "Sieve [1, X] for one or more sums with checkpoints");
    run->add_option("--family", o.family, "S, H, L, W, twisted:<d> or div:<m> (repeatable)")->required();
    run->add_option("--alpha", o.alpha, "Exponent per family (or one for all)");
    run->add_option("--limit", o.limit, "Upper end X")->required();
    run->add_option("--table", o.table, "Prebuilt table (built in memory when absent)");
    run->add_option("--block-size", o.block_size, "Sieve block length")->capture_default_str();
    run->add_option("--threshold", o.threshold, "e.g. lower:root:1:from=325 (repeatable)");
    run->add_flag("--resume", o.resume, "Continue from the checkpoint in --out");
    run->add_option("--stop-after-blocks", o.stop_after_blocks, "Stop early after this many blocks");
    run->add_option("--log-step", o.log_step, "Sample at ceil(exp(k*step))")->capture_default_str();
    run->add_option("--stride", o.stride, "Also sample every multiple of this");
    common(run);

    CLI::App *bound = app.add_subcommand("bound", "Oscillation bound from residues at zeta zeros");
    bound->add_option("--family", o.family, "S or H")->expected(1);
    bound->add_option("--alpha", o.alpha, "alpha in [0, 1]")->expected(1);
    bound->add_option("--kernel", o.kernel, "fejer or jp")->capture_default_str();
    bound->add_option("--big-n", o.big_n, "Uniform N (default 3100 for S, 3950 for H)");
    bound->add_option("--big-t", o.big_t, "Kernel height T (default gamma_3701 - 1e-10)");
    bound->add_option("--count", o.count, "Greedy zero count (default 250 for S, 239 for H)");
    bound->add_option("--assumption", o.assumption, "File of zero indices or ordinates, optional N per line");
    bound->add_option("--rank", o.rank, "Greedy score: own residue or L (L_0 residue); default L for S, own for H");
    bound->add_option("--sweep", o.sweep, "Print a table over alpha = 0, step, ..., 1");
    zeros_opt(bound);
    common(bound);

    CLI::App *expl = app.add_subcommand("explicit", "Truncated explicit-formula estimate and crossings");
    expl->add_option("--family", o.family, "S or H")->expected(1);
    expl->add_option("--alpha", o.alpha, "alpha in [0, 1]")->expected(1);
    expl->add_option("--big-t", o.big_t, "Truncation height (default 3000)");
    expl->add_option("--u-lo", o.u_lo, "Start of the u range")->required();
    expl->add_option("--u-hi", o.u_hi, "End of the u range")->required();
    expl->add_option("--du", o.du, "Grid step")->capture_default_str();
    expl->add_option("--tolerance", o.tolerance, "Crossing refinement in u")->capture_default_str();
    expl->add_option("--threshold", o.threshold, "Levels to locate crossings of (repeatable)");
    expl->add_option("--compare-limit", o.compare_limit, "Also sieve to X and report residuals");
    expl->add_option("--table", o.table, "Prebuilt table for the comparison sieve");
    expl->add_option("--block-size", o.block_size, "Sieve block length")->capture_default_str();
    zeros_opt(expl);
    common(expl);

    CLI::App *conj = app.add_subcommand("conjectures", "Check the sign and proportion conjectures on [1, X]");
    conj->add_option("--limit", o.limit, "Upper end X")->required();
    conj->add_option("--block-size", o.block_size, "Sieve block length")->capture_default_str();
    common(conj);

    CLI::App *self = app.add_subcommand("selfcheck", "Fast internal consistency checks");
    zeros_opt(self);

    CLI11_PARSE(app, argc, argv);
    try {
        const auto start = std::chrono::steady_clock::now();
        int rc = 0;
        if (*table) {
            rc = cmd_table(o);
        } else if (*run) {
            rc = cmd_run(o);
        } else if (*bound) {
            rc = cmd_bound(o);
        } else if (*expl) {
            rc = cmd_explicit(o);
        } else if (*conj) {
            rc = cmd_conjectures(o);
        } else if (*self) {
            rc = cmd_selfcheck(o);
        }
        log("done in " +
            std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()) + " s");
        return rc;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
