#include "oscillax/sieve.hpp"

#include "oscillax/primes.hpp"
#include "sieve_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace oscillax {

bool mode_supports(TableMode mode, const SumSpec &spec)
{
    switch (spec.family) {
    case Family::PolyaL:
    case Family::SunS:
    case Family::TwistedS:
        return mode == TableMode::ParityNMinusOmega || mode == TableMode::OmegaValue;
    case Family::OmegaH:
        return mode == TableMode::ParityOmegaDistinct;
    case Family::GrosswaldW:
    case Family::DivCount:
        return mode == TableMode::OmegaValue;
    }
    return false;
}

TableMode required_mode(const std::vector<SumSpec> &specs)
{
    for (const TableMode m : {TableMode::ParityNMinusOmega, TableMode::ParityOmegaDistinct, TableMode::OmegaValue}) {
        if (std::all_of(specs.begin(), specs.end(), [m](const SumSpec &s) { return mode_supports(m, s); })) {
            return m;
        }
    }
    throw std::invalid_argument("no single table mode supports this combination of sums");
}

SieveContext::SieveContext(const FactorTable &table, std::uint64_t max_b, SieveOptions options)
    : table_(&table), max_b_(max_b), prime_limit_(isqrt(max_b) + 1), primes_(primes_up_to(prime_limit_)),
      options_(options), smooth_(detail::smooth_parts(max_b))
{
}

SieveContext::~SieveContext() = default;

std::vector<std::uint64_t> sample_points(const SamplingPlan &plan, std::uint64_t a, std::uint64_t b)
{
    std::vector<std::uint64_t> out;
    if (plan.stride > 0) {
        for (std::uint64_t x = ((a + plan.stride - 1) / plan.stride) * plan.stride; x <= b; x += plan.stride) {
            out.push_back(x);
        }
    }
    if (plan.log_step > 0.0) {
        const auto k_lo = static_cast<std::int64_t>(std::floor(std::log(static_cast<double>(a)) / plan.log_step)) - 1;
        const auto k_hi = static_cast<std::int64_t>(std::ceil(std::log(static_cast<double>(b)) / plan.log_step)) + 1;
        for (std::int64_t k = std::max<std::int64_t>(k_lo, 0); k <= k_hi; ++k) {
            const double x = std::ceil(std::exp(static_cast<double>(k) * plan.log_step));
            const auto xi = static_cast<std::uint64_t>(x);
            if (xi >= a && xi <= b) {
                out.push_back(xi);
            }
        }
    }
    for (const std::uint64_t x : plan.probes) {
        if (x >= a && x <= b) {
            out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

enum class WeightKind { None, Inverse, InverseRoot, InverseFourthRoot, InverseThreeQuarter, General };

WeightKind weight_kind(double alpha)
{
    if (alpha == 0.0) {
        return WeightKind::None;
    }
    if (alpha == 1.0) {
        return WeightKind::Inverse;
    }
    if (alpha == 0.5) {
        return WeightKind::InverseRoot;
    }
    if (alpha == 0.25) {
        return WeightKind::InverseFourthRoot;
    }
    if (alpha == 0.75) {
        return WeightKind::InverseThreeQuarter;
    }
    return WeightKind::General;
}

DDouble weight(WeightKind kind, double alpha, std::uint64_t n)
{
    const DDouble x(n);
    switch (kind) {
    case WeightKind::None:
        return DDouble(1.0);
    case WeightKind::Inverse:
        return DDouble(1.0) / x;
    case WeightKind::InverseRoot:
        return DDouble(1.0) / dd::sqrt(x);
    case WeightKind::InverseFourthRoot:
        return DDouble(1.0) / dd::sqrt(dd::sqrt(x));
    case WeightKind::InverseThreeQuarter: {
        const DDouble r = dd::sqrt(x);
        return DDouble(1.0) / (r * dd::sqrt(r));
    }
    case WeightKind::General:
        return dd::exp(-DDouble(alpha) * dd::log(x));
    }
    return DDouble(1.0);
}

double scale_factor(double exponent, double x, double log_x)
{
    if (exponent == 0.0) {
        return 1.0;
    }
    if (exponent == -0.5) {
        return 1.0 / std::sqrt(x);
    }
    if (exponent == -1.0) {
        return 1.0 / x;
    }
    if (exponent == 0.5) {
        return std::sqrt(x);
    }
    return std::exp(exponent * log_x);
}

double bound_double(const Threshold &t, double alpha, double x, double log_x)
{
    const double c = t.coefficient.value();
    switch (t.shape) {
    case Threshold::Shape::Constant:
        return c;
    case Threshold::Shape::Linear:
        return c * x;
    case Threshold::Shape::RootScaled:
        return c * scale_factor(0.5 - alpha, x, log_x);
    }
    return c;
}

struct SpecState {
    SumSpec spec;
    NormalizationRule rule;
    bool real = false;
    int weight_slot = -1;
    std::vector<std::int8_t> chi; // periodic Kronecker table
    std::uint64_t period = 0;
    ExactAccumulator start;
    ExactAccumulator delta;
    SpecOutcome outcome;
    const std::vector<Threshold> *thresholds = nullptr;
};

} // namespace

BlockResult sieve_interval(const WorkUnit &unit, const SieveContext &ctx)
{
    const FactorTable &table = ctx.table();
    if (unit.a < 1 || unit.a > unit.b) {
        throw std::invalid_argument("work unit needs 1 <= a <= b");
    }
    if (unit.b > ctx.max_b()) {
        throw std::invalid_argument("work unit extends beyond the sieve context");
    }
    if (unit.block_size == 0) {
        throw std::invalid_argument("block size must be positive");
    }
    if (unit.specs.empty()) {
        throw std::invalid_argument("work unit has no sums");
    }
    if (!unit.start.empty() && unit.start.size() != unit.specs.size()) {
        throw std::invalid_argument("start offsets do not match the sums");
    }
    const TableMode mode = table.mode();

    std::vector<SpecState> specs(unit.specs.size());
    std::vector<double> alphas;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        SpecState &s = specs[i];
        s.spec = unit.specs[i].spec;
        s.spec.validate();
        if (!mode_supports(mode, s.spec)) {
            throw std::invalid_argument("table mode " + mode_name(mode) + " cannot evaluate " + s.spec.label());
        }
        s.rule = unit.specs[i].rule;
        s.real = s.spec.fractional();
        s.thresholds = &unit.specs[i].thresholds;
        const auto kind = accumulator_kind(s.spec);
        s.delta = ExactAccumulator(kind);
        s.start = unit.start.empty() ? ExactAccumulator(kind) : unit.start[i];
        if (s.start.kind() != kind) {
            throw std::invalid_argument("start offset has the wrong accumulator kind");
        }
        s.outcome.traces.resize(s.thresholds->size());
        if (s.real) {
            auto it = std::find(alphas.begin(), alphas.end(), s.spec.alpha);
            s.weight_slot = static_cast<int>(it - alphas.begin());
            if (it == alphas.end()) {
                alphas.push_back(s.spec.alpha);
            }
        }
        if (s.spec.family == Family::TwistedS && s.spec.param != 0 && std::llabs(s.spec.param) <= (1 << 20)) {
            s.period = static_cast<std::uint64_t>(std::llabs(s.spec.param));
            s.chi.resize(s.period);
            for (std::uint64_t r = 0; r < s.period; ++r) {
                s.chi[r] = static_cast<std::int8_t>(kronecker(s.spec.param, r == 0 ? s.period : r));
            }
        }
    }
    std::vector<WeightKind> weight_kinds;
    for (const double al : alphas) {
        weight_kinds.push_back(weight_kind(al));
    }
    std::vector<DDouble> weights(alphas.size());

    BlockResult result;
    result.a = unit.a;
    result.b = unit.b;
    for (const SpecState &s : specs) {
        result.specs.push_back(s.spec);
        result.rules.push_back(s.rule);
        std::vector<std::string> ids;
        for (const Threshold &t : *s.thresholds) {
            ids.push_back(t.id);
        }
        result.threshold_ids.push_back(std::move(ids));
        result.assumed_start.push_back(s.start);
    }

    const std::vector<std::uint64_t> points = sample_points(unit.sampling, unit.a, unit.b);
    auto next_point = points.begin();

    auto record_sample = [&](std::uint64_t x) {
        if (!result.samples.empty() && result.samples.back().x == x) {
            return;
        }
        Sample smp;
        smp.x = x;
        for (const SpecState &s : specs) {
            smp.delta.push_back(s.delta);
        }
        result.samples.push_back(std::move(smp));
    };

    detail::StateArray<2> st2;
    detail::StateArray<8> st8;
    detail::KernelStats kstats;
    const bool wide = mode == TableMode::OmegaValue;

    for (std::uint64_t lo = unit.a; lo <= unit.b;) {
        const std::uint64_t hi = unit.b - lo < unit.block_size ? unit.b : lo + unit.block_size - 1;
        detail::KernelInput in;
        in.a = lo;
        in.b = hi;
        in.table = &table;
        in.lookup_limit = table.limit();
        in.primes = ctx.primes();
        in.prime_limit = ctx.prime_limit();
        in.verify_residual = ctx.options().verify_residual;
        in.smooth = &ctx.smooth();
        if (wide) {
            detail::resolve_interval(in, st8, kstats);
        } else {
            detail::resolve_interval(in, st2, kstats);
        }
        result.stats.phase1_resolved += kstats.phase1_resolved;
        result.stats.phase2_resolved += kstats.phase2_resolved;
        result.stats.trial_divisions += kstats.trial_divisions;
        result.stats.residual_resolved += kstats.residual_resolved;
        result.stats.phase1_empty = result.stats.phase1_empty || kstats.phase1_empty;
        kstats = {};

        for (std::uint64_t n = lo; n <= hi; ++n) {
            const unsigned v = wide ? st8.value(n - lo) : st2.value(n - lo);
            for (std::size_t w = 0; w < weights.size(); ++w) {
                weights[w] = weight(weight_kinds[w], alphas[w], n);
            }
            const bool want_extrema = n >= unit.extrema_from;
            const double xd = static_cast<double>(n);
            const double log_x = std::log(xd);

            for (SpecState &s : specs) {
                // parity of n - Omega(n), Omega(n), or omega(n) depending on mode
                unsigned odd = 0;
                std::int64_t iterm = 0;
                switch (s.spec.family) {
                case Family::PolyaL:
                    odd = wide ? (v & 1u) : static_cast<unsigned>((n + v) & 1);
                    break;
                case Family::OmegaH:
                    odd = v;
                    break;
                case Family::SunS:
                case Family::TwistedS:
                    odd = wide ? static_cast<unsigned>((n + v) & 1) : v;
                    break;
                case Family::GrosswaldW:
                    iterm = (v & 1u) ? -(std::int64_t{1} << v) : (std::int64_t{1} << v);
                    break;
                case Family::DivCount: {
                    const auto m = static_cast<std::uint64_t>(s.spec.param);
                    iterm = (n % m) == (v % m) ? 1 : 0;
                    break;
                }
                }
                if (s.spec.family == Family::TwistedS) {
                    const int chi = s.period ? s.chi[n % s.period] : kronecker(s.spec.param, n);
                    iterm = odd ? -chi : chi;
                } else if (s.spec.family != Family::GrosswaldW && s.spec.family != Family::DivCount) {
                    if (s.real) {
                        const DDouble &wt = weights[s.weight_slot];
                        s.delta.add(odd ? -wt : wt);
                    } else {
                        iterm = odd ? -1 : 1;
                    }
                }
                if (!s.real) {
                    s.delta.add(iterm);
                }

                const bool need_checks = want_extrema || !s.thresholds->empty();
                if (!need_checks) {
                    continue;
                }
                double value;
                if (s.real) {
                    value = ((s.start.positive_real() + s.delta.positive_real()) -
                             (s.start.negative_real() + s.delta.negative_real()))
                                .to_double();
                } else {
                    value = static_cast<double>(s.start.integer_value() + s.delta.integer_value());
                }
                if (want_extrema) {
                    const double norm = s.rule.apply(log_x, scale_factor(s.rule.exponent, xd, log_x), value);
                    s.outcome.max.offer(n, norm, true);
                    s.outcome.min.offer(n, norm, false);
                }
                for (std::size_t t = 0; t < s.thresholds->size(); ++t) {
                    const Threshold &th = (*s.thresholds)[t];
                    if (n < th.active_from) {
                        continue;
                    }
                    const double bd = bound_double(th, s.spec.alpha, xd, log_x);
                    const double slack = 1e-9 * (std::abs(bd) + std::abs(value) + 1.0);
                    const bool clear = th.side == Threshold::Side::Lower ? value > bd + slack : value < bd - slack;
                    if (clear) {
                        continue;
                    }
                    const Verdict verdict = check_threshold(th, s.spec, n, s.start + s.delta);
                    if (!verdict.violated) {
                        continue;
                    }
                    ThresholdTrace &trace = s.outcome.traces[t];
                    ++trace.violations;
                    trace.last = n;
                    if (!verdict.exact) {
                        ++trace.inexact;
                    }
                    if (trace.points.size() < unit.crossing_cap) {
                        trace.points.push_back({n, value, verdict.exact});
                    } else {
                        trace.truncated = true;
                    }
                }
            }

            if (next_point != points.end() && *next_point == n) {
                record_sample(n);
                ++next_point;
            }
        }
        if (unit.sampling.block_ends || hi == unit.b) {
            record_sample(hi);
        }
        if (hi == unit.b) {
            break;
        }
        lo = hi + 1;
    }

    for (SpecState &s : specs) {
        s.outcome.delta = s.delta;
        result.outcomes.push_back(std::move(s.outcome));
    }
    return result;
}

BlockResult sieve_interval(const WorkUnit &unit, const FactorTable &table)
{
    const SieveContext ctx(table, unit.b);
    return sieve_interval(unit, ctx);
}

} // namespace oscillax
