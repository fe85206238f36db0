#include "bciov/oracles.hpp"

#include "bciov/quadrature.hpp"
#include "bciov/rng.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bciov::oracle {

namespace {

// Tight enough that the oracle error sits well below the 1e-9 relative checks
// for integrals of order 1e-3 and up; the rounding floor in integrate() stops
// the recursion once panels are at machine precision.
constexpr QuadratureOptions kTight{1e-15, 60, 6};
// Coverage integrals are O(1) probabilities; 1e-13 keeps the nested integral
// far inside the near-integer guard of the ceiling check at a tenth of the cost.
constexpr QuadratureOptions kInner{1e-13, 60, 6};

double unit_decay(double rate, double horizon)
{
    return integrate([rate](double t) { return std::exp(-rate * t); }, 0.0, horizon, kTight);
}

double relative_error(double value, double reference)
{
    const double diff = std::abs(value - reference);
    return reference == 0.0 ? diff : diff / std::abs(reference);
}

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

int uniform_int(Rng& rng, int lo, int hi)
{
    return lo + static_cast<int>(std::floor(rng.uniform() * (hi - lo + 1)));
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

DecayParams random_decay(Rng& rng)
{
    DecayParams p;
    const double m1 = uniform(rng, 0.0, 5.0);
    const double s1 = uniform(rng, 0.2, 3.0);
    const double m2 = uniform(rng, 0.0, 5.0);
    const double s2 = uniform(rng, 0.2, 3.0);
    p.rate1 = GaussianRate::at_rate(m1, s1, m1 + s1 * uniform(rng, 0.0, 3.0));
    p.rate2 = GaussianRate::at_rate(m2, s2, m2 + s2 * uniform(rng, 0.0, 3.0));
    p.initial_energy = std::pow(10.0, uniform(rng, 3.0, 9.0));
    p.app_count = uniform_int(rng, 1, 20);
    p.horizon = uniform(rng, 0.1, 200.0);
    return p;
}

}  // namespace

double energy_decay(const DecayParams& p)
{
    p.validate();
    const double rate = invert_rate(p.rate1) + invert_rate(p.rate2);
    return p.initial_energy / p.app_count * unit_decay(rate, p.horizon);
}

double energy_decay_synchronized(const DecayParams& p, double lambda1, double f1)
{
    const double rate = lambda1 + synchronized_rate_estimate(p, lambda1, f1);
    return p.initial_energy / p.app_count * unit_decay(rate, p.horizon);
}

double transaction_load(const TxCountParams& p)
{
    p.validate();
    const double mean = p.mean_range;
    const double sd = p.range_stddev;
    const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
    std::function<double(double)> density;
    if (p.formula_variant == FormulaVariant::as_printed) {
        density = [=](double x) { return norm * std::exp(-(x - mean) * (x - mean)); };
    } else {
        density = [=](double x) {
            const double z = (x - mean) / sd;
            return norm * std::exp(-0.5 * z * z);
        };
    }
    const double rates = p.rate_sum();
    // The inner integral is re-evaluated at every outer node on purpose: this is
    // the literal double integral, not the factored product.
    const auto inner = [&](double t) {
        const double coverage = p.presence * integrate(density, 0.0, p.radio_range, kInner);
        return coverage * rates * t;
    };
    return integrate(inner, 0.0, p.horizon, kTight) / p.parallel_links;
}

double round_trip_error(double mean, double stddev, double rate)
{
    return std::abs(invert_rate(GaussianRate::at_rate(mean, stddev, rate)) - rate);
}

CheckResult check_energy_decay(const SuiteOptions& o)
{
    CheckResult r;
    r.name = "energy-decay vs quadrature";
    Rng rng(o.seed);
    const auto start = Clock::now();
    for (int i = 0; i < o.grid; ++i) {
        const DecayParams p = random_decay(rng);
        const double err = relative_error(bciov::energy_decay(p), oracle::energy_decay(p));
        r.worst = std::max(r.worst, err);
        ++r.cases;
        if (!(err <= o.tolerance)) ++r.failures;
    }
    r.seconds = seconds_since(start);
    return r;
}

CheckResult check_synchronized(const SuiteOptions& o)
{
    CheckResult r;
    r.name = "synchronized decay vs substituted quadrature";
    Rng rng(o.seed + 1);
    const auto start = Clock::now();
    for (int i = 0; i < o.grid; ++i) {
        DecayParams p = random_decay(rng);
        // Feasible by construction: f1 = c / (2 pi s1 s2) with c in (0, 1) leaves
        // room for |lambda1 - mean1| up to s1 sqrt(-2 ln c).
        const double c = uniform(rng, 0.05, 0.95);
        const double f1 = c / (2.0 * std::numbers::pi * p.rate1.stddev * p.rate2.stddev);
        const double reach = p.rate1.stddev * std::sqrt(-2.0 * std::log(c));
        const double lambda1 = p.rate1.mean + reach * uniform(rng, 0.0, 0.999);
        const double err = relative_error(bciov::energy_decay_synchronized(p, lambda1, f1),
                                          oracle::energy_decay_synchronized(p, lambda1, f1));
        r.worst = std::max(r.worst, err);
        ++r.cases;
        if (!(err <= o.tolerance)) ++r.failures;
    }
    r.seconds = seconds_since(start);
    return r;
}

CheckResult check_round_trip(const SuiteOptions& o)
{
    CheckResult r;
    r.name = "rate inversion round-trip";
    Rng rng(o.seed + 2);
    const auto start = Clock::now();
    for (int i = 0; i < 5 * o.grid; ++i) {
        const double mean = uniform(rng, 0.0, 10.0);
        const double sd = uniform(rng, 0.1, 5.0);
        const double rate = mean + sd * uniform(rng, 0.0, 5.0);
        const double err = round_trip_error(mean, sd, rate);
        r.worst = std::max(r.worst, err);
        ++r.cases;
        if (!(err <= o.tolerance)) ++r.failures;
    }
    r.seconds = seconds_since(start);
    return r;
}

CheckResult check_transaction_ceiling(const SuiteOptions& o)
{
    CheckResult r;
    r.name = "transaction count ceiling vs double integral";
    Rng rng(o.seed + 3);
    const auto start = Clock::now();
    int diverged = 0;
    int resampled = 0;
    while (r.cases < o.grid) {
        TxCountParams p;
        p.cluster_count = uniform_int(rng, 1, 10);
        p.links_per_ledger = uniform_int(rng, 1, 9);
        p.request_rate = uniform(rng, 0.1, 5.0);
        p.presence = uniform(rng, 0.1, 1.0);
        p.horizon = uniform(rng, 1.0, 100.0);
        p.parallel_links = uniform_int(rng, 1, 4);
        p.mean_range = uniform(rng, 50.0, 500.0);
        p.radio_range = uniform(rng, 50.0, 500.0);
        p.range_stddev = uniform(rng, 20.0, 300.0);
        p.formula_variant = FormulaVariant::as_derived;

        const double reference = oracle::transaction_load(p);
        // The ceiling is undecidable when the load sits on an integer to within
        // the oracle's own precision; such points are redrawn.
        if (std::abs(reference - std::round(reference)) < 1e-9 * std::max(1.0, std::abs(reference))) {
            ++resampled;
            continue;
        }
        ++r.cases;
        const auto expected = static_cast<std::int64_t>(std::ceil(reference));
        const std::int64_t got = transaction_count(p);
        r.worst = std::max(r.worst, std::abs(static_cast<double>(got - expected)));
        if (got != expected) ++r.failures;

        TxCountParams printed = p;
        printed.formula_variant = FormulaVariant::as_printed;
        if (transaction_count(printed) != got) ++diverged;
    }
    r.seconds = seconds_since(start);
    std::ostringstream os;
    os << "as-printed count differs from as-derived on " << diverged << "/" << r.cases << " points (expected)";
    r.notes.push_back(os.str());
    if (resampled > 0) {
        os.str("");
        os << resampled << " near-integer point(s) redrawn";
        r.notes.push_back(os.str());
    }
    return r;
}

std::vector<CheckResult> run_suite(const SuiteOptions& o)
{
    return {check_energy_decay(o), check_synchronized(o), check_round_trip(o), check_transaction_ceiling(o)};
}

}  // namespace bciov::oracle
