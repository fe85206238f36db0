#include "bciov/analytics.hpp"
#include "bciov/energy_model.hpp"
#include "bciov/oracles.hpp"
#include "bciov/quadrature.hpp"
#include "bciov/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bciov;

namespace {

const double kPeak = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double erf_series(double x)
{
    // Maclaurin series; adequate to ~1e-14 for |x| <= 3.
    double term = x;
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        const double add = term / (2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18) break;
    }
    return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

DecayParams decay_at(double m1, double s1, double l1, double m2, double s2, double l2, double b, int apps,
                     double tau)
{
    DecayParams p;
    p.rate1 = GaussianRate::at_rate(m1, s1, l1);
    p.rate2 = GaussianRate::at_rate(m2, s2, l2);
    p.initial_energy = b;
    p.app_count = apps;
    p.horizon = tau;
    return p;
}

TxCountParams unit_tx()
{
    TxCountParams p;
    p.cluster_count = 1;
    p.links_per_ledger = 1;
    p.request_rate = 1.0;
    p.presence = 1.0;
    p.horizon = 1.0;
    p.parallel_links = 1;
    p.mean_range = 1.0;
    p.radio_range = 1.0;
    p.range_stddev = 1.0;
    return p;
}

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("library erf meets the 1e-12 contract against independent references")
{
    for (double x = -3.0; x <= 3.0; x += 0.125) {
        CHECK(std::abs(std::erf(x) - erf_series(x)) < 1e-12);
    }
    const QuadratureOptions tight{1e-14, 60, 6};
    for (double x : {0.5, 1.0, 2.5, 4.0, 6.0}) {
        const double q = 2.0 / std::sqrt(std::numbers::pi) *
                         integrate([](double t) { return std::exp(-t * t); }, 0.0, x, tight);
        CHECK(std::abs(std::erf(x) - q) < 1e-12);
    }
}

TEST_CASE("invert_rate examples")
{
    CHECK(invert_rate({0.0, 1.0, kPeak * std::exp(-0.5)}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(invert_rate({3.0, 2.0, kPeak / 2.0}) == 3.0);
    // A few ulps above the peak is rounding, not an error.
    CHECK(invert_rate({3.0, 1.0, kPeak * (1 + 1e-15)}) == 3.0);
    CHECK_THROWS_AS(invert_rate({0.0, 1.0, 2 * kPeak}), DomainError);
    CHECK_THROWS_AS(invert_rate({0.0, 0.0, 0.1}), DomainError);
    CHECK_THROWS_AS(invert_rate({0.0, 1.0, 0.0}), DomainError);
}

TEST_CASE("density then inversion is the identity on the upper branch")
{
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double mean = 10 * rng.uniform();
        const double sd = 0.1 + 4.9 * rng.uniform();
        const double rate = mean + 5 * sd * rng.uniform();
        CHECK(oracle::round_trip_error(mean, sd, rate) <= 1e-9);
    }
}

TEST_CASE("energy decay examples")
{
    DecayParams p = decay_at(1, 1, 1, 1, 1, 1, 1.0, 1, 1.0);
    CHECK(energy_decay(p) == doctest::Approx((1 - std::exp(-2.0)) / 2).epsilon(1e-14));
    CHECK(decay_rate(p) == doctest::Approx(2.0));
    p.horizon = 0.0;
    CHECK(energy_decay(p) == 0.0);
}

TEST_CASE("zero total rate returns the horizon-linear limit")
{
    const DecayParams p = decay_at(0, 1, 0, 0, 1, 0, 6.0, 3, 4.0);
    CHECK(decay_rate(p) == 0.0);
    CHECK(energy_decay(p) == doctest::Approx(8.0));
    CHECK(decay_integral(2.0, 0.0, 4.0) == 8.0);
}

TEST_CASE("energy decay matches its defining integral on a random grid")
{
    oracle::SuiteOptions o;
    o.grid = 100;
    const auto r = oracle::check_energy_decay(o);
    CHECK(r.passed());
    CHECK(r.worst <= 1e-9);
}

TEST_CASE("energy decay monotonicity and bounds")
{
    DecayParams p = decay_at(0.5, 1.2, 1.3, 0.2, 0.7, 0.9, 500.0, 4, 1.0);
    const double rate = decay_rate(p);
    double prev = 0.0;
    for (double tau = 0.05; tau <= 3.0; tau += 0.05) {
        p.horizon = tau;
        const double e = energy_decay(p);
        CHECK(e > prev);
        CHECK(e <= p.initial_energy / (p.app_count * rate));
        prev = e;
    }
    DecayParams more = p;
    more.initial_energy *= 2;
    CHECK(energy_decay(more) > energy_decay(p));

    p.horizon = 1e-9;
    CHECK(energy_decay(p) == doctest::Approx(p.initial_energy / p.app_count * p.horizon).epsilon(1e-8));
}

TEST_CASE("synchronized decay examples")
{
    const double mean = 1.5;
    const double s1 = 0.8;
    const double s2 = 1.1;
    DecayParams p = decay_at(mean, s1, mean, 0.0, s2, 0.0, 10.0, 2, 3.0);
    const double f1 = 1.0 / (2 * std::numbers::pi * s1 * s2);
    CHECK(synchronized_rate_estimate(p, mean, f1) == doctest::Approx(mean));
    CHECK(energy_decay_synchronized(p, mean, f1) ==
          doctest::Approx(5.0 * (1 - std::exp(-2 * mean * 3.0)) / (2 * mean)).epsilon(1e-13));
    p.horizon = 0.0;
    CHECK(energy_decay_synchronized(p, mean, f1) == 0.0);
}

TEST_CASE("synchronized decay equals energy decay with the estimated rate substituted")
{
    oracle::SuiteOptions o;
    o.grid = 100;
    CHECK(oracle::check_synchronized(o).passed());

    // Same statement through the closed form itself.
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const double m1 = 3 * rng.uniform();
        const double s1 = 0.3 + 2 * rng.uniform();
        const double s2 = 0.3 + 2 * rng.uniform();
        const double c = 0.05 + 0.9 * rng.uniform();
        const double f1 = c / (2 * std::numbers::pi * s1 * s2);
        const double lambda1 = m1 + s1 * std::sqrt(-2 * std::log(c)) * rng.uniform();
        DecayParams p = decay_at(m1, s1, lambda1, m1, s2, m1, 1000.0, 3, 1 + 20 * rng.uniform());
        const double lambda2 = synchronized_rate_estimate(p, lambda1, f1);
        DecayParams substituted = p;
        substituted.rate2 = GaussianRate::at_rate(m1, s2, lambda2);
        const double expected = energy_decay(substituted);
        CHECK(std::abs(energy_decay_synchronized(p, lambda1, f1) - expected) <= 1e-9 * expected);
    }
}

TEST_CASE("synchronized variants differ and infeasible inputs are reported")
{
    DecayParams p = decay_at(1.0, 1.0, 1.2, 1.0, 0.3, 1.0, 10.0, 1, 2.0);
    const double f1 = 0.2;
    CHECK(energy_decay_synchronized(p, 1.2, f1, SyncVariant::as_printed) !=
          doctest::Approx(energy_decay_synchronized(p, 1.2, f1, SyncVariant::as_derived)));
    try {
        energy_decay_synchronized(p, 1.2, 5.0);
        FAIL("expected an infeasible radicand");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()) == "synchronization assumption infeasible");
    }
}

TEST_CASE("transaction count examples")
{
    TxCountParams p = unit_tx();
    CHECK(transaction_load(p) == doctest::Approx(std::erf(1 / std::sqrt(2.0)) / 4));
    CHECK(transaction_count(p) == 1);
    CHECK(std::ceil(oracle::transaction_load(p)) == 1.0);

    p.request_rate = 0.0;
    CHECK(transaction_count(p) == 0);

    p = unit_tx();
    p.horizon = 1e-6;
    CHECK(transaction_load(p) < 1e-12);
    p.horizon = 0.0;
    CHECK_THROWS_AS(transaction_count(p), DomainError);
}

TEST_CASE("transaction count monotonicity")
{
    TxCountParams p;
    const std::int64_t base = transaction_count(p);
    TxCountParams q = p;
    q.request_rate = 3.0;
    CHECK(transaction_count(q) >= base);
    q = p;
    q.horizon = 150.0;
    CHECK(transaction_count(q) >= base);
    q = p;
    q.presence = 0.5;
    CHECK(transaction_count(q) <= base);
    q = p;
    q.parallel_links = 2;
    CHECK(transaction_count(q) <= base);

    std::int64_t prev = 0;
    for (double tau = 10; tau <= 100; tau += 10) {
        p.horizon = tau;
        CHECK(transaction_count(p) >= prev);
        prev = transaction_count(p);
    }
}

TEST_CASE("ceiling agreement with the double integral, as-printed reported separately")
{
    oracle::SuiteOptions o;
    o.grid = 60;
    const auto r = oracle::check_transaction_ceiling(o);
    CHECK(r.passed());
    REQUIRE_FALSE(r.notes.empty());

    TxCountParams printed;
    printed.formula_variant = FormulaVariant::as_printed;
    CHECK(std::ceil(oracle::transaction_load(printed)) == static_cast<double>(transaction_count(printed)));
    TxCountParams derived;
    CHECK(transaction_count(printed) != transaction_count(derived));
}

TEST_CASE("per-link rate table")
{
    TxCountParams p;
    TxCountParams table = p;
    table.link_rates.assign(static_cast<std::size_t>(p.cluster_count * p.links_per_ledger), p.request_rate);
    CHECK(transaction_load(table) == doctest::Approx(transaction_load(p)));
    table.link_rates.pop_back();
    CHECK_THROWS_AS(transaction_count(table), DomainError);
}

TEST_CASE("formula variant names")
{
    CHECK(parse_formula_variant("as-derived") == FormulaVariant::as_derived);
    CHECK(parse_formula_variant("as-printed") == FormulaVariant::as_printed);
    CHECK(to_string(FormulaVariant::as_printed) == "as-printed");
    CHECK_THROWS_AS(parse_formula_variant("derived"), DomainError);
}

}
