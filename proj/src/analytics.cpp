#include "bciov/analytics.hpp"

#include "bciov/energy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace bciov {

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

// Radicands that land a few ulps below zero at the density peak are zero.
constexpr double kRadicandSlack = 1e-12;

double clamp_radicand(double r, const char* what)
{
    if (r >= 0.0) return r;
    if (r > -kRadicandSlack) return 0.0;
    throw DomainError(what);
}

// -ln(sqrt(2 pi) sigma f), the radicand shared by the inversion and the decay.
double log_radicand(const GaussianRate& g)
{
    return clamp_radicand(-std::log(kSqrt2Pi * g.stddev * g.frequency),
                          "frequency exceeds the peak of its density");
}

}  // namespace

double gaussian_density(double x, double mean, double stddev)
{
    const double z = (x - mean) / stddev;
    return std::exp(-0.5 * z * z) / (stddev * kSqrt2Pi);
}

void GaussianRate::validate() const
{
    if (!std::isfinite(mean)) throw DomainError("rate mean must be finite");
    if (!(stddev > 0.0) || !std::isfinite(stddev)) throw DomainError("rate stddev must be > 0");
    if (!(frequency > 0.0) || !std::isfinite(frequency)) throw DomainError("frequency must be > 0");
}

GaussianRate GaussianRate::at_rate(double mean, double stddev, double rate)
{
    return {mean, stddev, gaussian_density(rate, mean, stddev)};
}

double invert_rate(const GaussianRate& g)
{
    g.validate();
    return g.stddev * std::sqrt(2.0 * log_radicand(g)) + g.mean;
}

void DecayParams::validate() const
{
    rate1.validate();
    rate2.validate();
    if (!std::isfinite(initial_energy) || initial_energy < 0.0) throw DomainError("initial_energy must be >= 0");
    if (app_count < 1) throw DomainError("app_count must be >= 1");
    if (!std::isfinite(horizon) || horizon < 0.0) throw DomainError("horizon must be >= 0");
}

double decay_integral(double scale, double total_rate, double horizon)
{
    if (horizon == 0.0) return 0.0;
    if (total_rate == 0.0) return scale * horizon;
    return scale * (-std::expm1(-total_rate * horizon)) / total_rate;
}

double decay_rate(const DecayParams& p)
{
    p.validate();
    const double s1 = p.rate1.stddev * std::sqrt(log_radicand(p.rate1));
    const double s2 = p.rate2.stddev * std::sqrt(log_radicand(p.rate2));
    return std::numbers::sqrt2 * (s2 + s1) + p.rate2.mean + p.rate1.mean;
}

double energy_decay(const DecayParams& p)
{
    const double rate = decay_rate(p);
    return decay_integral(p.initial_energy / p.app_count, rate, p.horizon);
}

namespace {

struct SyncTerms {
    double sqrt_q;  // sqrt(-2 s1^2 ln(2 pi f1 s1 s2) - (lambda1 - mean1)^2)
};

SyncTerms sync_terms(const DecayParams& p, double lambda1, double f1)
{
    p.validate();
    if (!(f1 > 0.0) || !std::isfinite(f1)) throw DomainError("f1 must be > 0");
    if (!std::isfinite(lambda1)) throw DomainError("lambda1 must be finite");
    const double s1 = p.rate1.stddev;
    const double s2 = p.rate2.stddev;
    const double dev = lambda1 - p.rate1.mean;
    const double q = -2.0 * s1 * s1 * std::log(2.0 * std::numbers::pi * f1 * s1 * s2) - dev * dev;
    const double slack = kRadicandSlack * std::max(1.0, s1 * s1);
    if (q < -slack) throw DomainError("synchronization assumption infeasible");
    return {std::sqrt(std::max(q, 0.0))};
}

}  // namespace

double synchronized_rate_estimate(const DecayParams& p, double lambda1, double f1)
{
    const SyncTerms t = sync_terms(p, lambda1, f1);
    return p.rate2.stddev * t.sqrt_q / p.rate1.stddev + p.rate1.mean;
}

double energy_decay_synchronized(const DecayParams& p, double lambda1, double f1, SyncVariant variant)
{
    const SyncTerms t = sync_terms(p, lambda1, f1);
    const double s1 = p.rate1.stddev;
    const double s2 = p.rate2.stddev;
    const double mean1 = p.rate1.mean;
    // Both forms read sigma1 (1 - e^{-den tau / sigma1}) / den.
    double den = 0.0;
    if (variant == SyncVariant::as_printed) {
        den = 2.0 * (s2 * t.sqrt_q + mean1 * s1);
    } else {
        den = s2 * t.sqrt_q + (mean1 + lambda1) * s1;
    }
    return decay_integral(p.initial_energy / p.app_count, den / s1, p.horizon);
}

FormulaVariant parse_formula_variant(std::string_view s)
{
    if (s == "as-derived") return FormulaVariant::as_derived;
    if (s == "as-printed") return FormulaVariant::as_printed;
    throw DomainError("unknown formula variant: " + std::string(s));
}

std::string_view to_string(FormulaVariant v)
{
    return v == FormulaVariant::as_derived ? "as-derived" : "as-printed";
}

void TxCountParams::validate() const
{
    if (cluster_count < 1) throw DomainError("cluster_count must be >= 1");
    if (links_per_ledger < 1) throw DomainError("links_per_ledger must be >= 1");
    if (parallel_links < 1) throw DomainError("parallel_links must be >= 1");
    if (!std::isfinite(request_rate) || request_rate < 0.0) throw DomainError("request_rate must be >= 0");
    if (!(presence >= 0.0 && presence <= 1.0)) throw DomainError("presence must be in [0,1]");
    if (!(mean_range > 0.0) || !(radio_range > 0.0) || !(horizon > 0.0)) {
        throw DomainError("transaction count requires R' > 0, R'' > 0 and tau > 0");
    }
    if (!(range_stddev > 0.0)) throw DomainError("range_stddev must be > 0");
    if (!link_rates.empty()) {
        if (link_rates.size() != static_cast<std::size_t>(cluster_count) * static_cast<std::size_t>(links_per_ledger)) {
            throw DomainError("link_rates must have cluster_count * links_per_ledger entries");
        }
        for (double r : link_rates) {
            if (!std::isfinite(r) || r < 0.0) throw DomainError("link rates must be >= 0");
        }
    }
}

double TxCountParams::rate_sum() const
{
    if (!link_rates.empty()) return std::accumulate(link_rates.begin(), link_rates.end(), 0.0);
    return static_cast<double>(cluster_count) * static_cast<double>(links_per_ledger) * request_rate;
}

double transaction_load(const TxCountParams& p)
{
    p.validate();
    const double lead = p.rate_sum() * p.presence * p.horizon * p.horizon;
    if (p.formula_variant == FormulaVariant::as_printed) {
        const double span = std::erf(p.mean_range - p.radio_range) - std::erf(p.mean_range);
        return -lead * span / (std::pow(2.0, 2.5) * p.parallel_links * p.range_stddev);
    }
    const double scale = std::numbers::sqrt2 * p.range_stddev;
    const double span = std::erf((p.mean_range - p.radio_range) / scale) - std::erf(p.mean_range / scale);
    return -lead * span / (4.0 * p.parallel_links);
}

std::int64_t transaction_count(const TxCountParams& p)
{
    const double load = transaction_load(p);
    const double c = std::ceil(load);
    return c <= 0.0 ? 0 : static_cast<std::int64_t>(c);
}

}  // namespace bciov
