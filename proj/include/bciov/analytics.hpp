#ifndef BCIOV_ANALYTICS_HPP
#define BCIOV_ANALYTICS_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace bciov {

/// Gaussian density of x with the given mean and deviation.
double gaussian_density(double x, double mean, double stddev);

/**
 * A slot-rate distribution and an observed density value on it.
 *
 * `frequency` is the density evaluated at the (unknown) rate; it must lie in
 * (0, 1/(stddev*sqrt(2*pi))] because a Gaussian cannot exceed its peak.
 */
struct GaussianRate {
    double mean = 0.0;       // events/s
    double stddev = 1.0;     // events/s
    double frequency = 0.0;  // 1/(events/s)

    void validate() const;

    /// Descriptor whose frequency is the density at `rate`.
    static GaussianRate at_rate(double mean, double stddev, double rate);
};

/// Upper-branch inverse of the Gaussian density: stddev*sqrt(-2 ln(sqrt(2 pi) stddev f)) + mean.
double invert_rate(const GaussianRate& g);

struct DecayParams {
    GaussianRate rate1;
    GaussianRate rate2;
    double initial_energy = 1.0;  // B^(o) [J]
    int app_count = 1;            // |S|
    double horizon = 1.0;         // tau [s]

    void validate() const;
};

/// scale * integral_0^horizon exp(-total_rate t) dt, with the tau-linear limit at total_rate = 0.
double decay_integral(double scale, double total_rate, double horizon);

/// Energy decayed per vehicle over the horizon, evaluated from the closed form
/// in the distribution parameters.
double energy_decay(const DecayParams& p);

/// The exponent rate of energy_decay (sum of both inverted slot rates).
double decay_rate(const DecayParams& p);

enum class SyncVariant {
    as_derived,  // exponent lambda1 + estimated lambda2
    as_printed,  // exponent 2 * estimated lambda2
};

/// Estimated second rate under synchronised operation (equal means and frequencies).
/// Throws DomainError("synchronization assumption infeasible") on a negative radicand.
double synchronized_rate_estimate(const DecayParams& p, double lambda1, double f1);

/// Synchronised-case energy decay; rate2.mean and rate2.frequency are ignored
/// (taken equal to rate1.mean and f1).
double energy_decay_synchronized(const DecayParams& p, double lambda1, double f1,
                                 SyncVariant variant = SyncVariant::as_derived);

enum class FormulaVariant { as_printed, as_derived };

FormulaVariant parse_formula_variant(std::string_view s);
std::string_view to_string(FormulaVariant v);

struct TxCountParams {
    int cluster_count = 5;          // |C|
    int links_per_ledger = 4;       // psi
    double request_rate = 2.0;      // lambda
    double presence = 1.0;          // P_c
    double horizon = 100.0;         // tau [s]
    int parallel_links = 1;         // D
    double mean_range = 300.0;      // R' [m]
    double radio_range = 300.0;     // R'' [m]
    double range_stddev = 200.0;    // sigma_R'' [m]
    FormulaVariant formula_variant = FormulaVariant::as_derived;
    // Optional per-(cluster, link) rates in cluster-major order; replaces the
    // uniform request_rate when non-empty and must have |C|*psi entries.
    std::vector<double> link_rates;

    void validate() const;
    [[nodiscard]] double rate_sum() const;
};

/// The un-rounded transaction load whose ceiling is transaction_count.
double transaction_load(const TxCountParams& p);

/// Number of transactions needed to shift the entire ledger load.
std::int64_t transaction_count(const TxCountParams& p);

}  // namespace bciov

#endif
