#ifndef BCIOV_SIM_HPP
#define BCIOV_SIM_HPP

#include "bciov/analytics.hpp"
#include "bciov/controller.hpp"
#include "bciov/mobility.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bciov {

enum class Regime { baseline, clustered };

/// How clustered-regime transactions are counted.
enum class TxAccounting {
    per_message,   // one transaction per member update plus |C|(|C|-1) per global exchange
    ledger_shift,  // Gaussian-mobility ledger shift: per (cluster, link) load lambda*t*G/D
};

/// When the security cost beta_C,M is charged.
enum class SecurityCharging { per_transaction, per_slot };

std::string_view to_string(Regime r);
std::string_view to_string(TxAccounting a);
std::string_view to_string(SecurityCharging s);
Regime parse_regime(std::string_view s);
TxAccounting parse_tx_accounting(std::string_view s);
SecurityCharging parse_security_charging(std::string_view s);

/// Full scenario parameterisation. Defaults reproduce the reference fleet
/// (5 clusters of 10 vehicles, 10 apps, 10 hops, 2580 J per record/request).
struct SimConfig {
    int cluster_count = 5;
    int vehicles_per_cluster = 10;
    int app_count = 10;

    double lambda = 2.0;   // ledger updates per vehicle per second
    double lambda1 = 1.0;  // general-operation slot rate
    double lambda2 = 2.0;  // blockchain-operation slot rate
    std::optional<double> requests;  // gamma per second; defaults to lambda
    int message_kinds = 3;
    int hop_count = 10;
    int records_per_tx = 1;
    double per_record_energy = 2580.0;
    double per_request_energy = 2580.0;
    double security_cost = 0.625;

    double excess_ratio = 2.0;         // epsilon
    double energy_stddev = 0.0;        // sigma of the stochastic overhead
    double request_change_rate = 0.0;  // dB'/dt scale

    double horizon = 100.0;  // tau
    double slot = 1.0;       // omega

    double connect_range = 500.0;               // R
    double mean_range = 300.0;                  // R'
    double radio_range = 300.0;                 // R''
    std::optional<double> range_stddev;         // sigma_R''; defaults to |R - R''|
    double radio_range_jitter = 10.0;           // per-vehicle R'' spread [m]
    double presence = 1.0;                      // P_c
    double receiver_presence = 1.0;             // P_c^(A)
    double threshold_probability = 0.0;        // P_th

    int links_per_ledger = 0;  // psi; 0 selects |C| - 1 (at least 1)
    int parallel_links = 1;    // D
    double stay_time = 1.0;    // tau'
    std::optional<int> global_exchange_every;  // slots; defaults to ceil(tau'/omega)

    double initial_energy = 1e9;     // B^(o) per vehicle [J]
    double critical_fraction = 0.1;  // residual below this share of B^(o) is critical
    std::optional<double> expected_rate;     // lambda_expected; defaults to lambda1
    std::optional<double> idealistic_score;  // S_p override; defaults to the OST threshold
    bool heston_variance_negligible = true;

    std::uint64_t seed = 1;
    Regime regime = Regime::clustered;
    TxAccounting accounting = TxAccounting::per_message;
    SecurityCharging security = SecurityCharging::per_transaction;
    FormulaVariant formula_variant = FormulaVariant::as_derived;

    void validate() const;

    [[nodiscard]] int fleet_size() const { return cluster_count * vehicles_per_cluster; }
    [[nodiscard]] double effective_requests() const { return requests.value_or(lambda); }
    [[nodiscard]] double effective_range_stddev() const;
    [[nodiscard]] int effective_links() const;
    [[nodiscard]] int exchange_every() const;
    [[nodiscard]] double effective_expected_rate() const { return expected_rate.value_or(lambda1); }
    [[nodiscard]] std::int64_t slots() const;

    [[nodiscard]] MobilityModel mobility() const;
    [[nodiscard]] ConnectivityParams connectivity() const;
};

enum class Role { member, cluster_head };

struct VehicleState {
    VehicleId id = 0;
    ClusterId cluster = 0;
    double position = 0.0;  // distance to the cluster head [m]
    double residual_energy = 0.0;
    double initial_energy = 0.0;
    double stay_time = 0.0;
    double radio_range = 0.0;
    Role role = Role::member;
    bool critical = false;

    [[nodiscard]] bool active() const { return residual_energy > 0.0; }
};

/// Itemised energy charged in one slot [J].
struct EnergyItems {
    double security = 0.0;        // beta_C,M per transaction or per slot
    double transmission = 0.0;    // beta_R
    double ledger = 0.0;          // beta_U
    double authentication = 0.0;  // hash-based joins and CH changes
    double variation = 0.0;       // stochastic request-rate overhead

    [[nodiscard]] double total() const { return security + transmission + ledger + authentication + variation; }
    EnergyItems& operator+=(const EnergyItems& o);
    [[nodiscard]] EnergyItems scaled(double f) const;
};

struct SlotRow {
    double t = 0.0;
    std::int64_t transactions = 0;  // this slot
    std::int64_t transactions_cum = 0;
    double energy_cum = 0.0;        // fleet energy consumed so far [J]
    std::int64_t ch_changes_cum = 0;
    std::int64_t offloads_cum = 0;
    EnergyItems items;              // fleet itemisation for this slot
    double fleet_decrement = 0.0;   // sum of residual-energy drops this slot
    int active_vehicles = 0;
};

struct RunReport {
    Regime regime = Regime::clustered;
    std::vector<SlotRow> rows;
    std::vector<TraceRow> trace;
    ConstraintReport constraints;
    std::vector<VehicleState> final_fleet;

    [[nodiscard]] std::int64_t total_transactions() const { return rows.empty() ? 0 : rows.back().transactions_cum; }
    [[nodiscard]] double total_energy() const { return rows.empty() ? 0.0 : rows.back().energy_cum; }
    [[nodiscard]] std::int64_t total_ch_changes() const { return rows.empty() ? 0 : rows.back().ch_changes_cum; }
    [[nodiscard]] std::int64_t total_offloads() const { return rows.empty() ? 0 : rows.back().offloads_cum; }
};

/// Seeded initial fleet: positions drawn from the distance density, per-vehicle
/// radio ranges jittered around R'', vehicle 0 of each cluster as initial CH.
std::vector<VehicleState> initial_fleet(const SimConfig& cfg);

/// Full-mesh broadcast comparator.
RunReport run_baseline(const SimConfig& cfg);

/// Local/global chain regime with controller-driven CH rotation.
RunReport run_clustered(const SimConfig& cfg);

/// Dispatches on cfg.regime.
RunReport run(const SimConfig& cfg);

struct ComparisonRow {
    double t = 0.0;
    std::int64_t reference_tx_cum = 0;
    std::int64_t candidate_tx_cum = 0;
    double reference_energy_cum = 0.0;
    double candidate_energy_cum = 0.0;
    double tx_reduction_pct = 0.0;
    double energy_conservation_pct = 0.0;
};

struct ComparisonReport {
    RunReport reference;
    RunReport candidate;
    std::vector<ComparisonRow> rows;
    double tx_reduction_pct = 0.0;
    double energy_conservation_pct = 0.0;
};

/// Percentage reduction of candidate against reference (0 when reference is 0).
double reduction_pct(double reference, double candidate);

/// Row-by-row comparison of two runs over the same slots.
ComparisonReport compare(RunReport reference, RunReport candidate);

/// Baseline and clustered runs of the same configuration and seed.
ComparisonReport paired_comparison(const SimConfig& cfg);

/// Human-readable statements of how the baseline comparator is formalised.
std::vector<std::string> baseline_assumptions(const SimConfig& cfg);

}  // namespace bciov

#endif
