#ifndef BCIOV_CONTROLLER_HPP
#define BCIOV_CONTROLLER_HPP

#include "bciov/analytics.hpp"
#include "bciov/energy_model.hpp"
#include "bciov/mobility.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bciov {

using VehicleId = std::uint32_t;
using ClusterId = std::uint32_t;

/// Observed CH score S_t,i under negligible Heston variance:
/// -P_c (erf((R'-R'')/(sqrt2 sR'')) - erf(R'/(sqrt2 sR''))) / 2 + 2 lambda1.
double ost_score(const MobilityModel& m, const ConnectivityParams& c, double lambda1);

/// Expected score S_expected,i = P_c erf(R'/(sqrt2 sR'')) / 2 + lambda_expected.
double ost_threshold(const ConnectivityParams& c, const MobilityModel& m, double expected_rate);

/// Inputs of the pre-energy-decay rule, evaluated over [0, tau - omega].
struct PreDecayInputs {
    HestonParams heston;                      // lambda, epsilon, sigma
    double expected_request_change = 0.0;     // E[dB'/dt]; 0 for zero-mean noise
    DecayParams decay;                        // horizon is overridden by tau - omega
    double lambda1 = 0.0;
    double slot = 1.0;                        // omega
    double horizon = 100.0;                   // tau
};

struct PreDecaySides {
    double lhs = 0.0;  // expected drift integral
    double rhs = 0.0;  // 2 lambda1 decay(tau - omega) + 2 lambda1 eps sqrt(s1 s2) (tau - omega)
};

PreDecaySides pre_decay_sides(const PreDecayInputs& in);

/// True (change CH) when the expected drift integral is strictly below the decay bound.
bool pre_decay_check(const PreDecayInputs& in);

struct OstObservation {
    double observed = 0.0;                 // S_t,i of the sitting CH
    double expected = 0.0;                 // S_expected,i
    std::optional<double> upper_tx_limit;  // K^(T)_R,i; empty when undefined
    double required_tx = 0.0;              // K^(T)_R of the cluster
    double time = 0.0;
};

struct Candidate {
    VehicleId id = 0;
    double energy_rating = 0.0;
    double radio_range = 0.0;  // R''
    double tx_limit = 0.0;
    bool critical = false;
};

/// Fleet-level split information: a cluster's transfer-function value and
/// whether its Eq-8-style constraints hold.
struct TransferShare {
    ClusterId cluster = 0;
    double transfer_score = 0.0;
    bool constraints_ok = true;
};

enum class ChAction { keep, change, split_by_range, split_by_transfer };
enum class DecisionRule { ost, lemma2_limit, pre_decay };

std::string_view to_string(ChAction a);
std::string_view to_string(DecisionRule r);

struct ChDecision {
    ChAction action = ChAction::keep;
    std::optional<VehicleId> new_ch;       // set iff action == change
    std::optional<VehicleId> load_share;   // split_by_range helper
    std::optional<ClusterId> split_target; // split_by_transfer target cluster
    double offload_slot = 0.0;             // t - omega, clamped at 0
    DecisionRule rule_used = DecisionRule::ost;
};

struct ControllerConfig {
    double slot = 1.0;                       // omega [s]
    double horizon = 100.0;                  // tau [s]
    double expected_rate = 1.0;              // lambda_expected
    bool heston_variance_negligible = true;  // OST rule applies only when set
    double connect_range = 500.0;            // R used in the R <= R'' test

    void validate() const;
};

struct DecisionContext {
    std::optional<PreDecayInputs> pre_decay;
    std::span<const TransferShare> split_data;
};

/// Rule cascade for one cluster at one slot. Candidates exclude the sitting CH.
/// Throws DomainError when a split is required but there is nothing to split with.
ChDecision decide(const OstObservation& obs, const ControllerConfig& cfg,
                  std::span<const Candidate> candidates, const DecisionContext& ctx = {});

/// Everything the controller needs about one cluster at one slot.
struct ClusterView {
    ClusterId cluster = 0;
    OstObservation observation;
    std::vector<Candidate> candidates;
    std::optional<PreDecayInputs> pre_decay;
    std::vector<TransferShare> split_data;
};

struct TraceRow {
    double slot = 0.0;
    ClusterId cluster = 0;
    DecisionRule rule_used = DecisionRule::ost;
    ChAction action = ChAction::keep;
    VehicleId old_ch = 0;
    std::optional<VehicleId> new_ch;
    std::optional<double> offload_slot;  // stamped on change events only
    std::optional<VehicleId> load_share;
    std::optional<ClusterId> split_target;
};

/// Holds the sitting CH per cluster and applies decisions slot by slot.
class ClusterController {
public:
    ClusterController(ControllerConfig cfg, std::vector<VehicleId> initial_heads);

    /// Decides every cluster for slot time t; views are merged in cluster order.
    std::vector<TraceRow> step(double t, std::span<const ClusterView> views);

    [[nodiscard]] const std::vector<VehicleId>& heads() const { return heads_; }
    [[nodiscard]] const ControllerConfig& config() const { return cfg_; }
    /// Replaces the head of a cluster outside the decision cascade.
    void set_head(ClusterId cluster, VehicleId head) { heads_.at(cluster) = head; }

private:
    ControllerConfig cfg_;
    std::vector<VehicleId> heads_;
};

using ObservationSource =
    std::function<std::vector<ClusterView>(double t, std::span<const VehicleId> heads)>;

/// Iterates t = omega, 2 omega, ..., tau and returns the full decision trace.
std::vector<TraceRow> run_controller(const ObservationSource& source, const ControllerConfig& cfg,
                                     std::vector<VehicleId> initial_heads);

/// Number of slots between omega and tau inclusive.
std::int64_t slot_count(double slot, double horizon);

}  // namespace bciov

#endif
