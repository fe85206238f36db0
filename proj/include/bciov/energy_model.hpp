#ifndef BCIOV_ENERGY_MODEL_HPP
#define BCIOV_ENERGY_MODEL_HPP

#include <stdexcept>
#include <utility>
#include <vector>

namespace bciov {

class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Per-application blockchain energy constants for one vehicle.
 *
 * Energies are in joules. The request count is per accounting interval, so a
 * simulator charging per slot passes rate * slot length.
 */
struct EnergyParams {
    double per_record_energy = 2580.0;   // E_R [J/record]
    double per_request_energy = 2580.0;  // E_C [J/request]
    int hop_count = 10;                  // H
    int message_kinds = 3;               // k: send, receive, acknowledgement
    double requests = 2.0;               // gamma
    int records_per_tx = 1;              // R_C
    double security_cost = 0.625;        // beta_C,M [J]
    int app_count = 10;                  // |S|

    // Optional per-kind request energy; when non-empty it must hold exactly
    // message_kinds entries and replaces the uniform per_request_energy.
    std::vector<double> per_kind_request_energy;

    void validate() const;
};

/// beta_U = H * (R_C * E_R)
double ledger_update_energy(const EnergyParams& p);

/// beta_R = H * sum_{j=1..k} (E_C * gamma)_j
double transmission_energy(const EnergyParams& p);

/// |S| * (beta_C,M + beta_R + beta_U) for homogeneous applications.
double total_blockchain_energy(const EnergyParams& p);

struct HestonParams {
    double request_rate = 0.0;         // lambda [1/s]
    double excess_energy_ratio = 2.0;  // epsilon
    double energy_stddev = 0.0;        // sigma [J]
    double request_change_rate = 0.0;  // dB'/dt drift scale [1/s^2]

    void validate() const;
};

/// Energy book of one vehicle. `current` is the value Eq-style updates act on;
/// history holds (time [s], joules) samples with strictly increasing time.
class EnergyLedger {
public:
    EnergyLedger() = default;
    explicit EnergyLedger(double initial, double start_time = 0.0);
    EnergyLedger(double initial, double current, double start_time);

    [[nodiscard]] double initial() const { return initial_; }
    [[nodiscard]] double current() const { return current_; }
    [[nodiscard]] double time() const { return history_.back().first; }
    [[nodiscard]] const std::vector<std::pair<double, double>>& history() const { return history_; }

    /// Appends a new sample; time must advance.
    void record(double time, double joules);

private:
    double initial_ = 0.0;
    double current_ = 0.0;
    std::vector<std::pair<double, double>> history_{{0.0, 0.0}};
};

/// One explicit Euler step of dB/dt = lambda (B - B0) + eps sqrt(sigma) dB'/dt,
/// where dB'/dt is realised as request_change_rate * noise.
EnergyLedger heston_step(const EnergyLedger& ledger, const HestonParams& hp, double dt,
                         double noise);

}  // namespace bciov

#endif
