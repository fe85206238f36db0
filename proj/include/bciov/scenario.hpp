#ifndef BCIOV_SCENARIO_HPP
#define BCIOV_SCENARIO_HPP

#include "bciov/analytics.hpp"
#include "bciov/sim.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bciov {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Slot-rate distributions for the closed-form table; the observed densities
/// are taken at lambda1 and lambda2 of the simulation parameters.
struct AnalyticsInputs {
    double rate1_mean = 0.0;
    double rate1_stddev = 1.0;
    double rate2_mean = 0.0;
    double rate2_stddev = 0.3;
    std::optional<double> sync_frequency;  // f1; defaults to the rate1 density at lambda1
};

struct ScenarioPoint {
    SimConfig sim;
    AnalyticsInputs analytics;
};

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

struct Scenario {
    std::string name = "scenario";
    ScenarioPoint base;
    std::vector<SweepAxis> sweeps;  // zipped: all axes have the same length
    std::string output = "out";

    /// 1 when there are no sweeps.
    [[nodiscard]] std::size_t point_count() const;
    [[nodiscard]] ScenarioPoint point(std::size_t index) const;
};

/// Parses the JSON scenario text; unknown keys and bad values are ConfigErrors.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Sets one numeric (or boolean, as 0/1) parameter by its flat name.
void set_param(ScenarioPoint& point, const std::string& key, double value);
/// Sets one enumerated parameter (regime, accounting, security, formula_variant).
void set_text_param(ScenarioPoint& point, const std::string& key, const std::string& value);

DecayParams decay_params(const ScenarioPoint& p);
TxCountParams tx_params(const ScenarioPoint& p);

}  // namespace bciov

#endif
