#ifndef BCIOV_MOBILITY_HPP
#define BCIOV_MOBILITY_HPP

#include <utility>
#include <vector>

namespace bciov {

/// Gaussian density over scalar distance p [m].
struct DistanceDensity {
    double mean = 300.0;
    double stddev = 200.0;

    [[nodiscard]] double operator()(double p) const;

    static DistanceDensity gaussian(double mean, double stddev) { return {mean, stddev}; }
    /// Zero mean, unit deviation; restricted to p >= 0 it carries mass 1/2.
    static DistanceDensity standard_normal() { return {0.0, 1.0}; }
};

struct MobilityModel {
    DistanceDensity density;
    double connect_range = 500.0;  // R [m]
    double radio_range = 300.0;    // R'' [m]
    double mean_range = 300.0;     // R' [m]
    double range_stddev = 200.0;   // sigma_R'' [m]

    void validate() const;

    /// Density defaults to a Gaussian with mean R' and deviation sigma_R''.
    static MobilityModel gaussian(double connect_range, double radio_range, double mean_range,
                                  double range_stddev);
};

struct ConnectivityParams {
    double presence = 1.0;           // P_c
    double receiver_presence = 1.0;  // P_c^(A)
    double threshold = 0.0;          // P_th

    void validate() const;
};

/// P_c * integral_0^upper f(p) dp by adaptive quadrature.
double coverage_probability(const MobilityModel& m, const ConnectivityParams& c, double upper);

/// 1 - integral_0^R P_c f(p) dp. Overshoot outside [0, 1] beyond 1e-12 is an error.
double in_range_probability(const MobilityModel& m, const ConnectivityParams& c);

/// Sum over clusters, vehicles and apps of P_c^(A) * P(f(p)) for a homogeneous fleet.
double transfer_function(const MobilityModel& m, const ConnectivityParams& c, int clusters,
                         int vehicles, int apps);

/// Piecewise-constant epsilon(t): each step (start, value) holds until the next start.
/// Before the first start the value is 0. An empty schedule is identically 0.
class TransferErrorSchedule {
public:
    TransferErrorSchedule() = default;
    explicit TransferErrorSchedule(std::vector<std::pair<double, double>> steps);

    [[nodiscard]] double at(double t) const;
    [[nodiscard]] double integral(double from, double to) const;
    [[nodiscard]] const std::vector<std::pair<double, double>>& steps() const { return steps_; }

private:
    std::vector<std::pair<double, double>> steps_;
};

struct ConstraintSet {
    double op_time = 100.0;     // tau [s]
    double stay_time = 100.0;   // tau' [s]
    double request_bound = 0.0; // gamma [1/s]
    TransferErrorSchedule transfer_error;
};

struct ConstraintReport {
    bool request_bound_ok = false;  // gamma <= tau'/tau
    bool stay_time_ok = false;      // tau' <= tau
    bool in_range_ok = false;       // P(f(p)) >= P_th
    double in_range_probability = 0.0;
    double transfer_error_integral = 0.0;

    [[nodiscard]] bool all_satisfied() const { return request_bound_ok && stay_time_ok && in_range_ok; }
};

ConstraintReport check_constraints(const ConstraintSet& cs, const MobilityModel& m,
                                   const ConnectivityParams& c);

}  // namespace bciov

#endif
