#include "bciov/mobility.hpp"

#include "bciov/energy_model.hpp"
#include "bciov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bciov {

namespace {

constexpr double kOvershoot = 1e-12;

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

double DistanceDensity::operator()(double p) const
{
    const double z = (p - mean) / stddev;
    return std::exp(-0.5 * z * z) / (stddev * std::sqrt(2.0 * std::numbers::pi));
}

void MobilityModel::validate() const
{
    if (!std::isfinite(connect_range) || connect_range < 0.0) throw DomainError("connect_range must be >= 0");
    if (!(radio_range > 0.0)) throw DomainError("radio_range must be > 0");
    if (!(mean_range > 0.0)) throw DomainError("mean_range must be > 0");
    if (!(range_stddev > 0.0)) throw DomainError("range_stddev must be > 0");
    if (!(density.stddev > 0.0) || !std::isfinite(density.mean)) throw DomainError("density must have positive deviation");
}

MobilityModel MobilityModel::gaussian(double connect_range, double radio_range, double mean_range,
                                      double range_stddev)
{
    MobilityModel m;
    m.density = DistanceDensity::gaussian(mean_range, range_stddev);
    m.connect_range = connect_range;
    m.radio_range = radio_range;
    m.mean_range = mean_range;
    m.range_stddev = range_stddev;
    return m;
}

void ConnectivityParams::validate() const
{
    if (!is_probability(presence)) throw DomainError("presence must be in [0,1]");
    if (!is_probability(receiver_presence)) throw DomainError("receiver_presence must be in [0,1]");
    if (!is_probability(threshold)) throw DomainError("threshold must be in [0,1]");
}

double coverage_probability(const MobilityModel& m, const ConnectivityParams& c, double upper)
{
    m.validate();
    c.validate();
    if (!std::isfinite(upper) || upper < 0.0) throw DomainError("integration limit must be >= 0");
    if (upper == 0.0 || c.presence == 0.0) return 0.0;

    const auto f = [&](double p) { return m.density(p); };
    // Split at the mode so the peak is never straddled by a coarse panel.
    const double mode = m.density.mean;
    double mass = 0.0;
    if (mode > 0.0 && mode < upper) {
        mass = integrate(f, 0.0, mode) + integrate(f, mode, upper);
    } else {
        mass = integrate(f, 0.0, upper);
    }
    return c.presence * mass;
}

double in_range_probability(const MobilityModel& m, const ConnectivityParams& c)
{
    const double p = 1.0 - coverage_probability(m, c, m.connect_range);
    if (p < -kOvershoot || p > 1.0 + kOvershoot || !std::isfinite(p)) {
        throw QuadratureError("in-range probability outside [0,1]");
    }
    return std::clamp(p, 0.0, 1.0);
}

double transfer_function(const MobilityModel& m, const ConnectivityParams& c, int clusters,
                         int vehicles, int apps)
{
    if (clusters < 1 || vehicles < 1 || apps < 1) throw DomainError("counts must be >= 1");
    const double per_term = c.receiver_presence * in_range_probability(m, c);
    return static_cast<double>(clusters) * static_cast<double>(vehicles) *
           static_cast<double>(apps) * per_term;
}

TransferErrorSchedule::TransferErrorSchedule(std::vector<std::pair<double, double>> steps)
    : steps_(std::move(steps))
{
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const auto& [start, value] = steps_[i];
        if (!std::isfinite(start) || !is_probability(value)) {
            throw DomainError("transfer error steps need finite starts and values in [0,1]");
        }
        if (i > 0 && !(start > steps_[i - 1].first)) {
            throw DomainError("transfer error steps must have increasing start times");
        }
    }
}

double TransferErrorSchedule::at(double t) const
{
    double v = 0.0;
    for (const auto& [start, value] : steps_) {
        if (t < start) break;
        v = value;
    }
    return v;
}

double TransferErrorSchedule::integral(double from, double to) const
{
    if (to <= from) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const double seg_begin = std::max(from, steps_[i].first);
        const double seg_end = i + 1 < steps_.size() ? std::min(to, steps_[i + 1].first) : to;
        if (seg_end > seg_begin) total += steps_[i].second * (seg_end - seg_begin);
    }
    return total;
}

ConstraintReport check_constraints(const ConstraintSet& cs, const MobilityModel& m,
                                   const ConnectivityParams& c)
{
    ConstraintReport r;
    r.request_bound_ok = cs.op_time > 0.0 && cs.request_bound <= cs.stay_time / cs.op_time;
    r.stay_time_ok = cs.stay_time <= cs.op_time;
    r.in_range_probability = in_range_probability(m, c);
    r.in_range_ok = r.in_range_probability >= c.threshold;
    // P(f(p)) does not depend on p, so the inner integral over [0, R] is R * P.
    r.transfer_error_integral =
        m.connect_range * r.in_range_probability * cs.transfer_error.integral(0.0, cs.op_time);
    return r;
}

}  // namespace bciov
