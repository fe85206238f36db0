#include "bciov/energy_model.hpp"

#include <cmath>
#include <string>

namespace bciov {

namespace {

void require_finite_nonneg(double v, const char* name)
{
    if (!std::isfinite(v) || v < 0.0) {
        throw DomainError(std::string(name) + " must be finite and >= 0");
    }
}

}  // namespace

void EnergyParams::validate() const
{
    require_finite_nonneg(per_record_energy, "per_record_energy");
    require_finite_nonneg(per_request_energy, "per_request_energy");
    require_finite_nonneg(requests, "requests");
    require_finite_nonneg(security_cost, "security_cost");
    if (hop_count < 0) throw DomainError("hop_count must be >= 0");
    if (message_kinds < 1) throw DomainError("message_kinds must be >= 1");
    if (records_per_tx < 0) throw DomainError("records_per_tx must be >= 0");
    if (app_count < 1) throw DomainError("app_count must be >= 1");
    if (!per_kind_request_energy.empty()) {
        if (static_cast<int>(per_kind_request_energy.size()) != message_kinds) {
            throw DomainError("per_kind_request_energy must have message_kinds entries");
        }
        for (double e : per_kind_request_energy) require_finite_nonneg(e, "per_kind_request_energy");
    }
}

double ledger_update_energy(const EnergyParams& p)
{
    p.validate();
    return static_cast<double>(p.hop_count) * (static_cast<double>(p.records_per_tx) * p.per_record_energy);
}

double transmission_energy(const EnergyParams& p)
{
    p.validate();
    double per_hop = 0.0;
    if (p.per_kind_request_energy.empty()) {
        per_hop = static_cast<double>(p.message_kinds) * (p.per_request_energy * p.requests);
    } else {
        for (double e : p.per_kind_request_energy) per_hop += e * p.requests;
    }
    return static_cast<double>(p.hop_count) * per_hop;
}

double total_blockchain_energy(const EnergyParams& p)
{
    const double per_app = p.security_cost + (transmission_energy(p) + ledger_update_energy(p));
    return static_cast<double>(p.app_count) * per_app;
}

void HestonParams::validate() const
{
    require_finite_nonneg(request_rate, "request_rate");
    require_finite_nonneg(excess_energy_ratio, "excess_energy_ratio");
    require_finite_nonneg(energy_stddev, "energy_stddev");
    if (!std::isfinite(request_change_rate)) throw DomainError("request_change_rate must be finite");
}

EnergyLedger::EnergyLedger(double initial, double start_time)
    : EnergyLedger(initial, initial, start_time)
{
}

EnergyLedger::EnergyLedger(double initial, double current, double start_time)
    : initial_(initial), current_(current), history_{{start_time, current}}
{
    if (!std::isfinite(initial) || !std::isfinite(current) || !std::isfinite(start_time)) {
        throw DomainError("ledger values must be finite");
    }
}

void EnergyLedger::record(double time, double joules)
{
    if (!(time > history_.back().first)) {
        throw DomainError("ledger history must be strictly increasing in time");
    }
    current_ = joules;
    history_.emplace_back(time, joules);
}

EnergyLedger heston_step(const EnergyLedger& ledger, const HestonParams& hp, double dt, double noise)
{
    hp.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
    if (!std::isfinite(noise)) throw DomainError("noise sample must be finite");

    const double drift = hp.request_rate * (ledger.current() - ledger.initial());
    const double diffusion = hp.excess_energy_ratio * std::sqrt(hp.energy_stddev) *
                             (hp.request_change_rate * noise);
    EnergyLedger next = ledger;
    next.record(ledger.time() + dt, ledger.current() + dt * (drift + diffusion));
    return next;
}

}  // namespace bciov
