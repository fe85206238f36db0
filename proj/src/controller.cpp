#include "bciov/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bciov {

namespace {

double erf_scaled(double x, double stddev) { return std::erf(x / (std::numbers::sqrt2 * stddev)); }

// integral_0^T of scale (1 - e^{-rate t}) / rate dt.
double cumulative_decay(double scale, double rate, double T)
{
    const double x = rate * T;
    if (std::abs(x) < 1e-4) {
        // Series of (x + expm1(-x)) / rate^2 around x = 0.
        return scale * T * T * (0.5 - x / 6.0 + x * x / 24.0);
    }
    return scale * (x + std::expm1(-x)) / (rate * rate);
}

std::optional<Candidate> best_by_rating(std::span<const Candidate> pool)
{
    std::optional<Candidate> best;
    for (const auto& c : pool) {
        if (!best || c.energy_rating > best->energy_rating ||
            (c.energy_rating == best->energy_rating && c.id < best->id)) {
            best = c;
        }
    }
    return best;
}

ChDecision split_load(std::span<const Candidate> eligible, const DecisionContext& ctx,
                      DecisionRule rule, double offload)
{
    ChDecision d;
    d.rule_used = rule;
    d.offload_slot = offload;
    if (!eligible.empty()) {
        const Candidate* widest = &eligible.front();
        for (const auto& c : eligible) {
            if (c.radio_range > widest->radio_range ||
                (c.radio_range == widest->radio_range && c.id < widest->id)) {
                widest = &c;
            }
        }
        d.action = ChAction::split_by_range;
        d.load_share = widest->id;
        return d;
    }
    if (!ctx.split_data.empty()) {
        const bool any_ok = std::any_of(ctx.split_data.begin(), ctx.split_data.end(),
                                        [](const TransferShare& s) { return s.constraints_ok; });
        const TransferShare* best = nullptr;
        for (const auto& s : ctx.split_data) {
            if (any_ok && !s.constraints_ok) continue;
            if (!best || s.transfer_score > best->transfer_score ||
                (s.transfer_score == best->transfer_score && s.cluster < best->cluster)) {
                best = &s;
            }
        }
        d.action = ChAction::split_by_transfer;
        d.split_target = best->cluster;
        return d;
    }
    throw DomainError("no candidate vehicle and no split data to divide the load");
}

ChDecision change_or_split(std::span<const Candidate> qualifying, std::span<const Candidate> eligible,
                           const DecisionContext& ctx, DecisionRule rule, double offload)
{
    if (auto best = best_by_rating(qualifying)) {
        ChDecision d;
        d.action = ChAction::change;
        d.new_ch = best->id;
        d.rule_used = rule;
        d.offload_slot = offload;
        return d;
    }
    return split_load(eligible, ctx, rule, offload);
}

}  // namespace

double ost_score(const MobilityModel& m, const ConnectivityParams& c, double lambda1)
{
    m.validate();
    c.validate();
    const double span = erf_scaled(m.mean_range - m.radio_range, m.range_stddev) -
                        erf_scaled(m.mean_range, m.range_stddev);
    return -c.presence * span / 2.0 + 2.0 * lambda1;
}

double ost_threshold(const ConnectivityParams& c, const MobilityModel& m, double expected_rate)
{
    m.validate();
    c.validate();
    return c.presence * erf_scaled(m.mean_range, m.range_stddev) / 2.0 + expected_rate;
}

PreDecaySides pre_decay_sides(const PreDecayInputs& in)
{
    in.heston.validate();
    if (!(in.slot > 0.0) || !(in.slot < in.horizon)) throw DomainError("pre-decay check needs 0 < omega < tau");
    const double span = in.horizon - in.slot;
    DecayParams decay = in.decay;
    decay.horizon = span;
    const double rate = decay_rate(decay);
    const double scale = decay.initial_energy / decay.app_count;
    const double noise_term =
        in.heston.excess_energy_ratio * std::sqrt(in.heston.energy_stddev) * in.expected_request_change;

    PreDecaySides s;
    s.lhs = in.heston.request_rate * cumulative_decay(scale, rate, span) + noise_term * span;
    s.rhs = 2.0 * in.lambda1 * energy_decay(decay) +
            2.0 * in.lambda1 * in.heston.excess_energy_ratio *
                std::sqrt(decay.rate1.stddev * decay.rate2.stddev) * span;
    return s;
}

bool pre_decay_check(const PreDecayInputs& in)
{
    const PreDecaySides s = pre_decay_sides(in);
    return s.lhs < s.rhs;
}

std::string_view to_string(ChAction a)
{
    switch (a) {
    case ChAction::keep: return "keep";
    case ChAction::change: return "change";
    case ChAction::split_by_range: return "split_by_range";
    case ChAction::split_by_transfer: return "split_by_transfer";
    }
    return "?";
}

std::string_view to_string(DecisionRule r)
{
    switch (r) {
    case DecisionRule::ost: return "OST";
    case DecisionRule::lemma2_limit: return "Lemma2-limit";
    case DecisionRule::pre_decay: return "pre-decay";
    }
    return "?";
}

void ControllerConfig::validate() const
{
    if (!(slot > 0.0) || !std::isfinite(slot)) throw DomainError("slot must be > 0");
    if (!(slot <= horizon) || !std::isfinite(horizon)) throw DomainError("slot must not exceed the horizon");
    if (!std::isfinite(expected_rate)) throw DomainError("expected_rate must be finite");
}

ChDecision decide(const OstObservation& obs, const ControllerConfig& cfg,
                  std::span<const Candidate> candidates, const DecisionContext& ctx)
{
    if (!std::isfinite(obs.observed) || !std::isfinite(obs.expected)) {
        throw DomainError("observation scores must be finite");
    }
    if (obs.upper_tx_limit && !(*obs.upper_tx_limit >= 0.0)) {
        throw DomainError("upper transaction limit must be >= 0");
    }
    const double offload = std::max(0.0, obs.time - cfg.slot);

    std::vector<Candidate> eligible;
    for (const auto& c : candidates) {
        if (!c.critical) eligible.push_back(c);
    }

    if (cfg.heston_variance_negligible && obs.observed < obs.expected) {
        return change_or_split(eligible, eligible, ctx, DecisionRule::ost, offload);
    }

    if (obs.upper_tx_limit) {
        if (*obs.upper_tx_limit < obs.required_tx) {
            std::vector<Candidate> qualifying;
            for (const auto& c : eligible) {
                if (c.tx_limit >= obs.required_tx && cfg.connect_range <= c.radio_range) {
                    qualifying.push_back(c);
                }
            }
            return change_or_split(qualifying, eligible, ctx, DecisionRule::lemma2_limit, offload);
        }
        ChDecision keep;
        keep.rule_used = DecisionRule::lemma2_limit;
        keep.offload_slot = offload;
        return keep;
    }

    // Neither rule is decisive: fall back to the pre-energy-decay comparison.
    if (ctx.pre_decay && pre_decay_check(*ctx.pre_decay)) {
        return change_or_split(eligible, eligible, ctx, DecisionRule::pre_decay, offload);
    }
    ChDecision keep;
    keep.rule_used = DecisionRule::pre_decay;
    keep.offload_slot = offload;
    return keep;
}

ClusterController::ClusterController(ControllerConfig cfg, std::vector<VehicleId> initial_heads)
    : cfg_(cfg), heads_(std::move(initial_heads))
{
    cfg_.validate();
}

std::vector<TraceRow> ClusterController::step(double t, std::span<const ClusterView> views)
{
    std::vector<const ClusterView*> ordered;
    ordered.reserve(views.size());
    for (const auto& v : views) ordered.push_back(&v);
    std::sort(ordered.begin(), ordered.end(),
              [](const ClusterView* a, const ClusterView* b) { return a->cluster < b->cluster; });

    std::vector<TraceRow> rows;
    rows.reserve(ordered.size());
    for (const ClusterView* v : ordered) {
        OstObservation obs = v->observation;
        obs.time = t;
        DecisionContext ctx{v->pre_decay, v->split_data};
        const ChDecision d = decide(obs, cfg_, v->candidates, ctx);

        TraceRow row;
        row.slot = t;
        row.cluster = v->cluster;
        row.rule_used = d.rule_used;
        row.action = d.action;
        row.old_ch = heads_.at(v->cluster);
        row.load_share = d.load_share;
        row.split_target = d.split_target;
        if (d.action == ChAction::change) {
            row.new_ch = d.new_ch;
            row.offload_slot = d.offload_slot;
            heads_.at(v->cluster) = *d.new_ch;
        }
        rows.push_back(row);
    }
    return rows;
}

std::int64_t slot_count(double slot, double horizon)
{
    if (!(slot > 0.0) || !(horizon >= slot)) throw DomainError("need 0 < slot <= horizon");
    return static_cast<std::int64_t>(std::floor(horizon / slot + 1e-9));
}

std::vector<TraceRow> run_controller(const ObservationSource& source, const ControllerConfig& cfg,
                                     std::vector<VehicleId> initial_heads)
{
    ClusterController controller(cfg, std::move(initial_heads));
    std::vector<TraceRow> trace;
    const std::int64_t n = slot_count(cfg.slot, cfg.horizon);
    for (std::int64_t s = 1; s <= n; ++s) {
        const double t = static_cast<double>(s) * cfg.slot;
        const std::vector<ClusterView> views = source(t, controller.heads());
        auto rows = controller.step(t, views);
        trace.insert(trace.end(), rows.begin(), rows.end());
    }
    return trace;
}

}  // namespace bciov
