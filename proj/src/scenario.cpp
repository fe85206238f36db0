#include "bciov/scenario.hpp"

#include "bciov/energy_model.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bciov {

namespace {

using json = nlohmann::json;

int as_int(const std::string& key, double v)
{
    if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e9) {
        throw ConfigError(key + " must be an integer");
    }
    return static_cast<int>(v);
}

using Setter = std::function<void(ScenarioPoint&, const std::string&, double)>;

Setter real(double SimConfig::*field)
{
    return [field](ScenarioPoint& p, const std::string&, double v) { p.sim.*field = v; };
}

Setter real_opt(std::optional<double> SimConfig::*field)
{
    return [field](ScenarioPoint& p, const std::string&, double v) { p.sim.*field = v; };
}

Setter integer(int SimConfig::*field)
{
    return [field](ScenarioPoint& p, const std::string& k, double v) { p.sim.*field = as_int(k, v); };
}

Setter analytic(double AnalyticsInputs::*field)
{
    return [field](ScenarioPoint& p, const std::string&, double v) { p.analytics.*field = v; };
}

const std::map<std::string, Setter>& numeric_params()
{
    static const std::map<std::string, Setter> table = {
        {"cluster_count", integer(&SimConfig::cluster_count)},
        {"vehicles_per_cluster", integer(&SimConfig::vehicles_per_cluster)},
        {"app_count", integer(&SimConfig::app_count)},
        {"lambda", real(&SimConfig::lambda)},
        {"lambda1", real(&SimConfig::lambda1)},
        {"lambda2", real(&SimConfig::lambda2)},
        {"requests", real_opt(&SimConfig::requests)},
        {"message_kinds", integer(&SimConfig::message_kinds)},
        {"hop_count", integer(&SimConfig::hop_count)},
        {"records_per_tx", integer(&SimConfig::records_per_tx)},
        {"per_record_energy", real(&SimConfig::per_record_energy)},
        {"per_request_energy", real(&SimConfig::per_request_energy)},
        {"security_cost", real(&SimConfig::security_cost)},
        {"excess_ratio", real(&SimConfig::excess_ratio)},
        {"energy_stddev", real(&SimConfig::energy_stddev)},
        {"request_change_rate", real(&SimConfig::request_change_rate)},
        {"horizon", real(&SimConfig::horizon)},
        {"slot", real(&SimConfig::slot)},
        {"connect_range", real(&SimConfig::connect_range)},
        {"mean_range", real(&SimConfig::mean_range)},
        {"radio_range", real(&SimConfig::radio_range)},
        {"range_stddev", real_opt(&SimConfig::range_stddev)},
        {"radio_range_jitter", real(&SimConfig::radio_range_jitter)},
        {"presence", real(&SimConfig::presence)},
        {"receiver_presence", real(&SimConfig::receiver_presence)},
        {"threshold_probability", real(&SimConfig::threshold_probability)},
        {"links_per_ledger", integer(&SimConfig::links_per_ledger)},
        {"parallel_links", integer(&SimConfig::parallel_links)},
        {"stay_time", real(&SimConfig::stay_time)},
        {"global_exchange_every",
         [](ScenarioPoint& p, const std::string& k, double v) { p.sim.global_exchange_every = as_int(k, v); }},
        {"initial_energy", real(&SimConfig::initial_energy)},
        {"critical_fraction", real(&SimConfig::critical_fraction)},
        {"expected_rate", real_opt(&SimConfig::expected_rate)},
        {"idealistic_score", real_opt(&SimConfig::idealistic_score)},
        {"heston_variance_negligible",
         [](ScenarioPoint& p, const std::string&, double v) { p.sim.heston_variance_negligible = v != 0.0; }},
        {"seed",
         [](ScenarioPoint& p, const std::string& k, double v) {
             if (!(v >= 0.0) || v != std::floor(v) || v > 9007199254740992.0) {
                 throw ConfigError(k + " must be a non-negative integer");
             }
             p.sim.seed = static_cast<std::uint64_t>(v);
         }},
        {"rate1_mean", analytic(&AnalyticsInputs::rate1_mean)},
        {"rate1_stddev", analytic(&AnalyticsInputs::rate1_stddev)},
        {"rate2_mean", analytic(&AnalyticsInputs::rate2_mean)},
        {"rate2_stddev", analytic(&AnalyticsInputs::rate2_stddev)},
        {"sync_frequency",
         [](ScenarioPoint& p, const std::string&, double v) { p.analytics.sync_frequency = v; }},
    };
    return table;
}

std::vector<double> axis_values(const json& axis, const std::string& name)
{
    std::vector<double> values;
    if (axis.contains("values")) {
        if (!axis["values"].is_array() || axis["values"].empty()) {
            throw ConfigError("sweep '" + name + "' values must be a non-empty array");
        }
        for (const auto& v : axis["values"]) {
            if (!v.is_number()) throw ConfigError("sweep '" + name + "' values must be numbers");
            values.push_back(v.get<double>());
        }
        return values;
    }
    if (!axis.contains("from") || !axis.contains("to") || !axis.contains("step")) {
        throw ConfigError("sweep '" + name + "' needs values or from/to/step");
    }
    const double from = axis["from"].get<double>();
    const double to = axis["to"].get<double>();
    const double step = axis["step"].get<double>();
    if (!(step > 0.0) || !(to >= from)) throw ConfigError("sweep '" + name + "' needs step > 0 and to >= from");
    const auto n = static_cast<std::int64_t>(std::floor((to - from) / step + 1e-9));
    if (n > 1'000'000) throw ConfigError("sweep '" + name + "' is too long");
    // from + i*step rather than repeated addition, so 10..100 step 10 hits 100 exactly.
    for (std::int64_t i = 0; i <= n; ++i) values.push_back(from + static_cast<double>(i) * step);
    return values;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

}  // namespace

void set_param(ScenarioPoint& point, const std::string& key, double value)
{
    const auto& table = numeric_params();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown parameter '" + key + "'");
    if (!std::isfinite(value)) throw ConfigError("parameter '" + key + "' must be finite");
    it->second(point, key, value);
}

void set_text_param(ScenarioPoint& point, const std::string& key, const std::string& value)
{
    try {
        if (key == "regime") {
            point.sim.regime = parse_regime(value);
        } else if (key == "accounting") {
            point.sim.accounting = parse_tx_accounting(value);
        } else if (key == "security") {
            point.sim.security = parse_security_charging(value);
        } else if (key == "formula_variant") {
            point.sim.formula_variant = parse_formula_variant(value);
        } else {
            throw ConfigError("unknown or non-text parameter '" + key + "'");
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

std::size_t Scenario::point_count() const { return sweeps.empty() ? 1 : sweeps.front().values.size(); }

ScenarioPoint Scenario::point(std::size_t index) const
{
    if (index >= point_count()) throw ConfigError("sweep index out of range");
    ScenarioPoint p = base;
    for (const auto& axis : sweeps) set_param(p, axis.name, axis.values[index]);
    return p;
}

Scenario parse_scenario(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
    check_keys(doc, {"name", "params", "sweeps", "output"}, "scenario");

    Scenario s;
    try {
        if (doc.contains("name")) s.name = doc["name"].get<std::string>();
        if (doc.contains("output")) s.output = doc["output"].get<std::string>();
        if (doc.contains("params")) {
            if (!doc["params"].is_object()) throw ConfigError("params must be an object");
            for (const auto& [key, value] : doc["params"].items()) {
                if (value.is_string()) {
                    set_text_param(s.base, key, value.get<std::string>());
                } else if (value.is_boolean()) {
                    set_param(s.base, key, value.get<bool>() ? 1.0 : 0.0);
                } else if (value.is_number()) {
                    set_param(s.base, key, value.get<double>());
                } else {
                    throw ConfigError("parameter '" + key + "' has an unsupported type");
                }
            }
        }
        if (doc.contains("sweeps")) {
            if (!doc["sweeps"].is_array()) throw ConfigError("sweeps must be an array");
            for (const auto& axis : doc["sweeps"]) {
                if (!axis.is_object() || !axis.contains("name")) throw ConfigError("each sweep needs a name");
                check_keys(axis, {"name", "values", "from", "to", "step"}, "sweep");
                SweepAxis a;
                a.name = axis["name"].get<std::string>();
                if (!numeric_params().count(a.name)) throw ConfigError("sweep over unknown parameter '" + a.name + "'");
                a.values = axis_values(axis, a.name);
                if (!s.sweeps.empty() && a.values.size() != s.sweeps.front().values.size()) {
                    throw ConfigError("zipped sweep axes must have equal length");
                }
                s.sweeps.push_back(std::move(a));
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario field has the wrong type: ") + e.what());
    }

    for (std::size_t i = 0; i < s.point_count(); ++i) {
        try {
            s.point(i).sim.validate();
        } catch (const DomainError& e) {
            std::ostringstream os;
            os << "sweep point " << i << ": " << e.what();
            throw ConfigError(os.str());
        }
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

DecayParams decay_params(const ScenarioPoint& p)
{
    DecayParams d;
    const auto& a = p.analytics;
    d.rate1 = GaussianRate::at_rate(a.rate1_mean, a.rate1_stddev, p.sim.lambda1);
    d.rate2 = GaussianRate::at_rate(a.rate2_mean, a.rate2_stddev, p.sim.lambda2);
    d.initial_energy = p.sim.initial_energy;
    d.app_count = p.sim.app_count;
    d.horizon = p.sim.horizon;
    return d;
}

TxCountParams tx_params(const ScenarioPoint& p)
{
    const SimConfig& c = p.sim;
    TxCountParams t;
    t.cluster_count = c.cluster_count;
    t.links_per_ledger = c.effective_links();
    t.request_rate = c.lambda;
    t.presence = c.presence;
    t.horizon = c.horizon;
    t.parallel_links = c.parallel_links;
    t.mean_range = c.mean_range;
    t.radio_range = c.radio_range;
    t.range_stddev = c.effective_range_stddev();
    t.formula_variant = c.formula_variant;
    return t;
}

}  // namespace bciov
