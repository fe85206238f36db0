#include "bciov/commands.hpp"

#include "bciov/csv.hpp"
#include "bciov/energy_model.hpp"
#include "bciov/oracles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

namespace bciov {

namespace {

namespace fs = std::filesystem;

std::string fixed(double v, int digits = 2)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return {buf, res.ptr};
}

fs::path output_dir(const Scenario& s, const CommandOptions& o)
{
    const fs::path dir = o.out.value_or(fs::path(s.output));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

double relative_error(double value, double reference)
{
    const double diff = std::abs(value - reference);
    return reference == 0.0 ? diff : diff / std::abs(reference);
}

std::vector<std::string> analytics_row(std::size_t index, const ScenarioPoint& p)
{
    std::vector<std::string> row{format_number(static_cast<std::int64_t>(index)), format_number(p.sim.horizon),
                                 format_number(p.sim.lambda), format_number(p.sim.lambda1),
                                 format_number(p.sim.lambda2)};
    const DecayParams d = decay_params(p);
    try {
        const double closed = energy_decay(d);
        const double ref = oracle::energy_decay(d);
        row.insert(row.end(), {"ok", format_number(closed), format_number(ref), format_number(relative_error(closed, ref))});
    } catch (const DomainError& e) {
        row.insert(row.end(), {e.what(), "", "", ""});
    }

    const double f1 = p.analytics.sync_frequency.value_or(d.rate1.frequency);
    try {
        const double derived = energy_decay_synchronized(d, p.sim.lambda1, f1, SyncVariant::as_derived);
        const double printed = energy_decay_synchronized(d, p.sim.lambda1, f1, SyncVariant::as_printed);
        const double ref = oracle::energy_decay_synchronized(d, p.sim.lambda1, f1);
        row.insert(row.end(), {"ok", format_number(derived), format_number(printed), format_number(ref),
                               format_number(relative_error(derived, ref))});
    } catch (const DomainError& e) {
        row.insert(row.end(), {e.what(), "", "", "", ""});
    }

    TxCountParams t = tx_params(p);
    t.formula_variant = FormulaVariant::as_derived;
    const double load_derived = transaction_load(t);
    const std::int64_t count_derived = transaction_count(t);
    const auto oracle_derived = static_cast<std::int64_t>(std::max(0.0, std::ceil(oracle::transaction_load(t))));
    t.formula_variant = FormulaVariant::as_printed;
    const std::int64_t count_printed = transaction_count(t);
    const auto oracle_printed = static_cast<std::int64_t>(std::max(0.0, std::ceil(oracle::transaction_load(t))));
    const std::int64_t selected =
        p.sim.formula_variant == FormulaVariant::as_derived ? count_derived : count_printed;
    row.insert(row.end(), {std::string(to_string(p.sim.formula_variant)), format_number(selected),
                           format_number(load_derived), format_number(count_derived),
                           format_number(oracle_derived), format_number(count_printed),
                           format_number(oracle_printed), count_derived != count_printed ? "yes" : "no"});
    return row;
}

struct PointResult {
    ScenarioPoint point;
    ComparisonReport report;
};

std::vector<PointResult> run_points(const Scenario& s, unsigned jobs)
{
    const std::size_t n = s.point_count();
    std::vector<PointResult> results(n);
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    // Each point owns its full state; results land in index order regardless of
    // completion order.
    for (std::size_t start = 0; start < n; start += jobs) {
        std::vector<std::future<void>> batch;
        for (std::size_t i = start; i < std::min(n, start + jobs); ++i) {
            batch.push_back(std::async(std::launch::async, [&s, &results, i] {
                results[i].point = s.point(i);
                results[i].report = paired_comparison(results[i].point.sim);
            }));
        }
        for (auto& f : batch) f.get();
    }
    return results;
}

}  // namespace

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

Scenario with_overrides(Scenario s, const CommandOptions& o)
{
    if (o.seed) s.base.sim.seed = *o.seed;
    if (o.variant) s.base.sim.formula_variant = *o.variant;
    return s;
}

int cmd_analytics(const Scenario& s, const CommandOptions& o, std::ostream& log)
{
    CsvTable table({"sweep_index", "tau", "lambda", "lambda1", "lambda2", "decay_status", "energy_decay",
                    "energy_decay_oracle", "energy_decay_rel_err", "sync_status", "sync_as_derived",
                    "sync_as_printed", "sync_oracle", "sync_rel_err", "variant", "transaction_count",
                    "tx_load_as_derived", "tx_count_as_derived", "tx_count_as_derived_oracle",
                    "tx_count_as_printed", "tx_count_as_printed_oracle", "variants_differ"});
    int infeasible = 0;
    for (std::size_t i = 0; i < s.point_count(); ++i) {
        auto row = analytics_row(i, s.point(i));
        if (row[5] != "ok" || row[9] != "ok") ++infeasible;
        table.add_row(std::move(row));
    }
    const fs::path path = output_dir(s, o) / "analytics.csv";
    write_file(path, table.str());
    log << "analytics: " << table.rows() << " row(s) -> " << path.string();
    if (infeasible > 0) log << " (" << infeasible << " row(s) with infeasible inputs)";
    log << '\n';
    return exit_ok;
}

int cmd_simulate(const Scenario& s, const CommandOptions& o, std::ostream& log)
{
    const std::vector<PointResult> results = run_points(s, o.jobs);
    const fs::path dir = output_dir(s, o);

    CsvTable fig4({"sweep_index", "lambda", "lambda1", "lambda2", "tx_reduction_pct", "energy_conservation_pct"});
    std::ostringstream summary;
    summary << "scenario: " << s.name << "\n";
    summary << "points: " << results.size() << "\n";
    double tx_sum = 0.0;
    double energy_sum = 0.0;
    bool increasing = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const std::string k = std::to_string(i);

        CsvTable fig3 = run_table(r.report.reference);
        for (const auto& row : r.report.candidate.rows) {
            fig3.add_row({format_number(row.t), std::string(to_string(r.report.candidate.regime)),
                          format_number(row.transactions_cum), format_number(row.energy_cum),
                          format_number(row.ch_changes_cum), format_number(row.offloads_cum)});
        }
        write_file(dir / ("fig3_point" + k + ".csv"), fig3.str());
        write_file(dir / ("comparison_point" + k + ".csv"), comparison_table(r.report).str());
        write_file(dir / ("trace_point" + k + ".csv"), trace_table(r.report.candidate.trace).str());

        fig4.add_row({k, format_number(r.point.sim.lambda), format_number(r.point.sim.lambda1),
                      format_number(r.point.sim.lambda2), format_number(r.report.tx_reduction_pct),
                      format_number(r.report.energy_conservation_pct)});
        tx_sum += r.report.tx_reduction_pct;
        energy_sum += r.report.energy_conservation_pct;
        if (i > 0 && !(r.report.energy_conservation_pct > results[i - 1].report.energy_conservation_pct)) {
            increasing = false;
        }
        summary << "point " << k << ": lambda=" << format_number(r.point.sim.lambda)
                << " tx_reduction_pct=" << fixed(r.report.tx_reduction_pct)
                << " energy_conservation_pct=" << fixed(r.report.energy_conservation_pct)
                << " baseline_tx=" << r.report.reference.total_transactions()
                << " clustered_tx=" << r.report.candidate.total_transactions()
                << " ch_changes=" << r.report.candidate.total_ch_changes() << "\n";
    }
    write_file(dir / "fig4_energy_conservation.csv", fig4.str());

    const double n = static_cast<double>(results.size());
    summary << "average tx_reduction_pct: " << fixed(tx_sum / n) << "\n";
    summary << "average energy_conservation_pct: " << fixed(energy_sum / n) << "\n";
    summary << "energy conservation increasing across points: " << (increasing ? "yes" : "no") << "\n";
    summary << "baseline assumptions:\n";
    for (const auto& line : baseline_assumptions(results.front().point.sim)) summary << "  - " << line << "\n";
    write_file(dir / "summary.txt", summary.str());

    log << summary.str();
    log << "simulate: " << results.size() << " point(s) -> " << dir.string() << "\n";
    return exit_ok;
}

int cmd_validate(const CommandOptions& o, std::ostream& log)
{
    oracle::SuiteOptions so;
    so.grid = o.grid;
    so.tolerance = o.tolerance;
    if (so.grid < 1) throw ConfigError("grid must be >= 1");
    if (!(so.tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
    int failed = 0;
    for (const auto& r : oracle::run_suite(so)) {
        log << (r.passed() ? "PASS " : "FAIL ") << r.name << ": cases=" << r.cases << " failures=" << r.failures
            << " worst=" << format_number(r.worst) << " time=" << fixed(r.seconds, 3) << "s\n";
        for (const auto& note : r.notes) log << "     " << note << "\n";
        if (!r.passed()) ++failed;
    }
    log << (failed == 0 ? "validate: all checks passed\n" : "validate: " + std::to_string(failed) + " check(s) failed\n");
    return failed == 0 ? exit_ok : exit_validation;
}

}  // namespace bciov
