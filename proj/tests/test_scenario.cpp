#include "bciov/commands.hpp"
#include "bciov/csv.hpp"
#include "bciov/scenario.hpp"

#include <doctest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bciov;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("bciov_unit_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("flat params and zipped sweeps")
{
    const Scenario s = parse_scenario(R"({
        "name": "t",
        "params": {"cluster_count": 3, "accounting": "ledger-shift", "heston_variance_negligible": false,
                   "range_stddev": 150, "global_exchange_every": 2},
        "sweeps": [{"name": "lambda", "values": [1, 2]}, {"name": "lambda1", "values": [0.5, 1.5]}],
        "output": "somewhere"
    })");
    CHECK(s.name == "t");
    CHECK(s.output == "somewhere");
    CHECK(s.point_count() == 2);
    const ScenarioPoint p = s.point(1);
    CHECK(p.sim.cluster_count == 3);
    CHECK(p.sim.lambda == 2.0);
    CHECK(p.sim.lambda1 == 1.5);
    CHECK(p.sim.accounting == TxAccounting::ledger_shift);
    CHECK_FALSE(p.sim.heston_variance_negligible);
    CHECK(p.sim.effective_range_stddev() == 150.0);
    CHECK(p.sim.exchange_every() == 2);
    CHECK_THROWS_AS(static_cast<void>(s.point(2)), ConfigError);
}

TEST_CASE("range sweeps include the end point")
{
    const Scenario s = parse_scenario(R"({"sweeps": [{"name": "horizon", "from": 10, "to": 100, "step": 10}]})");
    REQUIRE(s.point_count() == 10);
    CHECK(s.point(9).sim.horizon == 100.0);
    CHECK(parse_scenario("{}").point_count() == 1);
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(parse_scenario("not json"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[]"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"params": {"lamda": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"extra": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"params": {"cluster_count": 2.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"params": {"cluster_count": "five"}})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"params": {"regime": "mesh"}})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"params": {"slot": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"sweeps": [{"name": "nope", "values": [1]}]})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"sweeps": [{"name": "lambda", "values": [1, 2]},
                                                  {"name": "lambda1", "values": [1]}]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"sweeps": [{"name": "lambda", "values": [1, -2]}]})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"sweeps": [{"name": "lambda", "from": 1, "to": 0, "step": 1}]})"),
                    ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("shipped scenarios parse")
{
    for (const char* name : {"reference_fleet.json", "horizon_sweep.json", "per_message_fleet.json"}) {
        CHECK_NOTHROW(load_scenario(fs::path(BCIOV_SCENARIO_DIR) / name));
    }
    const Scenario ref = load_scenario(fs::path(BCIOV_SCENARIO_DIR) / "reference_fleet.json");
    CHECK(ref.point_count() == 4);
    CHECK(ref.point(0).sim.fleet_size() == 50);
}

TEST_CASE("numbers are locale independent and round-trip")
{
    const char* previous = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = previous ? previous : "C";
    std::setlocale(LC_NUMERIC, "de_DE.UTF-8");  // may be unavailable; the check holds either way
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2580.625) == "2580.625");
    CHECK(format_number(static_cast<std::int64_t>(-42)) == "-42");
    CHECK(format_number(0.0) == "0");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("csv quoting and fixed column order")
{
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");

    CsvTable t({"a", "b"});
    t.add_row({"1", "x,y"});
    CHECK(t.str() == "a,b\r\n1,\"x,y\"\r\n");
    CHECK_THROWS(t.add_row({"1"}));

    SimConfig c;
    c.horizon = 3.0;
    const ComparisonReport r = paired_comparison(c);
    CHECK(lines(run_table(r.reference).str())[0] == "t,regime,transactions_cum,energy_cum_J,ch_changes,offloads");
    CHECK(lines(comparison_table(r).str())[0] ==
          "t,regime,transactions_cum,energy_cum_J,ch_changes,offloads,tx_reduction_pct,energy_conservation_pct");
    CHECK(lines(comparison_table(r).str()).size() == 4);
}

TEST_CASE("analytics command rows")
{
    Scenario single = parse_scenario("{}");
    CommandOptions o;
    o.out = scratch("analytics_single");
    std::ostringstream log;
    CHECK(cmd_analytics(single, o, log) == exit_ok);
    CHECK(lines(slurp(*o.out / "analytics.csv")).size() == 2);

    const Scenario tau = load_scenario(fs::path(BCIOV_SCENARIO_DIR) / "horizon_sweep.json");
    o.out = scratch("analytics_tau");
    CHECK(cmd_analytics(tau, o, log) == exit_ok);
    const auto rows = lines(slurp(*o.out / "analytics.csv"));
    REQUIRE(rows.size() == 11);
    const auto header = split(rows[0]);
    const auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
    };
    long long prev = -1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto cells = split(rows[i]);
        const long long count = std::stoll(cells[col("transaction_count")]);
        CHECK(count >= prev);
        prev = count;
        CHECK(cells[col("tx_count_as_derived")] == cells[col("tx_count_as_derived_oracle")]);
        CHECK(cells[col("variants_differ")] == "yes");
        CHECK(cells[col("sync_status")] == "ok");
        CHECK(std::stod(cells[col("energy_decay_rel_err")]) <= 1e-9);
    }
}

TEST_CASE("infeasible synchronised rows are reported and the run continues")
{
    const Scenario s = parse_scenario(R"({"params": {"rate2_stddev": 1.0},
                                          "sweeps": [{"name": "lambda1", "values": [0.5, 1.0]}]})");
    CommandOptions o;
    o.out = scratch("analytics_infeasible");
    std::ostringstream log;
    CHECK(cmd_analytics(s, o, log) == exit_ok);
    const auto rows = lines(slurp(*o.out / "analytics.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].find("synchronization assumption infeasible") != std::string::npos);
    CHECK(log.str().find("infeasible") != std::string::npos);
}

TEST_CASE("simulate writes per-point files and a four-row conservation table")
{
    Scenario s = parse_scenario(R"({"params": {"horizon": 10},
                                    "sweeps": [{"name": "lambda", "values": [2, 3, 4, 5]}]})");
    CommandOptions o;
    o.out = scratch("simulate");
    std::ostringstream log;
    CHECK(cmd_simulate(s, o, log) == exit_ok);
    CHECK(lines(slurp(*o.out / "fig4_energy_conservation.csv")).size() == 5);
    for (int k = 0; k < 4; ++k) {
        const std::string i = std::to_string(k);
        CHECK(fs::exists(*o.out / ("fig3_point" + i + ".csv")));
        CHECK(lines(slurp(*o.out / ("fig3_point" + i + ".csv"))).size() == 21);
        CHECK(fs::exists(*o.out / ("comparison_point" + i + ".csv")));
        CHECK(fs::exists(*o.out / ("trace_point" + i + ".csv")));
    }
    const std::string summary = slurp(*o.out / "summary.txt");
    CHECK(summary.find("average tx_reduction_pct") != std::string::npos);
    CHECK(summary.find("baseline assumptions") != std::string::npos);

    const std::string first = slurp(*o.out / "comparison_point2.csv");
    o.jobs = 1;
    CHECK(cmd_simulate(s, o, log) == exit_ok);
    CHECK(slurp(*o.out / "comparison_point2.csv") == first);
}

TEST_CASE("overrides and validation exit codes")
{
    CommandOptions o;
    o.seed = 99;
    o.variant = FormulaVariant::as_printed;
    const Scenario s = with_overrides(parse_scenario("{}"), o);
    CHECK(s.base.sim.seed == 99);
    CHECK(s.base.sim.formula_variant == FormulaVariant::as_printed);

    std::ostringstream log;
    o.grid = 10;
    CHECK(cmd_validate(o, log) == exit_ok);
    o.tolerance = 0.0;
    CHECK(cmd_validate(o, log) == exit_validation);
    o.grid = 0;
    CHECK_THROWS_AS(cmd_validate(o, log), ConfigError);
}

TEST_CASE("unwritable output is an i/o error")
{
    CommandOptions o;
    o.out = "/proc/bciov_cannot_write";
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_analytics(parse_scenario("{}"), o, log), IoError);
}

}
