#include "bciov/csv.hpp"

#include "bciov/energy_model.hpp"

#include <charconv>
#include <cmath>

namespace bciov {

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string format_number(std::int64_t v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size()) throw DomainError("csv row width does not match the header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const
{
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cells[i]);
        }
        out += "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

namespace {

std::vector<std::string> run_cells(const SlotRow& row, Regime regime)
{
    return {format_number(row.t),
            std::string(to_string(regime)),
            format_number(row.transactions_cum),
            format_number(row.energy_cum),
            format_number(row.ch_changes_cum),
            format_number(row.offloads_cum)};
}

template <class T>
std::string optional_cell(const std::optional<T>& v)
{
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>) {
        return format_number(*v);
    } else {
        return format_number(static_cast<std::int64_t>(*v));
    }
}

}  // namespace

CsvTable run_table(const RunReport& report)
{
    CsvTable t({"t", "regime", "transactions_cum", "energy_cum_J", "ch_changes", "offloads"});
    for (const auto& row : report.rows) t.add_row(run_cells(row, report.regime));
    return t;
}

CsvTable comparison_table(const ComparisonReport& report)
{
    CsvTable t({"t", "regime", "transactions_cum", "energy_cum_J", "ch_changes", "offloads", "tx_reduction_pct",
                "energy_conservation_pct"});
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        auto cells = run_cells(report.candidate.rows.at(i), report.candidate.regime);
        cells.push_back(format_number(report.rows[i].tx_reduction_pct));
        cells.push_back(format_number(report.rows[i].energy_conservation_pct));
        t.add_row(std::move(cells));
    }
    return t;
}

CsvTable trace_table(const std::vector<TraceRow>& trace)
{
    CsvTable t({"t", "cluster", "rule", "action", "old_ch", "new_ch", "offload_t", "load_share", "split_target"});
    for (const auto& r : trace) {
        t.add_row({format_number(r.slot), format_number(static_cast<std::int64_t>(r.cluster)),
                   std::string(to_string(r.rule_used)), std::string(to_string(r.action)),
                   format_number(static_cast<std::int64_t>(r.old_ch)), optional_cell(r.new_ch),
                   optional_cell(r.offload_slot), optional_cell(r.load_share), optional_cell(r.split_target)});
    }
    return t;
}

}  // namespace bciov
