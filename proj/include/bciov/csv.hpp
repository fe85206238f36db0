#ifndef BCIOV_CSV_HPP
#define BCIOV_CSV_HPP

#include "bciov/sim.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bciov {

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double v);
std::string format_number(std::int64_t v);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view s);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    [[nodiscard]] std::string str() const;
    [[nodiscard]] std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// t, regime, transactions_cum, energy_cum_J, ch_changes, offloads
CsvTable run_table(const RunReport& report);
/// Candidate rows with tx_reduction_pct and energy_conservation_pct appended.
CsvTable comparison_table(const ComparisonReport& report);
CsvTable trace_table(const std::vector<TraceRow>& trace);

}  // namespace bciov

#endif
