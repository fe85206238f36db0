#ifndef BCIOV_COMMANDS_HPP
#define BCIOV_COMMANDS_HPP

#include "bciov/analytics.hpp"
#include "bciov/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>

namespace bciov {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_validation = 2, exit_io = 3 };

struct CommandOptions {
    std::optional<std::filesystem::path> out;  // overrides the scenario's output
    std::optional<std::uint64_t> seed;
    std::optional<FormulaVariant> variant;
    double tolerance = 1e-9;
    int grid = 200;
    unsigned jobs = 0;  // 0: hardware concurrency
};

/// Applies the seed/variant overrides to the scenario's base point.
Scenario with_overrides(Scenario s, const CommandOptions& o);

/// Writes analytics.csv; rows whose synchronised radicand is infeasible are
/// flagged and the run continues.
int cmd_analytics(const Scenario& s, const CommandOptions& o, std::ostream& log);

/// Paired runs per sweep point; writes per-point run/comparison/trace CSVs,
/// the conservation-vs-lambda table and summary.txt.
int cmd_simulate(const Scenario& s, const CommandOptions& o, std::ostream& log);

/// Oracle suite; exit_validation when any check exceeds the tolerance.
int cmd_validate(const CommandOptions& o, std::ostream& log);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace bciov

#endif
