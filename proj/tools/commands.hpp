#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "run_config.hpp"

namespace bubblegap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitConfigError = 64;

// Cells are numbers, strings or null (written as an empty CSV field).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
};

struct CommandResult {
    int exit_code = kExitOk;
    Table table;
    nlohmann::json summary = nlohmann::json::object();
    std::string message;  // printed to stdout
};

CommandResult cmd_band(const RunConfig& rc);
CommandResult cmd_defect_band(const RunConfig& rc);
CommandResult cmd_eps0(const RunConfig& rc);
CommandResult cmd_validate(const RunConfig& rc);
CommandResult cmd_validate_greens(const RunConfig& rc);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_validation_checks(const CrystalConfig& config);
// Per test point cross-method discrepancies of the lattice Green's function.
Table greens_discrepancy_table(const CrystalConfig& config);

std::string to_csv(const Table& table);
nlohmann::json to_json(const std::string& command, const CommandResult& result);
std::string format_number(double v);

// Full command line entry point; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bubblegap::cli
