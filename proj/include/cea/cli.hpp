#pragma once
// Command dispatch for the `cea` tool. Exit status: 0 verdict true/success,
// 1 verdict false (with witness or reason), 2 input error.

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cea {

inline constexpr int kReportVersion = 1;

struct Report {
    std::string command;
    std::optional<bool> verdict;
    nlohmann::ordered_json witness;
    nlohmann::ordered_json residuals;
    nlohmann::ordered_json details;
    std::string error;
    int exit_code = 0;

    nlohmann::ordered_json to_json() const;
    std::string to_text() const;
};

struct RunOptions {
    double tol = 1e-9;
    std::uint64_t seed = 42;
    unsigned workers = 1;
};

/// Executes one command (e.g. {"ic", "decide", "doc.json"}) without printing.
Report execute(const std::vector<std::string>& command, const RunOptions& options);

/// Full command line (without argv[0]): parses flags, runs, prints the report.
/// Reads EA_SEED for the diagonalization seed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cea
