#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spotsim::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kIncomplete = 2;
inline constexpr int kInfeasible = 3;

// Column order of every simulate/sweep data row.
inline constexpr const char* kReportHeader =
    "trace,scheme,bid,completion_time_s,total_cost_usd,product_usd_h,completed,checkpoints,work_lost_s";

// Entry point shared by the executable and the tests. Anything the user asked
// for goes to `out` (unless --out redirects it); diagnostics go to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spotsim::cli
