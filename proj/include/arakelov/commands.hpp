#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "arakelov/verify.hpp"

namespace arakelov {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // failed verification or table comparison
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAllCensored = 3;
inline constexpr int kExitNegativeMargin = 4;

struct Table1Row {
  int n = 0;
  int genus = 0;
  double log_delta = 0.0;
  Estimate H, delta, phi;
  // Published values and the tolerances they are compared at.
  double ref_log_delta, ref_H, ref_delta, ref_phi;
  double tol_log_delta, tol_H, tol_delta, tol_phi;

  bool pass() const;
};

// Rows n = 5..8 of y^2 = x^n + 1.
std::vector<Table1Row> table1_rows(const RunConfig& config, const std::vector<int>& ns = {5, 6, 7, 8});
std::string table1_csv(const std::vector<Table1Row>& rows);

// Each command writes its document to `out_path` (atomically) or to `out`
// when the path is empty, diagnostics to `err`, and returns the exit code.
int cmd_periods(const std::string& input, const RunConfig& config, const std::string& out_path, std::ostream& out,
                std::ostream& err);
int cmd_invariants(const std::string& input, const RunConfig& config, const ReportOptions& options,
                   const std::string& out_path, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& suite, const VerifyOptions& options, const std::string& out_path, std::ostream& out,
               std::ostream& err);
int cmd_table1(const RunConfig& config, const std::string& out_path, std::ostream& out, std::ostream& err);

}  // namespace arakelov
