#pragma once

#include <string>
#include <vector>

#include "arakelov/io.hpp"

namespace arakelov {

// One property check. `relation` is "<=" (measured must not exceed the
// threshold), ">=" (measured must reach it) or "==" (exact equality).
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation = "<=";
  bool pass = false;
};

struct VerifyOptions {
  RunConfig config;
  int genus = 0;     // rosenhain: 0 runs genus 2 and genus 3
  int trials = 0;    // rosenhain: curves per genus, 0 for 20 (genus 2) and 5 (genus 3)
  std::string curve = "xn+1:5";
  std::size_t green_pairs = 100;
  std::size_t autissier_points = 10000;
  std::size_t decomposition_tuples = 10;
};

std::vector<CheckResult> check_theta_numerics(const VerifyOptions& opts);
std::vector<CheckResult> check_genus_one(const VerifyOptions& opts);
std::vector<CheckResult> check_periods(const VerifyOptions& opts);
std::vector<CheckResult> check_deterministic_identities(const VerifyOptions& opts);
std::vector<CheckResult> check_mc_identities(const VerifyOptions& opts);
std::vector<CheckResult> check_combinatorics();
std::vector<CheckResult> check_bounds(const VerifyOptions& opts);

const std::vector<std::string>& verify_suites();
// theta, periods, identities, rosenhain, combinatorics, bounds or all.
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts);

bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace arakelov
