#include <filesystem>
#include <sstream>

#include "doctest.h"

#include "arakelov/commands.hpp"

using namespace arakelov;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "arakelov_test_io";
  fs::create_directories(dir);
  return dir;
}

RunConfig quick() {
  RunConfig c;
  c.samples = 4000;
  return c;
}

}  // namespace

TEST_CASE("curve and period JSON round-trip exactly") {
  const HyperellipticCurve curve = random_curve(3, 7);
  const HyperellipticCurve back = curve_from_json(curve_to_json(curve));
  CHECK(back.label() == curve.label());
  REQUIRE(back.branch_points().size() == curve.branch_points().size());
  for (std::size_t i = 0; i < curve.branch_points().size(); ++i) CHECK(back.branch_points()[i] == curve.branch_points()[i]);

  const PeriodMatrix omega = period_matrix(curve_xn_plus_one(5));
  const PeriodMatrix again = period_from_json(period_to_json(omega));
  CHECK((again.omega() - omega.omega()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, -43.140612345678901, 1e-300, 6.02214076e23}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("malformed input is rejected") {
  const auto expect_invalid = [](const std::string& text, bool curve) {
    try {
      if (curve)
        curve_from_json(text);
      else
        period_from_json(text);
      FAIL("accepted: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidInput);
    }
  };
  expect_invalid("{", true);
  expect_invalid("{\"points\": []}", true);
  expect_invalid("{\"branch_points\": [[1, 2, 3]]}", true);
  expect_invalid("{\"genus\": 2, \"omega_re\": [[0, 0]], \"omega_im\": [[1, 0], [0, 1]]}", false);
  expect_invalid("{\"genus\": 0, \"omega_re\": [], \"omega_im\": []}", false);
  CHECK_THROWS_AS(load_input("xn+1:abc"), Error);
  CHECK_THROWS_AS(load_input((scratch_dir() / "missing.json").string()), Error);

  RunConfig bad;
  bad.samples = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("atomic writes leave no temporary file") {
  const fs::path path = scratch_dir() / "out.json";
  atomic_write(path.string(), "first\n");
  atomic_write(path.string(), "second\n");
  CHECK(read_file(path.string()) == "second\n");
  for (const auto& entry : fs::directory_iterator(scratch_dir()))
    CHECK(entry.path().extension() != ".tmp");
}

TEST_CASE("report formats") {
  InvariantReport rep;
  rep.genus = 2;
  rep.entries.push_back({"H", Estimate{-0.5, 0.001, 1000, 42, 3}, "monte-carlo"});
  rep.bounds.push_back({"phi > 0", 0.25});
  const std::string csv = report_to_csv(rep);
  CHECK(csv.rfind("name,value,stderr,samples,censored,provenance\n", 0) == 0);
  CHECK(csv.find("\nH,-0.5,0.001,1000,3,monte-carlo\n") != std::string::npos);
  CHECK(csv.find("\"margin: phi > 0\",0.25") != std::string::npos);
  const std::string js = report_to_json(rep, RunConfig{});
  CHECK(js.find("\"bounds_ok\": true") != std::string::npos);
  CHECK(js.find("\"seed\": 42") != std::string::npos);
}

TEST_CASE("command exit codes") {
  std::ostringstream out, err;
  const fs::path dup = scratch_dir() / "dup.json";
  atomic_write(dup.string(), "{\"branch_points\": [[0, 0], [1, 0], [0, 0]]}");
  CHECK(cmd_periods(dup.string(), quick(), "", out, err) == kExitValidation);
  CHECK(err.str().find("DuplicateBranchPoint") != std::string::npos);

  err.str("");
  RunConfig bad = quick();
  bad.quad_order = 0;
  CHECK(cmd_periods("xn+1:5", bad, "", out, err) == kExitValidation);

  std::ostringstream a, b;
  CHECK(cmd_periods("xn+1:6", quick(), "", a, err) == kExitOk);
  CHECK(cmd_periods("xn+1:6", quick(), "", b, err) == kExitOk);
  CHECK(a.str() == b.str());

  ReportOptions opts;
  opts.monte_carlo_curve_integrals = false;
  std::ostringstream r1, r2;
  CHECK(cmd_invariants("xn+1:5", quick(), opts, "", r1, err) == kExitOk);
  CHECK(cmd_invariants("xn+1:5", quick(), opts, "", r2, err) == kExitOk);
  CHECK(r1.str() == r2.str());

  VerifyOptions v;
  v.config = quick();
  std::ostringstream vo;
  CHECK(cmd_verify("combinatorics", v, "", vo, err) == kExitOk);
  CHECK(vo.str().find("\"pass\": true") != std::string::npos);
}
