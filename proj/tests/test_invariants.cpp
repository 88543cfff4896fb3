#include <cmath>

#include "doctest.h"

#include "arakelov/invariants.hpp"

using namespace arakelov;

namespace {

IntegrationConfig mc(std::size_t samples, std::uint64_t seed) {
  IntegrationConfig c;
  c.samples = samples;
  c.seed = seed;
  return c;
}

PeriodMatrix tau_matrix(cplx tau) {
  CMat m(1, 1);
  m(0, 0) = tau;
  return PeriodMatrix(m);
}

const double kLog2Pi = std::log(2.0 * kPi);

double within(const Estimate& e, double target) { return std::abs(e.value - target) / e.std_error; }

}  // namespace

TEST_CASE("H at tau = i is log |eta(i)|") {
  const double log_eta_i = std::log(std::tgamma(0.25) / (2.0 * std::pow(kPi, 0.75)));
  const Estimate H = H_invariant(tau_matrix(cplx(0, 1)), mc(100000, 1));
  CHECK(log_eta_i == doctest::Approx(-0.26367).epsilon(1e-4));
  CHECK(within(H, log_eta_i) < 3.0);
}

TEST_CASE("genus one delta is modular invariant") {
  const cplx tau(-0.2, 0.9);
  const Estimate a = H_invariant(tau_matrix(tau), mc(50000, 2));
  const Estimate b = H_invariant(tau_matrix(-1.0 / tau), mc(50000, 3));
  const Estimate c = H_invariant(tau_matrix(tau + 1.0), mc(50000, 4));
  CHECK(std::abs(a.value - b.value) < 3.0 * std::hypot(a.std_error, b.std_error));
  CHECK(std::abs(a.value - c.value) < 3.0 * std::hypot(a.std_error, c.std_error));
}

TEST_CASE("j-invariant") {
  CHECK(std::abs(j_invariant(tau_matrix(cplx(0, 1))) - 1728.0) < 1e-6);
  CHECK(std::abs(j_invariant(tau_matrix(std::exp(cplx(0, 2 * kPi / 3))))) < 1e-6);
  const cplx tau(0.13, 1.21);
  CHECK(std::abs(j_invariant(tau_matrix(-1.0 / tau)) - j_invariant(tau_matrix(tau))) <
        1e-8 * std::abs(j_invariant(tau_matrix(tau))));
  const CurveJacobian cubic(curve_xn_plus_one(3));
  CHECK(std::abs(j_invariant(cubic.omega())) < 1e-5);
  CHECK_THROWS_AS(j_invariant(PeriodMatrix(CMat::Identity(2, 2) * cplx(0, 1))), Error);
}

TEST_CASE("closed forms agree with each other") {
  for (int g = 2; g <= 4; ++g) {
    const Estimate H{-0.48, 0.001, 1000, 1, 0};
    const double L = -43.0 - g;
    const DeltaPhi dp = hyperelliptic_delta_phi(g, H, L);
    CHECK(delta_from_H_phi(g, H.value, dp.phi.value) == doctest::Approx(dp.delta.value).epsilon(1e-12));
    const Estimate A = bost_constant(g, H, L);
    CHECK(A.value == doctest::Approx(dp.phi.value / (2.0 * g) - H.value).epsilon(1e-12));

    const Estimate lambda{3.4, 0.002, 1000, 2, 0};
    const AbelianExtensions ext = abelian_extensions(g, H, lambda);
    CHECK(ext.delta.value == doctest::Approx(2.0 * (g - 7) * H.value - 2.0 * lambda.value - 4.0 * g * kLog2Pi));
    CHECK(ext.phi.value == doctest::Approx((g + 5) * H.value - lambda.value + 2.0 * g * kLog2Pi));
    const double beta = 2.0 * (g - 4) * (g + 1) * H.value - 2.0 * g * lambda.value - 4.0 * g * (g + 2) / 3.0 * kLog2Pi;
    CHECK(ext.beta.value == doctest::Approx(beta));
    CHECK(ext.delta.std_error > 0.0);
  }
}

TEST_CASE("bounds report") {
  BoundInputs in;
  in.genus = 2;
  in.H = -0.5;
  in.log_det_im = 0.3;
  const auto checks = bounds_report(in);
  REQUIRE(checks.size() == 4);
  // At s = 0 the determinant bound reduces to the H bound.
  CHECK(checks[1].margin == doctest::Approx(checks[0].margin).epsilon(1e-12));

  in.r = 0.0;
  CHECK_THROWS_AS(bounds_report(in), Error);
  in.r = 1.0;
  in.s_values = {-1.0};
  CHECK_THROWS_AS(bounds_report(in), Error);
  in.s_values = {0.0};
  in.delta = -16.0;
  in.green_sup = 1.0;
  in.r = 0.5;  // below 6/g - 1 = 2
  CHECK_THROWS_AS(bounds_report(in), Error);
}

TEST_CASE("invariants of y^2 = x^5 + 1") {
  const CurveJacobian jac(curve_xn_plus_one(5));
  ReportOptions opts;
  opts.monte_carlo_curve_integrals = false;
  const InvariantReport rep = curve_invariants(jac, mc(50000, 5), opts);
  REQUIRE(rep.find("H"));
  CHECK(std::abs(rep.find("H")->value.value + 0.485) < 0.01);
  CHECK(std::abs(rep.find("log_Delta_g")->value.value + 43.14) < 0.05);
  CHECK(std::abs(rep.find("delta")->value.value + 16.68) < 0.1);
  CHECK(std::abs(rep.find("phi")->value.value - 0.54) < 0.05);
  CHECK(rep.find("Lambda") == nullptr);
  CHECK(rep.bounds_ok());

  const MuSampler mu(jac);
  const Estimate H = H_invariant(jac.omega(), mc(50000, 6));
  const Estimate dg = delta_via_green_integral(mu, generic_point(jac.curve()), H, mc(20000, 7));
  const Estimate& d = rep.find("delta")->value;
  CHECK(std::abs(dg.value - d.value) < 3.0 * std::hypot(dg.std_error, d.std_error));
}

TEST_CASE("period-only invariants") {
  const PeriodMatrix omega = period_matrix(curve_xn_plus_one(5));
  const InvariantReport rep = period_invariants(omega, mc(20000, 8), kDefaultThetaEps);
  CHECK(rep.find("H"));
  CHECK(rep.find("log_Delta_g"));
  CHECK(rep.find("Lambda") == nullptr);
  CHECK(rep.find("delta") == nullptr);
  REQUIRE(rep.notes.size() == 1);
  CHECK(rep.notes[0].find("Lambda unavailable") != std::string::npos);

  const InvariantReport one = period_invariants(tau_matrix(cplx(0, 1)), mc(20000, 9), kDefaultThetaEps);
  CHECK(one.find("delta"));
  CHECK(one.notes.empty());
  CHECK(one.bounds_ok());
}
