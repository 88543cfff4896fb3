#include <cmath>

#include "doctest.h"

#include "arakelov/abeljacobi.hpp"

using namespace arakelov;

namespace {

IntegrationConfig mc(std::size_t samples, std::uint64_t seed) {
  IntegrationConfig c;
  c.samples = samples;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("Weierstrass points land on the half-periods of the table") {
  for (const auto& curve : {curve_xn_plus_one(5), curve_xn_plus_one(6), random_curve(2, 11), curve_xn_plus_one(7)}) {
    const CurveJacobian jac(curve);
    CHECK(jac.matches_standard_table());
    for (int j = 0; j < 2 * jac.genus() + 1; ++j) {
      const CVec w = aj_point(jac, curve.weierstrass(j));
      CHECK(lattice_residual(jac.omega(), w - jac.table()[j].half_period(jac.omega())) < 1e-6);
      CHECK(lattice_residual(jac.omega(), 2.0 * w) < 1e-6);
    }
  }
}

TEST_CASE("Abel-Jacobi map: involution, routes and refinement") {
  const CurveJacobian jac(random_curve(2, 23));
  const auto& curve = jac.curve();
  for (int k = 0; k < 6; ++k) {
    const CurvePoint p = generic_point(curve, k);
    const CVec a = aj_point(jac, p);
    CHECK(lattice_residual(jac.omega(), a + aj_point(jac, p.involution())) < 1e-8);
    CHECK(lattice_residual(jac.omega(), aj_point(jac, p, 1e-9) - a) < 1e-8);
    for (int j = 0; j < 5; ++j) {
      try {
        CHECK(lattice_residual(jac.omega(), aj_point(jac, p, 1e-13, j) - a) < 1e-8);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PathClearanceFailure);
      }
    }
  }
  const CurvePoint far = curve.point(cplx(40.0, -25.0), 0);
  CHECK(lattice_residual(jac.omega(), aj_point(jac, far) + aj_point(jac, far.involution())) < 1e-8);
}

TEST_CASE("theta of divisors") {
  const CurveJacobian jac(curve_xn_plus_one(5));
  const auto& curve = jac.curve();
  const CurvePoint inf = CurvePoint::at_infinity();
  // (g-1) infinity is effective.
  const Draw eff = theta_of_divisor(jac, {{inf, 1}});
  CHECK((eff.censored || eff.value < -25.0));
  // So is any single point in genus 2.
  const Draw one = theta_of_divisor(jac, {{generic_point(curve, 2), 1}});
  CHECK((one.censored || one.value < -25.0));
  // A generic degree-1 class with a pole is not.
  const Divisor d{{generic_point(curve, 0), 1}, {generic_point(curve, 1), 1}, {inf, -1}};
  const Draw gen = theta_of_divisor(jac, d);
  CHECK(gen.value > -10.0);
  const CurvePoint p = generic_point(curve, 4);
  CHECK(theta_of_divisor(jac, d, std::make_pair(p, p)).value == doctest::Approx(gen.value).epsilon(1e-12));
  try {
    theta_of_divisor(jac, {{inf, 2}});
    FAIL("degree 2 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongDegree);
  }
}

TEST_CASE("mu sampler and Cauchy-Binet weights") {
  const CurveJacobian jac(curve_xn_plus_one(5));
  const MuSampler mu(jac);
  const auto& curve = jac.curve();
  const Estimate mass = integrate_random(mc(40000, 3), [&](Rng& rng) {
    const cplx x = mu.propose(rng);
    return Draw{2.0 * jac.mu_density(curve.point(x, 1)) / mu.proposal_density(x), false};
  });
  CHECK(std::abs(mass.value - 1.0) < 3.0 * mass.std_error);

  Rng rng(5, 5);
  for (int i = 0; i < 20; ++i) CHECK(cb_weight(jac, {mu.sample(rng).point}) == doctest::Approx(1.0).epsilon(1e-12));

  const Estimate w = integrate_random(mc(40000, 4), [&](Rng& r) {
    return Draw{cb_weight(jac, {mu.sample(r).point, mu.sample(r).point}), false};
  });
  // g^g E[w] / (g!)^2 = 1 for g = 2.
  CHECK(std::abs(w.value - 1.0) < 3.0 * w.std_error);
}

TEST_CASE("Cauchy-Binet sampling matches tensor quadrature of the pulled-back volume") {
  const CurveJacobian jac(curve_xn_plus_one(5));
  const MuSampler mu(jac);
  const double R = 1.5;
  auto f = [&](cplx x) { return std::max(0.0, 1.0 - std::abs(x) / R); };

  // Midpoint rule on [-R, R]^2 for each point. On the product grid,
  // sum_ab f_a f_b det([m_a; m_b][m_a; m_b]^*) = (sum f |m|^2)^2 - |sum f m m^*|_F^2.
  const int n = 1200;
  const double h = 2.0 * R / n;
  double s0 = 0.0;
  CMat s = CMat::Zero(2, 2);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cplx x(-R + (i + 0.5) * h, -R + (k + 0.5) * h);
      const double fx = f(x);
      if (fx == 0.0) continue;
      const CVec m = jac.orthonormal_differentials(jac.curve().point(x, 1));
      s0 += fx * m.squaredNorm() * h * h;
      s += fx * (m * m.adjoint()) * h * h;
    }
  // 2! for the pair, 2 x 2 for the sheets.
  const double quadrature = 2.0 * 4.0 * (s0 * s0 - s.squaredNorm());

  const Estimate sampled = integrate_random(mc(400000, 9), [&](Rng& r) {
    const CurvePoint p = mu.sample(r).point, q = mu.sample(r).point;
    return Draw{4.0 * f(p.x) * f(q.x) * cb_weight(jac, {p, q}), false};
  });
  INFO("quadrature " << quadrature << " sampled " << sampled.value << " +- " << sampled.std_error);
  CHECK(std::abs(sampled.value - quadrature) < 0.01 * quadrature);
  // The comparison resolves 1%.
  CHECK(3.0 * sampled.std_error < 0.01 * quadrature);
}

TEST_CASE("genus one: mu pushes forward to the flat measure") {
  const CurveJacobian jac(curve_xn_plus_one(3));
  const MuSampler mu(jac);
  int counts[4][4] = {};
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Rng rng(17, i);
    const ReducedPoint r = reduce_point(jac.omega(), aj_point(jac, mu.sample(rng).point));
    ++counts[std::min(3, static_cast<int>(r.x(0) * 4))][std::min(3, static_cast<int>(r.y(0) * 4))];
  }
  double chi2 = 0.0;
  const double expected = n / 16.0;
  for (auto& row : counts)
    for (int c : row) chi2 += (c - expected) * (c - expected) / expected;
  // 15 degrees of freedom, p = 0.001.
  CHECK(chi2 < 37.70);
}

TEST_CASE("curve integrals on y^2 = x^5 + 1") {
  const CurveJacobian jac(curve_xn_plus_one(5));
  const MuSampler mu(jac);
  const auto& curve = jac.curve();
  const CurvePoint q = generic_point(curve, 0);
  const Estimate s1 = S_k(mu, 1, q, mc(20000, 1));
  const Estimate s1b = S_k(mu, 1, generic_point(curve, 3), mc(20000, 2));
  const Estimate diff = combine({{1.0, s1}, {-1.0, s1b}});
  CHECK(std::abs(diff.value) < 3.0 * diff.std_error);
  CHECK(s1.censored_fraction() < 0.01);

  const Estimate lambda = lambda_jacobian(mu, mc(20000, 3));
  CHECK(std::isfinite(lambda.value));
  CHECK(lambda.censored_fraction() < 0.01);

  try {
    theta_divisor_integral(mu, q, q, mc(1000, 4));
    FAIL("coincident points accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CoincidentPoints);
  }
}
