#include <cmath>

#include "doctest.h"

#include "arakelov/theta.hpp"

using namespace arakelov;

namespace {

CMat random_omega(int g, std::uint64_t seed) {
  Rng rng(seed, 0);
  Mat A(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) A(i, j) = rng.normal();
  Mat Y = A * A.transpose() + 0.5 * Mat::Identity(g, g);
  Mat X(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j <= i; ++j) X(i, j) = X(j, i) = rng.uniform() - 0.5;
  return X.cast<cplx>() + cplx(0, 1) * Y.cast<cplx>();
}

// Newton along a random complex line until theta vanishes.
CVec point_on_divisor(const PeriodMatrix& pm, Rng& rng);

CVec random_point(int g, Rng& rng) {
  CVec z(g);
  for (int i = 0; i < g; ++i) z(i) = cplx(rng.uniform() * 2 - 1, rng.uniform() * 2 - 1);
  return z;
}

// Plain truncated sum over a large box.
cplx theta_direct(const CMat& omega, const CVec& z, const Vec& a, const Vec& b, int box) {
  const int g = static_cast<int>(omega.rows());
  cplx s = 0;
  Eigen::VectorXi n = Eigen::VectorXi::Constant(g, -box);
  while (true) {
    Vec v = n.cast<double>() + a;
    cplx e = cplx(0, kPi) * (v.cast<cplx>().transpose() * omega * v.cast<cplx>())(0) +
             cplx(0, 2 * kPi) * (v.cast<cplx>().transpose() * (z + b.cast<cplx>()))(0);
    s += std::exp(e);
    int k = 0;
    while (k < g && n(k) == box) n(k++) = -box;
    if (k == g) break;
    ++n(k);
  }
  return s;
}

CVec point_on_divisor(const PeriodMatrix& pm, Rng& rng) {
  const int g = pm.genus();
  const auto zero = ThetaCharacteristic::zero(g);
  while (true) {
    CVec z = random_point(g, rng) * 0.5;
    const CVec dir = random_point(g, rng);
    for (int it = 0; it < 60; ++it) {
      const cplx f = theta_log(pm, z, zero).value();
      const cplx df = theta_derivs(pm, z, zero).first.cwiseProduct(dir).sum();
      cplx step = f / df;
      if (!std::isfinite(std::abs(step))) break;
      if (std::abs(step) > 0.2) step *= 0.2 / std::abs(step);
      z = reduce(pm, z - step * dir);
    }
    if (theta_norm_log(pm, z).value < -28.0) return z;
  }
}

}  // namespace

TEST_CASE("genus one value at tau = i") {
  CMat omega(1, 1);
  omega(0, 0) = cplx(0, 1);
  PeriodMatrix pm(omega);
  CVec z = CVec::Zero(1);
  // theta(0; i) = pi^(1/4) / Gamma(3/4)
  const double exact = std::pow(kPi, 0.25) / std::tgamma(0.75);
  CHECK(theta_log(pm, z).value().real() == doctest::Approx(exact).epsilon(1e-13));
  CHECK(theta_norm_log(pm, z).value == doctest::Approx(std::log(exact)).epsilon(1e-12));
}

TEST_CASE("series agrees with a brute-force box sum for every characteristic") {
  for (int g = 1; g <= 3; ++g) {
    CMat omega = random_omega(g, 100 + g);
    PeriodMatrix pm(omega);
    Rng rng(g, 1);
    CVec z = random_point(g, rng) * 0.3;
    for (const auto& chr : all_characteristics(g)) {
      cplx direct = theta_direct(omega, z, chr.top, chr.bottom, g == 3 ? 7 : 12);
      cplx fast = theta_log(pm, z, chr).value();
      CHECK(std::abs(direct - fast) < 1e-9 * (1 + std::abs(direct)));
    }
  }
}

TEST_CASE("odd characteristics vanish at the origin") {
  CMat omega = random_omega(3, 7);
  PeriodMatrix pm(omega);
  double even_scale = 0.0;
  for (const auto& chr : even_characteristics(3))
    even_scale = std::max(even_scale, std::abs(theta_log(pm, CVec::Zero(3), chr).value()));
  for (const auto& chr : all_characteristics(3)) {
    auto v = theta_log(pm, CVec::Zero(3), chr);
    if (chr.parity() == 1) CHECK(std::abs(v.value()) < 1e-10 * even_scale);
  }
  CHECK(even_characteristics(3).size() == 36);
  CHECK(all_characteristics(3).size() == 64);
}

TEST_CASE("norm is periodic and even") {
  CMat omega = random_omega(2, 17);
  PeriodMatrix pm(omega);
  Rng rng(3, 3);
  CVec z = random_point(2, rng);
  const double base = theta_norm_log(pm, z).value;
  CVec shift = omega.col(1) * 2.0 - omega.col(0) + CVec::Unit(2, 0) * 3.0;
  CHECK(theta_norm_log(pm, z + shift).value == doctest::Approx(base).epsilon(1e-10));
  CHECK(theta_norm_log(pm, -z).value == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("characteristic shift matches translated zero-characteristic norm") {
  CMat omega = random_omega(2, 23);
  PeriodMatrix pm(omega);
  Rng rng(5, 5);
  CVec z = random_point(2, rng);
  for (const auto& chr : all_characteristics(2)) {
    const double a = theta_norm_log(pm, z, chr).value;
    LogComplex t = theta_log(pm, z, chr);
    const Vec y = z.imag();
    const double expected = 0.25 * pm.log_det_im() + t.logmod - kPi * y.dot(pm.im_inverse() * y);
    CHECK(a == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("derivatives agree with finite differences") {
  CMat omega = random_omega(3, 31);
  PeriodMatrix pm(omega);
  Rng rng(9, 9);
  CVec z = random_point(3, rng) * 0.5;
  auto chr = ThetaCharacteristic::from_bits(3, 0b101, 0b011);
  auto [grad, hess] = theta_derivs(pm, z, chr);
  const double h = 1e-5;
  for (int j = 0; j < 3; ++j) {
    CVec e = CVec::Unit(3, j) * h;
    cplx fd = (theta_log(pm, z + e, chr).value() - theta_log(pm, z - e, chr).value()) / (2 * h);
    CHECK(std::abs(fd - grad(j)) < 1e-6 * (1 + std::abs(grad(j))));
    auto [gp, hp] = theta_derivs(pm, z + e, chr);
    auto [gm, hm] = theta_derivs(pm, z - e, chr);
    CVec col = (gp - gm) / (2 * h);
    CHECK((col - hess.col(j)).norm() < 1e-5 * (1 + hess.norm()));
  }
}

TEST_CASE("mean of the squared norm over the torus is 2^(-g/2)") {
  for (int g = 1; g <= 2; ++g) {
    PeriodMatrix pm(random_omega(g, 40 + g));
    IntegrationConfig cfg{8192, 1, SampleKind::LowDiscrepancy, 16};
    auto est = integrate(2 * g, cfg, [&](std::span<const double> u) {
      ReducedPoint p{Vec(g), Vec(g), Eigen::VectorXi::Zero(g), Eigen::VectorXi::Zero(g)};
      for (int i = 0; i < g; ++i) {
        p.x(i) = u[i];
        p.y(i) = u[g + i];
      }
      return Draw{std::exp(2.0 * theta_norm_log(pm, p.point(pm)).value), false};
    });
    CHECK(std::abs(est.value - std::pow(2.0, -0.5 * g)) < 3.0 * est.std_error);
  }
}

TEST_CASE("modular invariance of the norm in genus one") {
  CMat omega(1, 1);
  omega(0, 0) = cplx(0.23, 0.91);
  PeriodMatrix pm(omega);
  CMat inv(1, 1);
  inv(0, 0) = -1.0 / omega(0, 0);
  PeriodMatrix pm2(inv);
  CVec z(1);
  z(0) = cplx(0.17, 0.29);
  CVec z2(1);
  z2(0) = z(0) / omega(0, 0);
  CHECK(theta_norm_log(pm2, z2).value == doctest::Approx(theta_norm_log(pm, z).value).epsilon(1e-10));
}

TEST_CASE("non-symmetric input is rejected") {
  CMat omega = random_omega(2, 1);
  omega(0, 1) += 0.1;
  try {
    PeriodMatrix pm(omega);
    FAIL("expected NonSymmetric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSymmetric);
  }
}

TEST_CASE("eta vanishes off the divisor only via the guard") {
  CMat omega = random_omega(2, 3);
  PeriodMatrix pm(omega);
  Rng rng(1, 1);
  auto eta = eta_norm_log(pm, point_on_divisor(pm, rng));
  CHECK(std::isfinite(eta.value));
  CHECK(!eta.censored);
  try {
    eta_norm_log(pm, random_point(2, rng));
    FAIL("expected NotOnTheta");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotOnTheta);
  }
}

TEST_CASE("genus one eta is the squared derivative") {
  CMat omega(1, 1);
  omega(0, 0) = cplx(0, 1);
  PeriodMatrix pm(omega);
  CVec z(1);
  z(0) = cplx(0.5, 0.5);
  const double h = 1e-5;
  CVec e = CVec::Constant(1, cplx(h));
  cplx d = (theta_log(pm, z + e).value() - theta_log(pm, z - e).value()) / (2 * h);
  // ||eta|| = Y^{3/2} exp(-2 pi y^2 / Y) |theta'|^2 in genus one.
  const double expected = 1.5 * std::log(1.0) - 2 * kPi * 0.25 + 2 * std::log(std::abs(d));
  CHECK(eta_norm_log(pm, z).value == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("eta is lattice invariant on the divisor") {
  CMat omega = random_omega(2, 77);
  PeriodMatrix pm(omega);
  Rng rng(8, 8);
  CVec z = point_on_divisor(pm, rng);
  CHECK(theta_norm_log(pm, z).value < -25.0);
  CVec shifted = z + omega.col(0) - 2.0 * CVec::Unit(2, 1);
  CHECK(eta_norm_log(pm, shifted).value == doctest::Approx(eta_norm_log(pm, z).value).epsilon(1e-8));
}

TEST_CASE("eta vanishes on a decomposable abelian surface") {
  CMat omega = CMat::Zero(2, 2);
  omega(0, 0) = cplx(0.1, 1.2);
  omega(1, 1) = cplx(-0.3, 0.9);
  PeriodMatrix pm(omega);
  Rng rng(2, 2);
  for (int k = 0; k < 5; ++k) CHECK(eta_norm_log(pm, point_on_divisor(pm, rng)).censored);
}

TEST_CASE("J norm ignores order and integer shifts") {
  CMat omega = random_omega(2, 5);
  PeriodMatrix pm(omega);
  Rng rng(4, 4);
  std::vector<CVec> w{random_point(2, rng), random_point(2, rng)};
  const double base = J_norm_log(pm, w).value;
  CHECK(J_norm_log(pm, {w[1], w[0]}).value == doctest::Approx(base).epsilon(1e-12));
  CHECK(J_norm_log(pm, {w[0] + CVec::Unit(2, 1), w[1]}).value == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("autissier constants") {
  CHECK(autissier_constant(2) == 2.0);
  CHECK(autissier_constant(3) == 2.5);
  CHECK(autissier_constant(4) == doctest::Approx(3.0 * std::pow(6.0 / (kPi * std::sqrt(3.0)), 2.0)));
}

TEST_CASE("autissier margin is nonnegative on reduced-looking matrices") {
  for (int g = 1; g <= 3; ++g) {
    Rng rng(500 + g, 0);
    for (int trial = 0; trial < 3; ++trial) {
      Mat Y = Mat::Zero(g, g);
      for (int i = 0; i < g; ++i) Y(i, i) = 0.9 + 1.5 * rng.uniform();
      for (int i = 0; i < g; ++i)
        for (int j = 0; j < i; ++j) Y(i, j) = Y(j, i) = (rng.uniform() - 0.5) * 0.5 * std::min(Y(i, i), Y(j, j));
      Mat X(g, g);
      for (int i = 0; i < g; ++i)
        for (int j = 0; j <= i; ++j) X(i, j) = X(j, i) = rng.uniform() - 0.5;
      PeriodMatrix pm(X.cast<cplx>() + cplx(0, 1) * Y.cast<cplx>());
      double worst = 1e300;
      for (int k = 0; k < 3000; ++k) worst = std::min(worst, autissier_margin(pm, random_point(g, rng)));
      CHECK(worst >= 0.0);
    }
  }
}
