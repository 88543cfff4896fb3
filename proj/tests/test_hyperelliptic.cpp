#include <numeric>
#include <set>

#include "doctest.h"

#include "arakelov/hyperelliptic.hpp"

using namespace arakelov;

namespace {

double odd_ratio(const PeriodMatrix& pm) {
  const CVec zero = CVec::Zero(pm.genus());
  double even = -1e300, odd = -1e300;
  for (const auto& chr : all_characteristics(pm.genus())) {
    const LogComplex v = theta_log(pm, zero, chr);
    const double lm = v.is_zero() ? -1e300 : v.logmod;
    (chr.parity() ? odd : even) = std::max(chr.parity() ? odd : even, lm);
  }
  return std::exp(odd - even);
}

}  // namespace

TEST_CASE("curve construction validates its branch points") {
  CHECK_THROWS_AS(HyperellipticCurve({0.0, 1.0, cplx(0, 1), cplx(2, 2)}), Error);
  try {
    HyperellipticCurve({0.0, 1.0, cplx(0, 1), cplx(2, 2)});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EvenCount);
  }
  try {
    HyperellipticCurve({0.0, 1.0, 1.0 + 1e-9, cplx(0, 1), cplx(2, 2)});
    FAIL("duplicate accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicateBranchPoint);
  }
  const auto c = curve_xn_plus_one(5);
  CHECK(c.genus() == 2);
  CHECK(c.weierstrass(5).infinity);
  const CurvePoint p = c.point(cplx(0.3, 0.2), 1);
  CHECK(c.on_curve(p));
  CHECK(c.on_curve(p.involution()));
  CHECK(std::abs(p.y + p.involution().y) == 0.0);
}

TEST_CASE("standard characteristic table") {
  for (int g = 1; g <= 4; ++g) {
    const auto t = CharacteristicTable::standard(g);
    CHECK(t[2 * g + 1].is_zero());
    std::set<std::pair<unsigned, unsigned>> seen;
    for (const auto& e : t.entries()) seen.insert({e.top_bits(), e.bottom_bits()});
    CHECK(seen.size() == static_cast<std::size_t>(2 * g + 2));
    // Every (g+1)-subset of the finite points gives an even characteristic.
    for (const auto& s : subsets(2 * g + 1, g + 1)) CHECK(t.divisor_class(s).parity() == 0);
    std::set<std::pair<unsigned, unsigned>> classes;
    for (const auto& s : subsets(2 * g + 1, g + 1)) {
      const auto c = t.divisor_class(s);
      classes.insert({c.top_bits(), c.bottom_bits()});
    }
    CHECK(classes.size() == static_cast<std::size_t>(binomial(2 * g + 1, g + 1)));
  }
}

TEST_CASE("period matrix of y^2 = x^5 + 1") {
  const auto c = curve_xn_plus_one(5);
  const PeriodData pd = period_data(c);
  const PeriodMatrix pm(pd.omega);
  CHECK(pd.symmetry_residual < 1e-12);
  CHECK(Eigen::SelfAdjointEigenSolver<Mat>(pm.im()).eigenvalues().minCoeff() > 0.0);
  CHECK(odd_ratio(pm) < 1e-12);
  // Published value -43.14.
  const double ld = delta_g_log(pm, DiscriminantMode::HyperellipticProduct, nullptr);
  CHECK(std::abs(ld + 43.14) < 0.05);
  CHECK(std::abs(ld - delta_g_log(pm, DiscriminantMode::GeneralSum)) < 1e-9);
}

TEST_CASE("quadrature doubling leaves the period matrix unchanged") {
  for (int g = 2; g <= 3; ++g) {
    const auto c = random_curve(g, 77 + g);
    const PeriodMatrix a = period_matrix(c, 64);
    const PeriodMatrix b = period_matrix(c, 128);
    CHECK((a.omega() - b.omega()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("discriminant does not depend on which branch point sits at infinity") {
  for (const auto& c : {curve_xn_plus_one(5), random_curve(2, 5), random_curve(3, 6)}) {
    const double base = delta_g_log(period_matrix(c), DiscriminantMode::HyperellipticProduct,
                                    nullptr);
    for (int j = 0; j < 2 * c.genus() + 1; ++j) {
      const auto moved = move_to_infinity(c, j);
      const auto t = CharacteristicTable::for_curve(moved);
      CHECK(std::abs(delta_g_log(period_matrix(moved), DiscriminantMode::HyperellipticProduct, &t) - base) < 1e-4);
    }
  }
}

TEST_CASE("Rosenhain, de Jong and discriminant identities on random curves") {
  for (int g = 2; g <= 3; ++g) {
    const int trials = g == 2 ? 20 : 5;
    for (int t = 0; t < trials; ++t) {
      const auto c = random_curve(g, 1000 * g + t);
      const PeriodMatrix pm = period_matrix(c);
      const auto table = CharacteristicTable::for_curve(c);
      Rng rng(g, t);
      std::vector<int> perm(2 * g + 2);
      std::iota(perm.begin(), perm.end(), 0);
      for (int k = 0; k < 5; ++k) {
        for (int i = 2 * g + 1; i > 0; --i) std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
        CHECK(rosenhain_residual(pm, table, perm) < 1e-5);
      }
      CHECK(std::abs(phi_g_log(pm, table) - phi_g_log_all_infinities(pm, table)) < 1e-5);
      CHECK(jacobian_product_residual(pm, table) < 1e-5);
      CHECK(std::abs(delta_g_log(pm, DiscriminantMode::HyperellipticProduct, &table) -
                     delta_g_log(pm, DiscriminantMode::GeneralSum)) < 1e-5);
      CHECK(odd_ratio(pm) < 1e-12);
    }
  }
}

TEST_CASE("discriminant errors") {
  CMat diag = CMat::Zero(2, 2);
  diag(0, 0) = cplx(0, 1);
  diag(1, 1) = cplx(0.1, 1.3);
  const PeriodMatrix product(diag);
  CHECK_THROWS_AS(phi_g_log(product, CharacteristicTable::standard(2)), Error);
  try {
    phi_g_log(product, CharacteristicTable::standard(2));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VanishingEvenThetaConstant);
  }
  CMat big = CMat::Identity(4, 4) * cplx(0, 1.2);
  try {
    delta_g_log(PeriodMatrix(big), DiscriminantMode::GeneralSum);
    FAIL("genus 4 general sum accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GenusTooLarge);
  }
}

TEST_CASE("binomial helpers") {
  CHECK(binomial(6, 2) == 15);
  CHECK(subsets(5, 3).size() == 10);
  CHECK(log_binomial(10, 4) == doctest::Approx(std::log(210.0)));
}
