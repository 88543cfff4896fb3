#include "arakelov/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "arakelov/combinatorics.hpp"

namespace arakelov {

namespace {

const double kLog2Pi = std::log(2.0 * kPi);

CheckResult at_most(const std::string& name, double measured, double threshold) {
  return {name, measured, threshold, "<=", measured <= threshold};
}

CheckResult at_least(const std::string& name, double measured, double threshold) {
  return {name, measured, threshold, ">=", measured >= threshold};
}

CheckResult exact(const std::string& name, long long measured, long long expected) {
  return {name, static_cast<double>(measured), static_cast<double>(expected), "==", measured == expected};
}

// |difference| against 3 standard errors of the difference.
CheckResult within_error(const std::string& name, const Estimate& diff) {
  return at_most(name, std::abs(diff.value), 3.0 * diff.std_error);
}

void append(std::vector<CheckResult>& out, std::vector<CheckResult> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

IntegrationConfig tagged(const IntegrationConfig& c, std::uint64_t tag) {
  IntegrationConfig out = c;
  out.seed = mix64(c.seed ^ (0x5eed0000ULL + tag));
  return out;
}

CMat random_omega(int g, std::uint64_t seed) {
  Rng rng(seed, 0);
  Mat a(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) a(i, j) = rng.normal();
  const Mat y = a * a.transpose() + 0.5 * Mat::Identity(g, g);
  Mat x(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j <= i; ++j) x(i, j) = x(j, i) = rng.uniform() - 0.5;
  return x.cast<cplx>() + cplx(0, 1) * y.cast<cplx>();
}

// Small real part, dominant diagonal of moderate size: the shape of a
// Siegel-reduced matrix.
CMat reduced_looking_omega(int g, std::uint64_t seed) {
  Rng rng(seed, 0);
  Mat y = Mat::Zero(g, g);
  for (int i = 0; i < g; ++i) y(i, i) = 0.9 + 1.5 * rng.uniform();
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < i; ++j) y(i, j) = y(j, i) = (rng.uniform() - 0.5) * 0.5 * std::min(y(i, i), y(j, j));
  Mat x(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j <= i; ++j) x(i, j) = x(j, i) = rng.uniform() - 0.5;
  return x.cast<cplx>() + cplx(0, 1) * y.cast<cplx>();
}

CVec random_point(int g, Rng& rng) {
  CVec z(g);
  for (int i = 0; i < g; ++i) z(i) = cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  return z;
}

CVec torus_point(const PeriodMatrix& omega, std::span<const double> u) {
  const int g = omega.genus();
  Vec x(g), y(g);
  for (int i = 0; i < g; ++i) {
    x(i) = u[i];
    y(i) = u[g + i];
  }
  return x.cast<cplx>() + omega.omega() * y.cast<cplx>();
}

// Largest odd theta constant relative to the largest even one.
double odd_constant_ratio(const PeriodMatrix& omega) {
  const int g = omega.genus();
  const CVec zero = CVec::Zero(g);
  double even = -1e300, odd = -1e300;
  for (const auto& chr : all_characteristics(g)) {
    const LogComplex v = theta_log(omega, zero, chr);
    const double lm = v.is_zero() ? -1e300 : v.logmod;
    (chr.parity() ? odd : even) = std::max(chr.parity() ? odd : even, lm);
  }
  return std::exp(odd - even);
}

HyperellipticCurve curve_of(const std::string& spec) {
  InputSpec in = load_input(spec);
  if (!std::holds_alternative<HyperellipticCurve>(in))
    throw Error(ErrorKind::InvalidInput, spec + " is not a curve");
  return std::get<HyperellipticCurve>(std::move(in));
}

std::string gname(int g) { return " (g=" + std::to_string(g) + ")"; }

// Closed forms in H: value = coef * H + constant.
struct Linear {
  double coef, constant;
};

struct HyperellipticForms {
  Linear delta, phi, bost;
};

HyperellipticForms forms(int g, double log_delta) {
  const double n = static_cast<double>(binomial(2 * g, g - 1));
  HyperellipticForms f;
  f.delta = {-8.0 * (g - 1) / g, -log_delta / n - 8.0 * g * kLog2Pi};
  f.phi = {4.0 * (2 * g + 1) / g, -0.5 * log_delta / n};
  f.bost = {f.phi.coef / (2 * g) - 1.0, f.phi.constant / (2 * g)};
  return f;
}

}  // namespace

std::vector<CheckResult> check_theta_numerics(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  const double eps = opts.config.eps;
  for (int g = 2; g <= 3; ++g) {
    const PeriodMatrix pm(random_omega(g, 31 + g));
    Rng rng(opts.config.seed, g);
    const CVec z = random_point(g, rng) * 0.5;
    const auto chr = ThetaCharacteristic::from_bits(g, 0b101 & ((1u << g) - 1), 0b011);
    const auto [grad, hess] = theta_derivs(pm, z, chr, eps);
    const double h = 1e-5;
    double grad_err = 0.0, hess_err = 0.0;
    for (int j = 0; j < g; ++j) {
      const CVec e = CVec::Unit(g, j) * h;
      const cplx fd = (theta_log(pm, z + e, chr, eps).value() - theta_log(pm, z - e, chr, eps).value()) / (2 * h);
      grad_err = std::max(grad_err, std::abs(fd - grad(j)) / std::max(1.0, std::abs(grad(j))));
      const CVec col = (theta_derivs(pm, z + e, chr, eps).first - theta_derivs(pm, z - e, chr, eps).first) / (2 * h);
      hess_err = std::max(hess_err, (col - hess.col(j)).norm() / std::max(1.0, hess.norm()));
    }
    out.push_back(at_most("theta gradient vs finite differences" + gname(g), grad_err, 1e-5));
    out.push_back(at_most("theta hessian vs finite differences" + gname(g), hess_err, 1e-5));

    // Truncation halving: a much smaller eps must not move the value.
    const double loose = theta_norm_log(pm, z, eps).value;
    const double tight = theta_norm_log(pm, z, eps * eps).value;
    out.push_back(at_most("theta truncation refinement" + gname(g), std::abs(loose - tight), 1e-9));

    out.push_back(at_most("odd theta constants vanish" + gname(g), odd_constant_ratio(pm), 1e-12));
  }
  for (int g = 1; g <= 3; ++g) {
    const PeriodMatrix pm(random_omega(g, 40 + g));
    const Estimate m = integrate(2 * g, tagged(opts.config.integration(), 100 + g), [&](std::span<const double> u) {
      return Draw{std::exp(2.0 * theta_norm_log(pm, torus_point(pm, u), eps).value), false};
    });
    out.push_back(within_error("mean of ||theta||^2 is 2^(-g/2)" + gname(g),
                               combine({{1.0, m}}, -std::pow(2.0, -0.5 * g))));
  }
  return out;
}

std::vector<CheckResult> check_genus_one(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  const cplx tau(0.31, 1.07);
  auto delta = [&](cplx t, std::uint64_t tag) {
    CMat m(1, 1);
    m(0, 0) = t;
    const Estimate H = H_invariant(PeriodMatrix(m), tagged(opts.config.integration(), tag), opts.config.eps);
    return combine({{-24.0, H}}, -8.0 * kLog2Pi);
  };
  const Estimate d0 = delta(tau, 200);
  out.push_back(within_error("genus one delta(tau + 1) = delta(tau)", combine({{1.0, delta(tau + 1.0, 201)}, {-1.0, d0}})));
  out.push_back(within_error("genus one delta(-1/tau) = delta(tau)", combine({{1.0, delta(-1.0 / tau, 202)}, {-1.0, d0}})));
  // Faltings: delta = -24 log|eta(tau)| - 6 log Im tau - 8 log 2 pi; at tau = i, eta(i) = Gamma(1/4) / (2 pi^(3/4)).
  const double log_eta_i = std::log(std::tgamma(0.25) / (2.0 * std::pow(kPi, 0.75)));
  out.push_back(within_error("genus one delta(i) from eta(i)", combine({{1.0, delta(cplx(0, 1), 203)}}, 24.0 * log_eta_i + 8.0 * kLog2Pi)));
  const CurveJacobian cubic(curve_xn_plus_one(3), opts.config.quad_order, opts.config.eps);
  out.push_back(at_most("j-invariant of y^2 = x^3 + 1", std::abs(j_invariant(cubic.omega())), 1e-5));
  return out;
}

std::vector<CheckResult> check_periods(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  const HyperellipticCurve curve = curve_of(opts.curve);
  const int g = curve.genus();
  const int order = opts.config.quad_order;
  const PeriodData pd = period_data(curve, order);
  const PeriodMatrix pm(pd.omega);
  out.push_back(at_most("period matrix symmetry residual", pd.symmetry_residual, 1e-7));
  out.push_back(at_least("imaginary part smallest eigenvalue", Eigen::SelfAdjointEigenSolver<Mat>(pm.im()).eigenvalues().minCoeff(), 0.0));
  const PeriodMatrix fine = period_matrix(curve, 2 * order);
  out.push_back(at_most("quadrature doubling changes Omega by", (fine.omega() - pm.omega()).cwiseAbs().maxCoeff(), 1e-10));
  out.push_back(at_most("odd theta constants vanish", odd_constant_ratio(pm), 1e-12));

  if (g >= 2) {
    const CharacteristicTable table = CharacteristicTable::for_curve(curve);
    const double base = delta_g_log(pm, DiscriminantMode::HyperellipticProduct, &table);
    double worst = 0.0;
    for (int j = 0; j < 2 * g + 1; ++j) {
      const HyperellipticCurve moved = move_to_infinity(curve, j);
      const PeriodMatrix mp = period_matrix(moved, order);
      const CharacteristicTable moved_table = CharacteristicTable::for_curve(moved);
      worst = std::max(worst, std::abs(delta_g_log(mp, DiscriminantMode::HyperellipticProduct, &moved_table) - base));
    }
    out.push_back(at_most("log ||Delta_g|| invariant under moving a branch point to infinity", worst, 1e-4));
  }

  const CurveJacobian jac(curve, order, opts.config.eps);
  out.push_back(exact("calibrated characteristic table is the standard one", jac.matches_standard_table(), 1));
  double weier = 0.0;
  for (int j = 0; j < 2 * g + 1; ++j)
    weier = std::max(weier, lattice_residual(jac.omega(), aj_point(jac, curve.weierstrass(j)) -
                                                           jac.table()[j].half_period(jac.omega())));
  out.push_back(at_most("Weierstrass points map to their half-periods", weier, 1e-6));

  double sigma = 0.0, routes = 0.0;
  for (int k = 0; k < 5; ++k) {
    const CurvePoint p = generic_point(curve, k);
    const CVec a = aj_point(jac, p);
    sigma = std::max(sigma, lattice_residual(jac.omega(), a + aj_point(jac, p.involution())));
    for (int j = 0; j < 2 * g + 1; ++j) {
      try {
        routes = std::max(routes, lattice_residual(jac.omega(), aj_point(jac, p, 1e-13, j) - a));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PathClearanceFailure) throw;
      }
    }
  }
  out.push_back(at_most("AJ(P) + AJ(sigma P) vanishes on the torus", sigma, 1e-8));
  out.push_back(at_most("AJ routes through different branch points agree", routes, 1e-8));

  if (g >= 2) {
    // The theta-constant product rebuilt from Abel-Jacobi images of Weierstrass divisors.
    double from_divisors = 0.0;
    for (const auto& t : subsets(2 * g + 1, g + 1)) {
      Divisor d;
      for (int i = 0; i < g; ++i) d.push_back({curve.weierstrass(t[i]), 1});
      d.push_back({curve.weierstrass(t[g]), -1});
      from_divisors += 8.0 * theta_of_divisor(jac, d).value;
    }
    out.push_back(at_most("||phi_g|| from Weierstrass divisors matches theta constants",
                          std::abs(from_divisors - phi_g_log(jac.omega(), jac.table())), 1e-6 * std::max(1.0, std::abs(from_divisors))));
  }
  return out;
}

std::vector<CheckResult> check_deterministic_identities(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  std::vector<int> genera = opts.genus ? std::vector<int>{opts.genus} : std::vector<int>{2, 3};
  for (int g : genera) {
    const int trials = opts.trials ? opts.trials : (g == 2 ? 20 : 5);
    double rosen = 0.0, weier = 0.0, djr = 0.0, general = 0.0, odd = 0.0, sym = 0.0, min_eig = 1e300;
    for (int t = 0; t < trials; ++t) {
      const HyperellipticCurve curve = random_curve(g, opts.config.seed * 1000 + 100 * g + t);
      const PeriodData pd = period_data(curve, opts.config.quad_order);
      const PeriodMatrix pm(pd.omega);
      const CharacteristicTable table = CharacteristicTable::for_curve(curve);
      Rng rng(opts.config.seed, 1000 * g + t);
      std::vector<int> perm(2 * g + 2);
      std::iota(perm.begin(), perm.end(), 0);
      for (int k = 0; k < 10; ++k) {
        for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i) std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
        rosen = std::max(rosen, rosenhain_residual(pm, table, perm));
      }
      weier = std::max(weier, std::abs(phi_g_log(pm, table) - phi_g_log_all_infinities(pm, table)));
      djr = std::max(djr, jacobian_product_residual(pm, table));
      if (g <= 3)
        general = std::max(general, std::abs(delta_g_log(pm, DiscriminantMode::HyperellipticProduct, &table) -
                                             delta_g_log(pm, DiscriminantMode::GeneralSum)));
      odd = std::max(odd, odd_constant_ratio(pm));
      sym = std::max(sym, pd.symmetry_residual);
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Mat>(pm.im()).eigenvalues().minCoeff());
    }
    const std::string tag = gname(g) + ", " + std::to_string(trials) + " random curves";
    out.push_back(at_most("generalized Rosenhain formula" + tag, rosen, 1e-5));
    out.push_back(at_most("||phi_g|| with infinity fixed vs all choices of infinity" + tag, weier, 1e-5));
    out.push_back(at_most("product of ||J|| over Weierstrass g-sets" + tag, djr, 1e-5));
    if (g <= 3) out.push_back(at_most("discriminant: product formula vs general sum" + tag, general, 1e-5));
    out.push_back(at_most("odd theta constants vanish" + tag, odd, 1e-12));
    out.push_back(at_most("period matrix symmetry residual" + tag, sym, 1e-7));
    out.push_back(at_least("imaginary part smallest eigenvalue" + tag, min_eig, 0.0));
  }
  return out;
}

std::vector<CheckResult> check_mc_identities(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  const CurveJacobian jac(curve_of(opts.curve), opts.config.quad_order, opts.config.eps);
  const int g = jac.genus();
  if (g < 2) throw Error(ErrorKind::InvalidInput, "identities need genus >= 2");
  const IntegrationConfig base = opts.config.integration();
  const MuSampler mu(jac);
  const HyperellipticCurve& curve = jac.curve();
  const CurvePoint q = generic_point(curve, 0);
  const double log_delta = delta_g_log(jac.omega(), DiscriminantMode::HyperellipticProduct, &jac.table());
  const double n = static_cast<double>(binomial(2 * g, g - 1));
  const HyperellipticForms f = forms(g, log_delta);

  const Estimate H = H_invariant(jac.omega(), tagged(base, 1), jac.eps());
  const Estimate S1 = S_k(mu, 1, q, tagged(base, 2));
  const Estimate S1b = S_k(mu, 1, generic_point(curve, 3), tagged(base, 3));
  const Estimate Sg = S_k(mu, g, q, tagged(base, 4));
  const Estimate B = B_invariant(mu, tagged(base, 5));
  const Estimate lambda = lambda_jacobian(mu, tagged(base, 6));

  out.push_back(within_error("mu has total mass 1", [&] {
    const Estimate m = integrate_random(tagged(base, 7), [&](Rng& rng) {
      const cplx x = mu.propose(rng);
      return Draw{2.0 * jac.mu_density(curve.point(x, 1)) / mu.proposal_density(x), false};
    });
    return combine({{1.0, m}}, -1.0);
  }()));
  {
    double w1 = 0.0;
    Rng rng(base.seed, 8);
    for (int i = 0; i < 20; ++i) w1 = std::max(w1, std::abs(cb_weight(jac, {mu.sample(rng).point}) - 1.0));
    out.push_back(at_most("Cauchy-Binet weight is 1 for a single point", w1, 1e-12));
    double fact = 1.0;
    for (int i = 2; i <= g; ++i) fact *= i;
    const Estimate wg = integrate_random(tagged(base, 9), [&](Rng& r) {
      std::vector<CurvePoint> pts;
      for (int i = 0; i < g; ++i) pts.push_back(mu.sample(r).point);
      return Draw{cb_weight(jac, pts), false};
    });
    out.push_back(within_error("Cauchy-Binet weight has mass (g!)^2 / g^g",
                               combine({{std::pow(g, g) / (fact * fact), wg}}, -1.0)));
  }

  out.push_back(within_error("S_1 does not depend on the base point", combine({{1.0, S1}, {-1.0, S1b}})));
  out.push_back(within_error("(g-1) H = g S_g - S_1", combine({{g - 1.0, H}, {-double(g), Sg}, {1.0, S1}})));
  out.push_back(within_error("delta = 8(g-1) S_g - 8 B",
                             combine({{8.0 * (g - 1), Sg}, {-8.0, B}, {-f.delta.coef, H}}, -f.delta.constant)));
  const double log_phi = log_delta + 4.0 * (g + 1) * n * std::log(2.0);
  out.push_back(within_error("log ||phi_g|| from B and S_g",
                             combine({{4.0 * n * (g + 1) / g, B}, {-4.0 * n * (g - 1), Sg}},
                                     -4.0 * n * (g + 1) * std::log(kPi) - log_phi)));
  out.push_back(within_error("phi = (4/g)(H - S_1)",
                             combine({{4.0 / g - f.phi.coef, H}, {-4.0 / g, S1}}, -f.phi.constant)));
  out.push_back(within_error("Lambda = (g-1) H - delta/4 - phi/2",
                             combine({{1.0, lambda}, {-(g - 1.0 - f.delta.coef / 4 - f.phi.coef / 2), H}},
                                     f.delta.constant / 4 + f.phi.constant / 2)));
  out.push_back(within_error("delta from (H, Lambda) matches the hyperelliptic delta",
                             combine({{2.0 * (g - 7) - f.delta.coef, H}, {-2.0, lambda}},
                                     -4.0 * g * kLog2Pi - f.delta.constant)));
  out.push_back(within_error("phi from (H, Lambda) matches the hyperelliptic phi",
                             combine({{g + 5.0 - f.phi.coef, H}, {-1.0, lambda}}, 2.0 * g * kLog2Pi - f.phi.constant)));
  {
    // beta_g = ((2g-2) phi + (2g+1) delta) / 3 holds as an identity in (H, Lambda).
    const AbelianExtensions ext = abelian_extensions(g, Estimate::exact(H.value), Estimate::exact(lambda.value));
    const double rhs = ((2.0 * g - 2.0) * ext.phi.value + (2.0 * g + 1.0) * ext.delta.value) / 3.0;
    out.push_back(at_most("beta_g = ((2g-2) phi + (2g+1) delta) / 3", std::abs(ext.beta.value - rhs), 1e-9));
  }

  const auto [h1, h2] = h_alt_estimators(mu, q, tagged(base, 10));
  out.push_back(within_error("H from the pullback along P_1 + .. + P_g - Q", combine({{1.0, h1}, {-1.0, H}})));
  out.push_back(within_error("H from the pullback along 2 P_1 + .. - P_g", combine({{1.0, h2}, {-1.0, H}})));

  const Estimate dg = delta_via_green_integral(mu, q, H, tagged(base, 11));
  out.push_back(within_error("delta from the translated theta-divisor integral",
                             combine({{1.0, dg}, {-f.delta.coef, H}}, -f.delta.constant)));

  const Estimate mean = theta_divisor_integral_mean(mu, q, tagged(base, 12));
  out.push_back(within_error("Green function has mu-mean zero", combine({{1.0, mean}, {f.bost.coef, H}}, f.bost.constant)));

  const CurvePoint p1 = generic_point(curve, 1), p2 = generic_point(curve, 2);
  out.push_back(within_error("Green function is symmetric",
                             combine({{1.0, theta_divisor_integral(mu, p1, p2, tagged(base, 13))},
                                      {-1.0, theta_divisor_integral(mu, p2, p1, tagged(base, 14))}})));

  // log ||theta||(P_1 + .. + P_g - Q) = S_g + sum g(P_j, Q) + sum_{k<l} g(sigma P_k, P_l).
  const int pairs = g + g * (g - 1) / 2;
  double worst_ratio = 0.0;
  std::size_t failed = 0;
  for (std::size_t t = 0; t < opts.decomposition_tuples; ++t) {
    Rng rng(mix64(base.seed ^ 0xdec0), t);
    std::vector<CurvePoint> pts;
    for (int i = 0; i < g; ++i) pts.push_back(mu.sample(rng).point);
    Divisor d;
    for (const auto& p : pts) d.push_back({p, 1});
    d.push_back({q, -1});
    const double lhs = theta_of_divisor(jac, d).value;
    std::vector<Term> terms{{-1.0, Sg}, {-pairs * f.bost.coef, H}};
    std::uint64_t tag = 1000 + 100 * t;
    for (int i = 0; i < g; ++i) terms.push_back({-1.0, theta_divisor_integral(mu, pts[i], q, tagged(base, ++tag))});
    for (int k = 0; k < g; ++k)
      for (int l = k + 1; l < g; ++l)
        terms.push_back({-1.0, theta_divisor_integral(mu, pts[k].involution(), pts[l], tagged(base, ++tag))});
    const Estimate diff = combine(terms, lhs - pairs * f.bost.constant);
    const double ratio = std::abs(diff.value) / (3.0 * diff.std_error);
    worst_ratio = std::max(worst_ratio, ratio);
    failed += ratio > 1.0;
  }
  out.push_back(at_most("decomposition of log ||theta|| at " + std::to_string(opts.decomposition_tuples) +
                            " random tuples (worst |diff| / 3 stderr)",
                        worst_ratio, 1.0));
  return out;
}

std::vector<CheckResult> check_combinatorics() {
  std::vector<CheckResult> out;
  for (int g = 1; g <= 4; ++g)
    for (int k = 0; k <= g; ++k)
      out.push_back(exact("B_{" + std::to_string(g) + "," + std::to_string(k) + "} = (-1)^k k! g!/(g-k)!",
                          enumerate_B(g, k), closed_form_B(g, k)));
  out.push_back(exact("A_3 = 1", enumerate_A(3, AVariant::Theta), 1));
  out.push_back(exact("A_4 = 36", enumerate_A(4, AVariant::Theta), 36));
  out.push_back(exact("A'_2 = 0", enumerate_A(2, AVariant::Dumbbell), 0));
  out.push_back(exact("A''_2 = 1", enumerate_A(2, AVariant::FigureEight), 1));
  const char* names[] = {"A", "A'", "A''"};
  for (int k = 3; k <= 5; ++k)
    for (AVariant v : {AVariant::Theta, AVariant::Dumbbell, AVariant::FigureEight})
      out.push_back(exact(std::string(names[static_cast<int>(v)]) + "_" + std::to_string(k) + " closed form",
                          enumerate_A(k, v), closed_form_A(k, v)));
  long long worst = 0;
  Rng rng(7, 7);
  for (int g = 1; g <= 20; ++g) {
    for (int deg = 0; deg < g; ++deg) {
      std::vector<long long> f(deg + 1);
      for (auto& c : f) c = static_cast<long long>(rng.next_u64() % 19) - 9;
      if (deg > 0 && f[deg] == 0) f[deg] = 1;
      worst = std::max(worst, std::llabs(binom_identity_check(g, f)));
    }
  }
  out.push_back(exact("alternating binomial sums vanish for deg f < g <= 20", worst, 0));
  for (int g = 3; g <= 20; ++g)
    if (alternating_pair_sum(g) != 1) {
      out.push_back(exact("sum (-1)^(k-1) C(k-1,2) C(g,k) = 1 at g=" + std::to_string(g), alternating_pair_sum(g), 1));
      return out;
    }
  out.push_back(exact("sum (-1)^(k-1) C(k-1,2) C(g,k) = 1 for 3 <= g <= 20", 1, 1));
  return out;
}

std::vector<CheckResult> check_bounds(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  const IntegrationConfig base = opts.config.integration();

  // Every bound on the curve corpus: the named curve, Table curves and random curves.
  std::vector<HyperellipticCurve> corpus{curve_of(opts.curve)};
  for (int n = 5; n <= 8; ++n) corpus.push_back(curve_xn_plus_one(n));
  for (int t = 0; t < 20; ++t) corpus.push_back(random_curve(2, opts.config.seed * 1000 + 200 + t));
  for (int t = 0; t < 5; ++t) corpus.push_back(random_curve(3, opts.config.seed * 1000 + 300 + t));
  std::vector<std::pair<std::string, double>> worst;
  auto record = [&](const BoundCheck& b) {
    for (auto& w : worst)
      if (w.first == b.name) {
        w.second = std::min(w.second, b.margin);
        return;
      }
    worst.emplace_back(b.name, b.margin);
  };
  ReportOptions ro;
  ro.monte_carlo_curve_integrals = false;
  ro.theta_sup_points = 2000;
  std::uint64_t tag = 0;
  for (const auto& c : corpus) {
    const CurveJacobian jac(c, opts.config.quad_order, opts.config.eps);
    const InvariantReport rep = curve_invariants(jac, tagged(base, 500 + tag++), ro);
    for (const auto& b : rep.bounds) record(b);
  }
  for (const auto& [name, margin] : worst)
    out.push_back(at_least(name + " (worst over " + std::to_string(corpus.size()) + " curves)", margin, 0.0));

  // Autissier on reduced-looking matrices.
  double autissier = 1e300;
  for (int g = 1; g <= 3; ++g) {
    const PeriodMatrix pm(reduced_looking_omega(g, opts.config.seed + 17 * g));
    Rng rng(opts.config.seed, 900 + g);
    for (std::size_t k = 0; k < opts.autissier_points; ++k)
      autissier = std::min(autissier, autissier_margin(pm, random_point(g, rng), opts.config.eps));
  }
  out.push_back(at_least("Autissier bound on " + std::to_string(opts.autissier_points) + " points (g=1..3)", autissier, 0.0));

  // Green sup over random pairs on the named curve.
  {
    const CurveJacobian jac(curve_of(opts.curve), opts.config.quad_order, opts.config.eps);
    if (jac.genus() >= 2 && opts.green_pairs) {
      ReportOptions gro;
      gro.monte_carlo_curve_integrals = false;
      gro.green_pairs = opts.green_pairs;
      const InvariantReport rep = curve_invariants(jac, tagged(base, 800), gro);
      for (const auto& b : rep.bounds)
        if (b.name.find("g(P,Q)") != std::string::npos)
          out.push_back(at_least(b.name + " over " + std::to_string(opts.green_pairs) + " pairs", b.margin, 0.0));
    }
  }
  return out;
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"theta", "periods", "identities", "rosenhain", "combinatorics", "bounds", "all"};
  return names;
}

std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "theta") {
    known = true;
    append(out, check_theta_numerics(opts));
    append(out, check_genus_one(opts));
  }
  if (all || suite == "periods") known = true, append(out, check_periods(opts));
  if (all || suite == "rosenhain") known = true, append(out, check_deterministic_identities(opts));
  if (all || suite == "identities") known = true, append(out, check_mc_identities(opts));
  if (all || suite == "combinatorics") known = true, append(out, check_combinatorics());
  if (all || suite == "bounds") known = true, append(out, check_bounds(opts));
  if (!known) throw Error(ErrorKind::InvalidInput, "unknown suite " + suite);
  return out;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

}  // namespace arakelov
