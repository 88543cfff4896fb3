#include "arakelov/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace arakelov {

namespace {

const double kLog2Pi = std::log(2.0 * kPi);

double n_binom(int g) { return static_cast<double>(binomial(2 * g, g - 1)); }

IntegrationConfig reseeded(const IntegrationConfig& c, std::uint64_t tag) {
  IntegrationConfig out = c;
  out.seed = mix64(c.seed ^ (tag * 0x9e3779b97f4a7c15ULL));
  return out;
}

std::string compact(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

double default_r(int g) { return g <= 5 ? 6.0 / g - 1.0 : 1.0 / g; }

}  // namespace

Estimate H_invariant(const PeriodMatrix& omega, const IntegrationConfig& config, double eps) {
  const int g = omega.genus();
  return integrate(2 * g, config, [&](std::span<const double> u) {
    CVec z(g);
    Vec x(g), y(g);
    for (int i = 0; i < g; ++i) {
      x(i) = u[i];
      y(i) = u[g + i];
    }
    z = x.cast<cplx>() + omega.omega() * y.cast<cplx>();
    return theta_norm_log(omega, z, eps);
  });
}

DeltaPhi hyperelliptic_delta_phi(int g, const Estimate& H, double log_delta) {
  const double n = n_binom(g);
  DeltaPhi out;
  out.log_delta = log_delta;
  out.delta = combine({{-8.0 * (g - 1) / g, H}}, -log_delta / n - 8.0 * g * kLog2Pi);
  out.phi = combine({{4.0 * (2 * g + 1) / g, H}}, -0.5 * log_delta / n);
  return out;
}

double delta_from_H_phi(int g, double H, double phi) { return -24.0 * H + 2.0 * phi - 8.0 * g * kLog2Pi; }

AbelianExtensions abelian_extensions(int g, const Estimate& H, const Estimate& lambda) {
  AbelianExtensions out;
  out.delta = combine({{2.0 * (g - 7), H}, {-2.0, lambda}}, -4.0 * g * kLog2Pi);
  out.phi = combine({{g + 5.0, H}, {-1.0, lambda}}, 2.0 * g * kLog2Pi);
  out.beta = combine({{2.0 * (g - 4) * (g + 1), H}, {-2.0 * g, lambda}}, -(4.0 * g * (g + 2) / 3.0) * kLog2Pi);
  return out;
}

Estimate bost_constant(int g, const Estimate& H, double log_delta) {
  const double n = n_binom(g);
  return combine({{2.0 * (2 * g + 1) / (g * g) - 1.0, H}}, -log_delta / (4.0 * g * n));
}

Estimate delta_via_green_integral(const MuSampler& mu, const CurvePoint& q, const Estimate& H,
                                  const IntegrationConfig& config) {
  const int g = mu.jacobian().genus();
  const Estimate mean = theta_divisor_integral_mean(mu, q, config);
  return combine({{-4.0 * g, mean}, {4.0 * g - 24.0, H}}, -8.0 * g * kLog2Pi);
}

cplx j_invariant(const PeriodMatrix& omega) {
  if (omega.genus() != 1) throw Error(ErrorKind::InvalidInput, "j-invariant needs genus 1");
  const CVec zero = CVec::Zero(1);
  const LogComplex t00 = theta_log(omega, zero, ThetaCharacteristic::from_bits(1, 0, 0));
  const LogComplex t10 = theta_log(omega, zero, ThetaCharacteristic::from_bits(1, 1, 0));
  const cplx lambda = std::exp(4.0 * (t10.logmod - t00.logmod)) * std::pow(t10.phase / t00.phase, 4);
  const cplx num = 1.0 - lambda + lambda * lambda;
  return 256.0 * num * num * num / (lambda * lambda * (1.0 - lambda) * (1.0 - lambda));
}

std::vector<BoundCheck> bounds_report(const BoundInputs& in) {
  const int g = in.genus;
  const double r = in.r.value_or(default_r(g));
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "bound parameter r must be positive");
  const double log_c = std::log(autissier_constant(g));
  std::vector<BoundCheck> out;
  out.push_back({"H < -(g/4) log 2", -0.25 * g * std::log(2.0) - in.H});
  if (in.check_det_bound) {
    for (double s : in.s_values) {
      if (s < 0.0) throw Error(ErrorKind::InvalidInput, "Ybound needs s >= 0");
      out.push_back({"s log det Y + H bound (s=" + compact(s) + ")",
                     g * (s + 0.25) * std::log((4.0 * s + 1.0) / 2.0) - s * in.log_det_im - in.H});
    }
  }
  if (in.theta_sup)
    out.push_back({"log||theta|| + rH bound", log_c + 0.25 * g * (1 + r) * std::log((1 + r) / (2 * r)) -
                                                  (*in.theta_sup + r * in.H)});
  if (in.phi) out.push_back({"phi > 0", *in.phi});
  if (in.delta) out.push_back({"delta > -2g log(2 pi^4)", *in.delta + 2.0 * g * std::log(2.0 * std::pow(kPi, 4))});
  if (in.log_delta && g >= 1) {
    const double n = n_binom(g);
    out.push_back({"log||Delta_g|| bound", -2.0 * (2 * g + 1) * n * std::log(2.0) - *in.log_delta});
    if (in.delta && g >= 2) {
      const double shifted = *in.delta + 8.0 * g * kLog2Pi;
      out.push_back({"delta interval (lower)", shifted - (-(*in.log_delta) / n + 2.0 * (g - 1) * std::log(2.0))});
      out.push_back({"delta interval (upper)", -3.0 * g / ((2 * g + 1) * n) * *in.log_delta - shifted});
    }
  }
  if (in.green_sup && in.delta) {
    if (r < 6.0 / g - 1.0) throw Error(ErrorKind::InvalidInput, "Green bound needs r >= 6/g - 1");
    const double bound = (1 + r) / 24.0 * *in.delta + g * (1 + r) / 3.0 * kLog2Pi + log_c +
                         0.25 * g * (1 + r) * std::log((1 + r) / (2 * r));
    out.push_back({"sup g(P,Q) bound", bound - *in.green_sup});
    const double explicit_bound =
        std::max(6, g + 1) * *in.delta / (24.0 * g) + 0.75 * g * std::log(static_cast<double>(g)) + 4.0;
    out.push_back({"sup g(P,Q) explicit bound", explicit_bound - *in.green_sup});
  }
  return out;
}

double theta_sup_sample(const PeriodMatrix& omega, std::size_t count, std::uint64_t seed, double eps) {
  const int g = omega.genus();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed, i);
    Vec x(g), y(g);
    for (int k = 0; k < g; ++k) {
      x(k) = rng.uniform();
      y(k) = rng.uniform();
    }
    const CVec z = x.cast<cplx>() + omega.omega() * y.cast<cplx>();
    best = std::max(best, theta_norm_log(omega, z, eps).value);
  }
  return best;
}

const ReportEntry* InvariantReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

bool InvariantReport::bounds_ok() const {
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.ok(); });
}

InvariantReport period_invariants(const PeriodMatrix& omega, const IntegrationConfig& config, double eps,
                                  const ReportOptions& options) {
  const int g = omega.genus();
  InvariantReport rep;
  rep.genus = g;
  rep.config = config;
  rep.eps = eps;
  const Estimate H = H_invariant(omega, config, eps);
  rep.entries.push_back({"H", H, "monte-carlo"});
  BoundInputs in;
  in.genus = g;
  in.H = H.value;
  in.log_det_im = omega.log_det_im();
  // The determinant lemma is asserted only on matrices from the curve pipeline.
  in.check_det_bound = false;
  if (g <= 3) {
    const double ld = delta_g_log(omega, DiscriminantMode::GeneralSum);
    rep.entries.push_back({"log_Delta_g", Estimate::exact(ld), "closed-form:general-sum"});
    in.log_delta = ld;
  }
  if (g == 1) {
    const double delta = -24.0 * H.value - 8.0 * kLog2Pi;
    rep.entries.push_back({"delta", combine({{-24.0, H}}, -8.0 * kLog2Pi), "closed-form:delta(H,phi=0)"});
    in.delta = delta;
  } else {
    rep.notes.push_back("Lambda unavailable without a curve; delta, phi and beta_g extensions not computed");
  }
  if (options.theta_sup_points) in.theta_sup = theta_sup_sample(omega, options.theta_sup_points, config.seed, eps);
  rep.bounds = bounds_report(in);
  return rep;
}

InvariantReport curve_invariants(const CurveJacobian& jac, const IntegrationConfig& config,
                                 const ReportOptions& options) {
  const int g = jac.genus();
  const PeriodMatrix& omega = jac.omega();
  InvariantReport rep;
  rep.genus = g;
  rep.config = config;
  rep.eps = jac.eps();

  const Estimate H = H_invariant(omega, config, jac.eps());
  rep.entries.push_back({"H", H, "monte-carlo"});
  BoundInputs in;
  in.genus = g;
  in.H = H.value;
  in.log_det_im = omega.log_det_im();

  if (g == 1) {
    const double ld = delta_g_log(omega, DiscriminantMode::GeneralSum);
    rep.entries.push_back({"log_Delta_g", Estimate::exact(ld), "closed-form:general-sum"});
    const Estimate delta = combine({{-24.0, H}}, -8.0 * kLog2Pi);
    rep.entries.push_back({"delta", delta, "closed-form:delta(H,phi=0)"});
    rep.entries.push_back({"phi", Estimate::exact(0.0), "closed-form:genus-one"});
    const cplx j = j_invariant(omega);
    rep.entries.push_back({"j_re", Estimate::exact(j.real()), "closed-form:theta-constants"});
    rep.entries.push_back({"j_im", Estimate::exact(j.imag()), "closed-form:theta-constants"});
    in.delta = delta.value;
    in.log_delta = ld;
    if (options.theta_sup_points) in.theta_sup = theta_sup_sample(omega, options.theta_sup_points, config.seed, jac.eps());
    rep.bounds = bounds_report(in);
    return rep;
  }

  const double ld = delta_g_log(omega, DiscriminantMode::HyperellipticProduct, &jac.table());
  rep.entries.push_back({"log_Delta_g", Estimate::exact(ld), "closed-form:theta-constant-product"});
  const DeltaPhi dp = hyperelliptic_delta_phi(g, H, ld);
  rep.entries.push_back({"delta", dp.delta, "closed-form:hyperelliptic(H,Delta)"});
  rep.entries.push_back({"phi", dp.phi, "closed-form:hyperelliptic(H,Delta)"});
  const Estimate A = bost_constant(g, H, ld);
  rep.entries.push_back({"A", A, "closed-form:phi/2g-H"});
  in.delta = dp.delta.value;
  in.phi = dp.phi.value;
  in.log_delta = ld;

  if (options.monte_carlo_curve_integrals || options.green_pairs) {
    const MuSampler mu(jac);
    const CurvePoint q = generic_point(jac.curve());
    if (options.monte_carlo_curve_integrals) {
      rep.entries.push_back({"S_1", S_k(mu, 1, q, reseeded(config, 1)), "monte-carlo"});
      rep.entries.push_back({"S_g", S_k(mu, g, q, reseeded(config, 2)), "monte-carlo"});
      rep.entries.push_back({"B", B_invariant(mu, reseeded(config, 3)), "monte-carlo"});
      const Estimate lambda = lambda_jacobian(mu, reseeded(config, 4));
      rep.entries.push_back({"Lambda", lambda, "monte-carlo"});
      const AbelianExtensions ext = abelian_extensions(g, H, lambda);
      rep.entries.push_back({"delta_ab", ext.delta, "closed-form:extension(H,Lambda)"});
      rep.entries.push_back({"phi_ab", ext.phi, "closed-form:extension(H,Lambda)"});
      rep.entries.push_back({"beta_g", ext.beta, "closed-form:extension(H,Lambda)"});
    }
    if (options.green_pairs) {
      IntegrationConfig small = reseeded(config, 5);
      small.samples = std::max<std::size_t>(small.batches, config.samples / 16);
      double sup = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < options.green_pairs; ++i) {
        Rng rng(mix64(config.seed ^ 0x67726e), i);
        const CurvePoint p = mu.sample(rng).point;
        const CurvePoint r = mu.sample(rng).point;
        sup = std::max(sup, green(mu, p, r, A, small).value);
      }
      rep.entries.push_back({"green_sup_sampled", Estimate::exact(sup), "monte-carlo:max over pairs"});
      in.green_sup = sup;
    }
  }
  if (options.theta_sup_points) in.theta_sup = theta_sup_sample(omega, options.theta_sup_points, config.seed, jac.eps());
  rep.bounds = bounds_report(in);
  return rep;
}

}  // namespace arakelov
