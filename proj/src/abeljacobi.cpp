#include "arakelov/abeljacobi.hpp"

#include <algorithm>
#include <cmath>

namespace arakelov {

namespace {

cplx sqrt_along(cplx x, cplx a, cplx ref) { return std::sqrt(ref - a) * std::sqrt((x - a) / (ref - a)); }

// prod_{k != skip} sqrt(x - a_k), continued from the reference point.
cplx sqrt_product(const std::vector<cplx>& pts, int skip, cplx x, cplx ref) {
  cplx r = 1.0;
  for (int k = 0; k < static_cast<int>(pts.size()); ++k)
    if (k != skip) r *= sqrt_along(x, pts[k], ref);
  return r;
}

CVec powers(cplx x, int g) {
  CVec v(g);
  cplx p = 1.0;
  for (int i = 0; i < g; ++i) {
    v(i) = p;
    p *= x;
  }
  return v;
}

double ray_clearance(const std::vector<cplx>& pts, int j, cplx d) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
    if (k == j) continue;
    const cplx rel = (pts[k] - pts[j]) * std::conj(d);
    best = std::min(best, rel.real() < 0.0 ? std::abs(rel) : std::abs(rel.imag()));
  }
  return best;
}

double nearest_other(const std::vector<cplx>& pts, int j) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(pts.size()); ++k)
    if (k != j) best = std::min(best, std::abs(pts[k] - pts[j]));
  return best;
}

// Integrals of x^i dx / y from branch point j out to infinity along direction d,
// with x = a_j + d L (t / (1 - t))^2.
CVec ray_integral(const HyperellipticCurve& curve, int j, cplx d, double tol) {
  const auto& pts = curve.branch_points();
  const int g = curve.genus();
  const cplx a = pts[j];
  const double L = nearest_other(pts, j);
  const cplx lead = 2.0 * std::sqrt(d * L);
  auto f = [&](double t) -> CVec {
    const double u = t / (1.0 - t);
    const cplx x = a + d * (L * u * u);
    const cplx s = sqrt_product(pts, j, x, a);
    return powers(x, g) * (lead / ((1.0 - t) * (1.0 - t) * s));
  };
  return integrate_adaptive(f, 0.0, 1.0, tol);
}

// Integrals of x^i dx / y from branch point j to x_end along the segment,
// x = a_j + (x_end - a_j) t^2; also returns y at the end of the path.
CVec segment_integral(const HyperellipticCurve& curve, int j, cplx x_end, double tol, cplx& y_end) {
  const auto& pts = curve.branch_points();
  const int g = curve.genus();
  const cplx a = pts[j];
  const cplx r = std::sqrt(x_end - a);
  y_end = r * sqrt_product(pts, j, x_end, a);
  auto f = [&](double t) -> CVec {
    const cplx x = a + (x_end - a) * (t * t);
    return powers(x, g) * (2.0 * r / sqrt_product(pts, j, x, a));
  };
  return integrate_adaptive(f, 0.0, 1.0, tol);
}

// Integrals of x^i dx / y from infinity straight in to x_end, x = x_end / v^2.
// Requires |x_end| > 2 max |a_k|.
CVec far_integral(const HyperellipticCurve& curve, cplx x_end, double tol, cplx& y_end) {
  const auto& pts = curve.branch_points();
  const int g = curve.genus();
  const cplx root = std::sqrt(x_end);
  const cplx root_pow = std::pow(root, 2 * g + 1);
  auto w = [&](double v) {
    cplx r = 1.0;
    for (cplx a : pts) r *= std::sqrt(1.0 - (a / x_end) * (v * v));
    return r;
  };
  y_end = root_pow * w(1.0);
  auto f = [&](double v) -> CVec {
    CVec out(g);
    const cplx inv = 1.0 / (root_pow * w(v));
    cplx xp = x_end;
    for (int i = 0; i < g; ++i) {
      out(i) = -2.0 * xp * std::pow(v, 2 * g - 2 - 2 * i) * inv;
      xp *= x_end;
    }
    return out;
  };
  return integrate_adaptive(f, 0.0, 1.0, tol);
}

bool use_far_route(const HyperellipticCurve& curve, cplx x) {
  return std::abs(x) > 2.0 * curve.max_modulus() + curve.min_gap();
}

int nearest_branch(const HyperellipticCurve& curve, cplx x) {
  const auto& pts = curve.branch_points();
  int best = 0;
  for (int k = 1; k < static_cast<int>(pts.size()); ++k)
    if (std::abs(pts[k] - x) < std::abs(pts[best] - x)) best = k;
  return best;
}

}  // namespace

CurveJacobian::CurveJacobian(HyperellipticCurve curve, int quad_order, double eps)
    : curve_(std::move(curve)),
      periods_(period_data(curve_, quad_order)),
      omega_(periods_.omega),
      eps_(eps) {
  const int g = curve_.genus();
  const auto& pts = curve_.branch_points();
  const int n = static_cast<int>(pts.size());

  for (int j = 0; j < n; ++j) {
    cplx best_dir = 1.0;
    double best = -1.0;
    for (int m = 0; m < 64; ++m) {
      const cplx d = std::polar(1.0, 2.0 * kPi * m / 64.0);
      const double c = ray_clearance(pts, j, d);
      if (c > best) {
        best = c;
        best_dir = d;
      }
    }
    if (best <= 1e-3 * curve_.min_gap())
      throw Error(ErrorKind::PathClearanceFailure, "no clear ray from a branch point to infinity");
    ray_dir_.push_back(best_dir);
    aj_branch_.push_back(-(periods_.normalization * ray_integral(curve_, j, best_dir, 1e-14)));
  }

  // The images of the branch points are half-periods; reading off their
  // characteristics fixes the dictionary without assuming the cycle conventions.
  const Mat& Yinv = omega_.im_inverse();
  std::vector<ThetaCharacteristic> eta;
  for (int j = 0; j < n; ++j) {
    const Vec t = Yinv * aj_branch_[j].imag();
    const Vec b = aj_branch_[j].real() - omega_.re() * t;
    unsigned top = 0, bottom = 0;
    for (int i = 0; i < g; ++i) {
      const double tt = 2.0 * t(i), bb = 2.0 * b(i);
      if (std::abs(tt - std::round(tt)) > 1e-6 || std::abs(bb - std::round(bb)) > 1e-6)
        throw Error(ErrorKind::CalibrationFailed, "branch point image is not a half-period");
      if (std::abs(static_cast<long long>(std::round(tt))) % 2) top |= 1u << i;
      if (std::abs(static_cast<long long>(std::round(bb))) % 2) bottom |= 1u << i;
    }
    eta.push_back(ThetaCharacteristic::from_bits(g, top, bottom));
  }
  eta.push_back(ThetaCharacteristic::zero(g));

  lower_inverse_ = omega_.im_factor().L.triangularView<Eigen::Lower>().solve(Mat::Identity(g, g));

  // Riemann constant: the half-period h for which theta(sum of g-1 points - h)
  // vanishes identically. Probe with a few effective divisors.
  std::vector<CVec> probes;
  if (g == 1) {
    probes.push_back(CVec::Zero(1));
  } else {
    for (int m = 0; m < 3; ++m) {
      CVec s = CVec::Zero(g);
      for (int i = 0; i < g - 1; ++i) {
        const CurvePoint p = generic_point(curve_, 1 + m * (g - 1) + i);
        cplx y_end;
        const int j = nearest_branch(curve_, p.x);
        CVec raw = segment_integral(curve_, j, p.x, 1e-14, y_end);
        if (std::abs(y_end + p.y) < std::abs(y_end - p.y)) raw = -raw;
        s += aj_branch_[j] + periods_.normalization * raw;
      }
      probes.push_back(s);
    }
  }
  double best = std::numeric_limits<double>::infinity(), second = best;
  ThetaCharacteristic best_chr = ThetaCharacteristic::zero(g);
  for (const auto& chr : all_characteristics(g)) {
    const CVec h = chr.half_period(omega_);
    double worst = -std::numeric_limits<double>::infinity();
    for (const CVec& s : probes) worst = std::max(worst, theta_norm_log(omega_, s - h, eps_).value);
    if (worst < best) {
      second = best;
      best = worst;
      best_chr = chr;
    } else {
      second = std::min(second, worst);
    }
  }
  if (best > kOnThetaThreshold || second < -8.0)
    throw Error(ErrorKind::CalibrationFailed, "Riemann constant search is ambiguous");
  kappa_ = best_chr.half_period(omega_);
  table_.emplace(std::move(eta), best_chr);

  const CharacteristicTable standard = CharacteristicTable::for_curve(curve_);
  matches_standard_ = standard.kappa() == table_->kappa();
  for (int j = 0; j < n; ++j) matches_standard_ = matches_standard_ && standard[j] == (*table_)[j];
}

CVec CurveJacobian::differentials(const CurvePoint& p) const {
  const int g = genus();
  if (p.infinity) return CVec::Zero(g);
  return periods_.normalization * powers(p.x, g) / p.y;
}

CVec CurveJacobian::orthonormal_differentials(const CurvePoint& p) const {
  return lower_inverse_.cast<cplx>() * differentials(p);
}

double CurveJacobian::mu_density(const CurvePoint& p) const {
  return orthonormal_differentials(p).squaredNorm() / genus();
}

AJPath plan_path(const CurveJacobian& jac, const CurvePoint& p, int via_branch) {
  AJPath path;
  path.end = p;
  if (p.infinity) return path;
  const auto& curve = jac.curve();
  if (via_branch < 0 && use_far_route(curve, p.x)) {
    path.waypoints = {p.x};
    return path;
  }
  const int j = via_branch >= 0 ? via_branch : nearest_branch(curve, p.x);
  path.branch = j;
  path.ray_direction = jac.ray_direction(j);
  path.waypoints = {curve.branch_points()[j], p.x};
  return path;
}

CVec aj_point(const CurveJacobian& jac, const CurvePoint& p, double tol, int via_branch) {
  const int g = jac.genus();
  if (p.infinity) return CVec::Zero(g);
  const auto& curve = jac.curve();
  const AJPath path = plan_path(jac, p, via_branch);
  CVec raw;
  cplx y_end;
  CVec base = CVec::Zero(g);
  if (path.branch < 0) {
    raw = far_integral(curve, p.x, tol, y_end);
  } else {
    base = jac.aj_branch(path.branch);
    if (std::abs(p.x - curve.branch_points()[path.branch]) == 0.0) return reduce(jac.omega(), base);
    raw = segment_integral(curve, path.branch, p.x, tol, y_end);
  }
  if (std::abs(y_end + p.y) < std::abs(y_end - p.y)) raw = -raw;
  return reduce(jac.omega(), base + jac.periods().normalization * raw);
}

Draw theta_at_class(const CurveJacobian& jac, const CVec& aj_sum) {
  return theta_norm_log(jac.omega(), aj_sum - jac.kappa(), jac.eps());
}

Draw theta_of_divisor(const CurveJacobian& jac, const Divisor& d,
                      const std::optional<std::pair<CurvePoint, CurvePoint>>& shift) {
  const int g = jac.genus();
  int degree = 0;
  CVec s = CVec::Zero(g);
  for (const auto& term : d) {
    degree += term.multiplicity;
    s += static_cast<double>(term.multiplicity) * aj_point(jac, term.point);
  }
  if (degree != g - 1) throw Error(ErrorKind::WrongDegree, "theta argument needs a divisor of degree g-1");
  if (shift) s += aj_point(jac, shift->first) - aj_point(jac, shift->second);
  return theta_at_class(jac, s);
}

CurvePoint generic_point(const HyperellipticCurve& curve, int which) {
  const cplx c = curve.centroid();
  const double scale = std::max(curve.max_modulus(), curve.min_gap());
  for (int attempt = 0;; ++attempt) {
    const double r = scale * (0.23 + 0.31 * std::fmod(0.618034 * (which + 1) + 0.1 * attempt, 1.0));
    const cplx x = c + std::polar(r, 0.7 + 2.39996 * which + 0.9 * attempt);
    bool clear = true;
    for (cplx a : curve.branch_points()) clear = clear && std::abs(x - a) > 0.2 * curve.min_gap();
    if (clear) return curve.point(x, 1);
  }
}

MuSampler::MuSampler(const CurveJacobian& jac, std::size_t pilot, std::uint64_t pilot_seed) : jac_(jac) {
  const auto& curve = jac.curve();
  center_ = curve.centroid();
  double spread = 0.0;
  for (cplx a : curve.branch_points()) spread = std::max(spread, std::abs(a - center_));
  radius_ = 2.0 * spread + curve.min_gap();
  cusp_radius_ = 0.5 * curve.min_gap();
  double worst = 0.0;
  for (std::size_t i = 0; i < pilot; ++i) {
    Rng rng(pilot_seed, i);
    const cplx x = propose(rng);
    const double ratio = 2.0 * jac.mu_density(curve.point(x, 1)) / proposal_density(x);
    worst = std::max(worst, ratio);
  }
  envelope_ = 1.5 * worst;
}

namespace {

cplx uniform_disk(Rng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  return std::polar(r, 2.0 * kPi * rng.uniform());
}

constexpr double kBaseWeight = 0.4, kTailWeight = 0.1, kCuspWeight = 0.5;

}  // namespace

cplx MuSampler::propose(Rng& rng) const {
  const auto& pts = jac_.curve().branch_points();
  const double u = rng.uniform();
  if (u < kBaseWeight) return center_ + uniform_disk(rng, radius_);
  if (u < kBaseWeight + kTailWeight) {
    cplx w = uniform_disk(rng, 1.0 / std::sqrt(radius_));
    while (std::abs(w) == 0.0) w = uniform_disk(rng, 1.0 / std::sqrt(radius_));
    return center_ + 1.0 / (w * w);
  }
  const int n = static_cast<int>(pts.size());
  const int j = std::min(n - 1, static_cast<int>((u - kBaseWeight - kTailWeight) / kCuspWeight * n));
  const cplx t = uniform_disk(rng, std::sqrt(cusp_radius_));
  return pts[j] + t * t;
}

double MuSampler::proposal_density(cplx x) const {
  const auto& pts = jac_.curve().branch_points();
  const double r = std::abs(x - center_);
  double q = r < radius_ ? kBaseWeight / (kPi * radius_ * radius_)
                         : kTailWeight * radius_ / (2.0 * kPi * r * r * r);
  const double each = kCuspWeight / static_cast<double>(pts.size());
  for (cplx a : pts) {
    const double d = std::abs(x - a);
    if (d < cusp_radius_) q += each / (2.0 * kPi * cusp_radius_ * d);
  }
  return q;
}

MuSampler::Sample MuSampler::sample(Rng& rng) const {
  const auto& curve = jac_.curve();
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const cplx x = propose(rng);
    const int sheet = rng.uniform() < 0.5 ? 1 : -1;
    const CurvePoint p = curve.point(x, sheet);
    const double rho = jac_.mu_density(p);
    const double ratio = 2.0 * rho / proposal_density(x);
    if (ratio > envelope_)
      throw Error(ErrorKind::EnvelopeTooSmall,
                  "mu/proposal ratio " + std::to_string(ratio) + " exceeds envelope " + std::to_string(envelope_));
    if (rng.uniform() * envelope_ < ratio) return {p, rho};
  }
  throw Error(ErrorKind::EnvelopeTooSmall, "rejection sampler made no progress");
}

double cb_weight(const CurveJacobian& jac, const std::vector<CurvePoint>& points) {
  const int k = static_cast<int>(points.size());
  const int g = jac.genus();
  if (k < 1 || k > g) throw Error(ErrorKind::InvalidInput, "cb_weight needs 1 <= k <= g points");
  CMat N(k, g);
  for (int m = 0; m < k; ++m) {
    const CVec row = jac.orthonormal_differentials(points[m]);
    N.row(m) = row.transpose() / row.norm();
  }
  const CMat G = N * N.adjoint();
  return std::tgamma(k + 1.0) * std::max(0.0, G.determinant().real());
}

namespace {

struct Drawn {
  std::vector<CurvePoint> points;
  std::vector<CVec> aj;
};

Drawn draw(const MuSampler& mu, Rng& rng, int k) {
  Drawn d;
  for (int i = 0; i < k; ++i) {
    d.points.push_back(mu.sample(rng).point);
    d.aj.push_back(aj_point(mu.jacobian(), d.points.back()));
  }
  return d;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

Estimate S_k(const MuSampler& mu, int k, const CurvePoint& q, const IntegrationConfig& config) {
  const CurveJacobian& jac = mu.jacobian();
  const int g = jac.genus();
  if (k < 1 || k > g) throw Error(ErrorKind::InvalidInput, "S_k needs 1 <= k <= g");
  const CVec aq = aj_point(jac, q);
  return integrate_random(config, [&](Rng& rng) {
    const Drawn d = draw(mu, rng, k);
    CVec s = static_cast<double>(g - k + 1) * d.aj[0] - aq;
    for (int i = 1; i < k; ++i) s += d.aj[i];
    return theta_at_class(jac, s);
  });
}

Estimate B_invariant(const MuSampler& mu, const IntegrationConfig& config) {
  const CurveJacobian& jac = mu.jacobian();
  const int g = jac.genus();
  if (g < 2) throw Error(ErrorKind::InvalidInput, "B needs g >= 2");
  return integrate_random(config, [&](Rng& rng) {
    const Drawn d = draw(mu, rng, g);
    CVec total = CVec::Zero(g);
    for (const CVec& a : d.aj) total += a;
    std::vector<CVec> lifts;
    for (int k = 0; k < g; ++k) lifts.push_back(total - d.aj[k] - jac.kappa());
    return J_norm_log(jac.omega(), lifts, jac.eps());
  });
}

Estimate theta_divisor_integral(const MuSampler& mu, const CurvePoint& p, const CurvePoint& q,
                                const IntegrationConfig& config) {
  const CurveJacobian& jac = mu.jacobian();
  const int g = jac.genus();
  if (g < 2) throw Error(ErrorKind::InvalidInput, "theta divisor integral needs g >= 2");
  if (!p.infinity && !q.infinity && std::abs(p.x - q.x) < 1e-12 && std::abs(p.y - q.y) < 1e-12)
    throw Error(ErrorKind::CoincidentPoints, "P and Q coincide");
  const CVec shift = aj_point(jac, p) - aj_point(jac, q);
  const double factor = std::pow(g, g - 1) / (factorial(g) * factorial(g - 1));
  return integrate_random(config, [&](Rng& rng) {
    const Drawn d = draw(mu, rng, g - 1);
    CVec s = shift;
    for (const CVec& a : d.aj) s += a;
    Draw v = theta_at_class(jac, s);
    v.value *= factor * cb_weight(jac, d.points);
    return v;
  });
}

Estimate theta_divisor_integral_mean(const MuSampler& mu, const CurvePoint& q, const IntegrationConfig& config) {
  const CurveJacobian& jac = mu.jacobian();
  const int g = jac.genus();
  if (g < 2) throw Error(ErrorKind::InvalidInput, "theta divisor integral needs g >= 2");
  const CVec aq = aj_point(jac, q);
  const double factor = std::pow(g, g - 1) / (factorial(g) * factorial(g - 1));
  return integrate_random(config, [&](Rng& rng) {
    const Drawn d = draw(mu, rng, g);
    CVec s = -aq;
    for (const CVec& a : d.aj) s += a;
    const std::vector<CurvePoint> rest(d.points.begin() + 1, d.points.end());
    Draw v = theta_at_class(jac, s);
    v.value *= factor * cb_weight(jac, rest);
    return v;
  });
}

Estimate green(const MuSampler& mu, const CurvePoint& p, const CurvePoint& q, const Estimate& a_invariant,
               const IntegrationConfig& config) {
  return combine({{1.0, theta_divisor_integral(mu, p, q, config)}, {1.0, a_invariant}});
}

Estimate lambda_jacobian(const MuSampler& mu, const IntegrationConfig& config) {
  const CurveJacobian& jac = mu.jacobian();
  const int g = jac.genus();
  if (g < 2) throw Error(ErrorKind::InvalidInput, "Lambda needs g >= 2");
  const double factor = std::pow(g, g - 1) / (factorial(g - 1) * factorial(g));
  return integrate_random(config, [&](Rng& rng) {
    const Drawn d = draw(mu, rng, g - 1);
    CVec s = -jac.kappa();
    for (const CVec& a : d.aj) s += a;
    Draw v = eta_norm_log(jac.omega(), s, jac.eps());
    v.value *= factor * cb_weight(jac, d.points);
    return v;
  });
}

std::pair<Estimate, Estimate> h_alt_estimators(const MuSampler& mu, const CurvePoint& q,
                                               const IntegrationConfig& config) {
  const CurveJacobian& jac = mu.jacobian();
  const int g = jac.genus();
  if (g < 2) throw Error(ErrorKind::InvalidInput, "h_alt_estimators needs g >= 2");
  const CVec aq = aj_point(jac, q);
  const double factor = std::pow(g, g) / (factorial(g) * factorial(g));
  Estimate first = integrate_random(config, [&](Rng& rng) {
    const Drawn d = draw(mu, rng, g);
    CVec s = -aq;
    for (const CVec& a : d.aj) s += a;
    Draw v = theta_at_class(jac, s);
    v.value *= factor * cb_weight(jac, d.points);
    return v;
  });
  IntegrationConfig second_config = config;
  second_config.seed = mix64(config.seed ^ 0x2b);
  Estimate second = integrate_random(second_config, [&](Rng& rng) {
    const Drawn d = draw(mu, rng, g);
    CVec s = 2.0 * d.aj[0] - d.aj[g - 1];
    for (int i = 1; i < g - 1; ++i) s += d.aj[i];
    Draw v = theta_at_class(jac, s);
    v.value *= factor * cb_weight(jac, d.points);
    return v;
  });
  return {first, second};
}

}  // namespace arakelov
