#include "arakelov/hyperelliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace arakelov {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0.0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double segment_distance(cplx a, cplx b, cplx c, cplx d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d), point_segment_distance(c, a, b),
                   point_segment_distance(d, a, b)});
}

// A layout is usable when no branch point comes close to a segment it does not
// end on and non-adjacent segments stay apart.
bool layout_is_simple(const std::vector<cplx>& pts, const std::vector<int>& order, double clearance) {
  const int n = static_cast<int>(order.size());
  for (int i = 0; i + 1 < n; ++i) {
    const cplx a = pts[order[i]], b = pts[order[i + 1]];
    for (int k = 0; k < n; ++k) {
      if (k == i || k == i + 1) continue;
      if (point_segment_distance(pts[order[k]], a, b) < clearance) return false;
    }
    for (int j = i + 2; j + 1 < n; ++j)
      if (segment_distance(a, b, pts[order[j]], pts[order[j + 1]]) < clearance) return false;
  }
  return true;
}

std::vector<int> choose_layout(const std::vector<cplx>& pts, double clearance) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (layout_is_simple(pts, order, clearance)) return order;

  cplx c = 0.0;
  for (cplx p : pts) c += p;
  c /= static_cast<double>(n);
  std::vector<int> by_angle = order;
  std::stable_sort(by_angle.begin(), by_angle.end(),
                   [&](int i, int j) { return std::arg(pts[i] - c) < std::arg(pts[j] - c); });
  // Start after the widest angular gap so the open polyline skips it.
  int start = 0;
  double widest = -1.0;
  for (int i = 0; i < n; ++i) {
    const double a0 = std::arg(pts[by_angle[i]] - c);
    const double a1 = std::arg(pts[by_angle[(i + 1) % n]] - c) + (i + 1 == n ? 2 * kPi : 0.0);
    if (a1 - a0 > widest) {
      widest = a1 - a0;
      start = (i + 1) % n;
    }
  }
  std::rotate(by_angle.begin(), by_angle.begin() + start, by_angle.end());
  if (layout_is_simple(pts, by_angle, clearance)) return by_angle;

  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (cplx p : pts) {
    Eigen::Vector2d v(p.real() - c.real(), p.imag() - c.imag());
    cov += v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  const Eigen::Vector2d axis = es.eigenvectors().col(1);
  std::vector<int> by_axis = order;
  std::stable_sort(by_axis.begin(), by_axis.end(), [&](int i, int j) {
    return axis.dot(Eigen::Vector2d(pts[i].real(), pts[i].imag())) <
           axis.dot(Eigen::Vector2d(pts[j].real(), pts[j].imag()));
  });
  if (layout_is_simple(pts, by_axis, clearance)) return by_axis;
  throw Error(ErrorKind::BadCutLayout, "no simple polyline through the branch points");
}

// sqrt(x - a) continued along a segment with midpoint m that stays away from a.
cplx sqrt_along(cplx x, cplx a, cplx m) { return std::sqrt(m - a) * std::sqrt((x - a) / (m - a)); }

// Integrals of x^i dx / y, i < g, along the segment from layout point s to s+1
// on one sheet, times two (the cycle around the segment).
CVec segment_cycle(const HyperellipticCurve& curve, int s, int n) {
  const int g = curve.genus();
  const cplx p = curve.layout_point(s), q = curve.layout_point(s + 1);
  const cplx m = 0.5 * (p + q), h = 0.5 * (q - p);
  const auto& pts = curve.branch_points();
  const int ip = curve.layout()[s], iq = curve.layout()[s + 1];
  CVec acc = CVec::Zero(g);
  for (int l = 1; l <= n; ++l) {
    const double t = std::cos((2.0 * l - 1.0) * kPi / (2.0 * n));
    const cplx x = m + h * t;
    cplx rest = 1.0;
    for (int j = 0; j < static_cast<int>(pts.size()); ++j)
      if (j != ip && j != iq) rest *= sqrt_along(x, pts[j], m);
    cplx xp = 1.0 / rest;
    for (int i = 0; i < g; ++i) {
      acc(i) += xp;
      xp *= x;
    }
  }
  return acc * cplx(0.0, -2.0 * kPi / n);
}

std::vector<CVec> all_segment_cycles(const HyperellipticCurve& curve, int quad_order, int& used_order) {
  const int segments = 2 * curve.genus();
  constexpr int kMaxOrder = 1 << 16;
  int n = quad_order;
  std::vector<CVec> prev(segments);
  for (int s = 0; s < segments; ++s) prev[s] = segment_cycle(curve, s, n);
  while (true) {
    if (2 * n > kMaxOrder) {
      used_order = n;
      return prev;
    }
    std::vector<CVec> next(segments);
    double change = 0.0, scale = 0.0;
    for (int s = 0; s < segments; ++s) {
      next[s] = segment_cycle(curve, s, 2 * n);
      change = std::max(change, (next[s] - prev[s]).cwiseAbs().maxCoeff());
      scale = std::max(scale, next[s].cwiseAbs().maxCoeff());
    }
    n *= 2;
    prev = std::move(next);
    if (change <= 1e-14 * scale) {
      used_order = n;
      return prev;
    }
  }
}

}  // namespace

HyperellipticCurve::HyperellipticCurve(std::vector<cplx> branch_points, std::string label)
    : points_(std::move(branch_points)), label_(std::move(label)) {
  const int n = static_cast<int>(points_.size());
  if (n % 2 == 0) throw Error(ErrorKind::EvenCount, "need an odd number of finite branch points");
  if (n < 3) throw Error(ErrorKind::InvalidInput, "need at least 3 branch points");
  for (cplx a : points_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw Error(ErrorKind::InvalidInput, "branch point is not finite");
    max_modulus_ = std::max(max_modulus_, std::abs(a));
  }
  min_gap_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) min_gap_ = std::min(min_gap_, std::abs(points_[i] - points_[j]));
  if (min_gap_ < 1e-6 * std::max(1.0, max_modulus_))
    throw Error(ErrorKind::DuplicateBranchPoint, "branch points closer than 1e-6");
  genus_ = (n - 1) / 2;
  layout_ = choose_layout(points_, 0.05 * min_gap_);
}

cplx HyperellipticCurve::f(cplx x) const {
  cplx r = 1.0;
  for (cplx a : points_) r *= x - a;
  return r;
}

CurvePoint HyperellipticCurve::point(cplx x, int sheet) const {
  const cplx y = std::sqrt(f(x));
  return {x, sheet >= 0 ? y : -y, false};
}

CurvePoint HyperellipticCurve::weierstrass(int j) const {
  if (j == 2 * genus_ + 1) return CurvePoint::at_infinity();
  return {points_.at(j), cplx(0.0), false};
}

bool HyperellipticCurve::on_curve(const CurvePoint& p) const {
  if (p.infinity) return true;
  const cplx fx = f(p.x);
  return std::abs(p.y * p.y - fx) < 1e-8 * (1.0 + std::abs(fx));
}

cplx HyperellipticCurve::centroid() const {
  cplx c = 0.0;
  for (cplx a : points_) c += a;
  return c / static_cast<double>(points_.size());
}

HyperellipticCurve curve_xn_plus_one(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidInput, "x^n + 1 needs n >= 3");
  std::vector<cplx> roots(n);
  for (int k = 0; k < n; ++k) roots[k] = std::polar(1.0, kPi * (2.0 * k + 1.0) / n);
  const std::string label = "xn+1:" + std::to_string(n);
  if (n % 2 == 1) return HyperellipticCurve(roots, label);
  const cplx r = roots.back();
  std::vector<cplx> moved;
  for (int k = 0; k + 1 < n; ++k) moved.push_back(1.0 / (roots[k] - r));
  return HyperellipticCurve(moved, label);
}

HyperellipticCurve random_curve(int g, std::uint64_t seed, double min_gap) {
  if (g < 1) throw Error(ErrorKind::InvalidInput, "genus must be positive");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed, attempt);
    std::vector<cplx> pts;
    bool ok = true;
    while (ok && static_cast<int>(pts.size()) < 2 * g + 1) {
      const cplx a(4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0);
      for (const cplx& b : pts) ok &= std::abs(a - b) >= min_gap;
      pts.push_back(a);
    }
    if (ok) return HyperellipticCurve(std::move(pts), "random:" + std::to_string(g) + ":" + std::to_string(seed));
  }
}

HyperellipticCurve move_to_infinity(const HyperellipticCurve& curve, int j) {
  const auto& pts = curve.branch_points();
  std::vector<cplx> moved;
  for (int k = 0; k < static_cast<int>(pts.size()); ++k)
    if (k != j) moved.push_back(1.0 / (pts[k] - pts.at(j)));
  moved.push_back(0.0);
  return HyperellipticCurve(moved, curve.label());
}

CharacteristicTable::CharacteristicTable(std::vector<ThetaCharacteristic> eta, ThetaCharacteristic kappa)
    : eta_(std::move(eta)), kappa_(std::move(kappa)) {
  if (static_cast<int>(eta_.size()) != 2 * kappa_.genus() + 2)
    throw Error(ErrorKind::InvalidInput, "characteristic table needs 2g+2 entries");
}

CharacteristicTable CharacteristicTable::standard(int g) {
  if (g < 1) throw Error(ErrorKind::InvalidInput, "genus must be >= 1");
  std::vector<ThetaCharacteristic> eta;
  for (int k = 1; k <= g + 1; ++k) {
    const unsigned top = k <= g ? 1u << (k - 1) : 0u;
    eta.push_back(ThetaCharacteristic::from_bits(g, top, (1u << (k - 1)) - 1));
    if (k <= g) eta.push_back(ThetaCharacteristic::from_bits(g, top, (1u << k) - 1));
  }
  eta.push_back(ThetaCharacteristic::zero(g));
  ThetaCharacteristic kappa = ThetaCharacteristic::zero(g);
  for (int k = 0; k <= 2 * g; k += 2) kappa = kappa + eta[k];
  return CharacteristicTable(std::move(eta), kappa);
}

CharacteristicTable CharacteristicTable::for_curve(const HyperellipticCurve& curve) {
  const int g = curve.genus();
  const CharacteristicTable base = standard(g);
  std::vector<ThetaCharacteristic> eta(2 * g + 2, ThetaCharacteristic::zero(g));
  for (int i = 0; i <= 2 * g; ++i) eta[curve.layout()[i]] = base[i];
  return CharacteristicTable(std::move(eta), base.kappa());
}

ThetaCharacteristic CharacteristicTable::of_set(const std::vector<int>& set) const {
  ThetaCharacteristic r = ThetaCharacteristic::zero(genus());
  for (int j : set) r = r + eta_.at(j);
  return r;
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

PeriodData period_data(const HyperellipticCurve& curve, int quad_order) {
  if (quad_order < 32) throw Error(ErrorKind::InvalidInput, "quad_order must be >= 32");
  const int g = curve.genus();
  PeriodData out;
  const std::vector<CVec> cycles = all_segment_cycles(curve, quad_order, out.quad_order);

  // Orientations of the segment cycles are not known a priori; the right ones
  // make the basis symplectic, which shows up as a symmetric period matrix.
  double best = std::numeric_limits<double>::infinity();
  const unsigned choices = 1u << (2 * g - 1);
  for (unsigned bits = 0; bits < choices; ++bits) {
    std::vector<int> sign(2 * g, 1);
    for (int s = 1; s < 2 * g; ++s)
      if (bits & (1u << (s - 1))) sign[s] = -1;
    CMat A(g, g), B = CMat::Zero(g, g);
    for (int k = 0; k < g; ++k) {
      A.col(k) = static_cast<double>(sign[2 * k]) * cycles[2 * k];
      for (int j = k; j < g; ++j) B.col(k) += static_cast<double>(sign[2 * j + 1]) * cycles[2 * j + 1];
    }
    Eigen::PartialPivLU<CMat> lu(A);
    const CMat C = lu.inverse();
    const CMat omega = (C * B).transpose();
    const double residual = (omega - omega.transpose()).cwiseAbs().maxCoeff() / (1.0 + omega.cwiseAbs().maxCoeff());
    if (residual >= best) continue;
    const Mat Y = 0.5 * (omega.imag() + omega.imag().transpose());
    if (Eigen::LLT<Mat>(Y).info() != Eigen::Success) continue;
    best = residual;
    out.a_periods = A;
    out.b_periods = B;
    out.normalization = C;
    out.omega = omega;
    out.signs = sign;
    out.symmetry_residual = residual;
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::NotPositiveDefinite, "no orientation gives Im(Omega) > 0");
  if (best > 1e-7)
    throw Error(ErrorKind::NonSymmetric, "period matrix symmetry residual " + std::to_string(best));
  return out;
}

PeriodMatrix period_matrix(const HyperellipticCurve& curve, int quad_order) {
  return PeriodMatrix(period_data(curve, quad_order).omega);
}

double phi_g_log(const PeriodMatrix& omega, const CharacteristicTable& table) {
  const int g = omega.genus();
  const CVec zero = CVec::Zero(g);
  double total = 0.0;
  for (const auto& T : subsets(2 * g + 1, g + 1)) {
    const Draw d = theta_norm_log(omega, zero, table.divisor_class(T));
    if (d.censored) throw Error(ErrorKind::VanishingEvenThetaConstant, "even theta constant vanishes");
    total += 8.0 * d.value;
  }
  return total;
}

double phi_g_log_all_infinities(const PeriodMatrix& omega, const CharacteristicTable& table) {
  const int g = omega.genus();
  const CVec zero = CVec::Zero(g);
  double total = 0.0;
  for (const auto& T : subsets(2 * g + 2, g + 1)) {
    const Draw d = theta_norm_log(omega, zero, table.divisor_class(T));
    if (d.censored) throw Error(ErrorKind::VanishingEvenThetaConstant, "even theta constant vanishes");
    total += 4.0 * d.value;
  }
  return total;
}

double delta_g_log(const PeriodMatrix& omega, DiscriminantMode mode, const CharacteristicTable* table) {
  const int g = omega.genus();
  const double shift = -4.0 * (g + 1) * static_cast<double>(binomial(2 * g, g - 1)) * std::log(2.0);
  if (mode == DiscriminantMode::HyperellipticProduct) {
    const CharacteristicTable fallback = CharacteristicTable::standard(g);
    return phi_g_log(omega, table ? *table : fallback) + shift;
  }
  if (g > 3) throw Error(ErrorKind::GenusTooLarge, "general-sum discriminant needs g <= 3");
  const int r = static_cast<int>(binomial(2 * g + 1, g + 1));
  // theta[eta](0)^8 for the nonvanishing constants, each as scale * unit-size value.
  std::vector<cplx> unit;
  std::vector<double> logs;
  for (const auto& chr : even_characteristics(g)) {
    const ThetaSum s = theta_sum(omega, CVec::Zero(g), chr, 0);
    if (s.censored()) continue;
    const cplx v = s.value;
    logs.push_back(8.0 * (std::log(std::abs(v)) + s.log_scale));
    unit.push_back(std::pow(v / std::abs(v), 8));
  }
  const int n = static_cast<int>(unit.size());
  if (n < r) throw Error(ErrorKind::VanishingEvenThetaConstant, "fewer nonvanishing constants than r");
  const double top = *std::max_element(logs.begin(), logs.end());
  // Elementary symmetric polynomial e_r of the rescaled values.
  std::vector<cplx> e(r + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    const cplx v = unit[i] * std::exp(logs[i] - top);
    for (int k = std::min(i + 1, r); k >= 1; --k) e[k] += e[k - 1] * v;
  }
  if (std::abs(e[r]) == 0.0) throw Error(ErrorKind::VanishingEvenThetaConstant, "discriminant sum vanishes");
  return shift + 2.0 * r * omega.log_det_im() + r * top + std::log(std::abs(e[r]));
}

Draw J_weierstrass_log(const PeriodMatrix& omega, const CharacteristicTable& table, const std::vector<int>& points) {
  const int g = omega.genus();
  if (static_cast<int>(points.size()) != g) throw Error(ErrorKind::InvalidInput, "need g Weierstrass points");
  std::vector<CVec> lifts;
  for (int k = 0; k < g; ++k) {
    std::vector<int> rest;
    for (int i = 0; i < g; ++i)
      if (i != k) rest.push_back(points[i]);
    lifts.push_back(table.divisor_class(rest).half_period(omega));
  }
  return J_norm_log(omega, lifts);
}

double rosenhain_residual(const PeriodMatrix& omega, const CharacteristicTable& table, const std::vector<int>& perm) {
  const int g = omega.genus();
  if (static_cast<int>(perm.size()) != 2 * g + 2) throw Error(ErrorKind::InvalidInput, "need a permutation of 2g+2");
  const std::vector<int> head(perm.begin(), perm.begin() + g);
  const double lhs = J_weierstrass_log(omega, table, head).value;
  double rhs = g * std::log(kPi);
  for (int j = g; j < 2 * g + 2; ++j) {
    std::vector<int> set = head;
    set.push_back(perm[j]);
    rhs += theta_norm_log(omega, CVec::Zero(g), table.divisor_class(set)).value;
  }
  return std::abs(lhs - rhs);
}

double jacobian_product_residual(const PeriodMatrix& omega, const CharacteristicTable& table) {
  const int g = omega.genus();
  double lhs = 0.0;
  for (const auto& S : subsets(2 * g + 2, g)) lhs += J_weierstrass_log(omega, table, S).value;
  const double rhs = static_cast<double>(binomial(2 * g + 2, g)) * g * std::log(kPi) +
                     0.25 * (g + 1) * phi_g_log(omega, table);
  return lhs - rhs;
}

}  // namespace arakelov
