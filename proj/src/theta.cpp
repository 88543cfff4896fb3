#include "arakelov/theta.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace arakelov {

namespace {

// Visits every n in Z^g with ||T (n + s)|| <= R for upper triangular T,
// calling visit(u, squared_norm) with u = n + s.
template <class Visit>
struct EllipsoidWalk {
  const Mat& T;
  const Vec& s;
  double R2;
  Visit& visit;
  Vec u;

  void level(int i, double partial) {
    const int g = static_cast<int>(T.rows());
    double t = 0.0;
    for (int j = i + 1; j < g; ++j) t += T(i, j) * u(j);
    const double tii = T(i, i);
    const double center = -s(i) - t / tii;
    const double room = R2 - partial;
    if (room < 0.0) return;
    const double hw = std::sqrt(room) / tii;
    const double lo = std::ceil(center - hw), hi = std::floor(center + hw);
    for (double n = lo; n <= hi; n += 1.0) {
      u(i) = n + s(i);
      const double term = tii * u(i) + t;
      const double next = partial + term * term;
      if (next > R2) continue;
      if (i == 0) visit(u, next);
      else level(i - 1, next);
    }
  }
};

template <class Visit>
void enumerate_ellipsoid(const Mat& T, const Vec& s, double R, Visit&& visit) {
  EllipsoidWalk<std::remove_reference_t<Visit>> walk{T, s, R * R, visit, Vec::Zero(T.rows())};
  walk.level(static_cast<int>(T.rows()) - 1, 0.0);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double upper_incomplete_gamma_half(double s, double x) {
  const int twice = static_cast<int>(std::lround(2.0 * s));
  if (twice < 1 || std::abs(2.0 * s - twice) > 1e-12)
    throw Error(ErrorKind::InvalidInput, "incomplete gamma needs s in (1/2)Z, s > 0");
  double a, value;
  if (twice % 2 == 0) {
    a = 1.0;
    value = std::exp(-x);
  } else {
    a = 0.5;
    value = std::sqrt(kPi) * std::erfc(std::sqrt(x));
  }
  while (a < s - 1e-12) {
    value = a * value + std::pow(x, a) * std::exp(-x);
    a += 1.0;
  }
  return value;
}

PeriodMatrix::PeriodMatrix(const CMat& omega) {
  if (omega.rows() != omega.cols() || omega.rows() < 1)
    throw Error(ErrorKind::InvalidInput, "period matrix must be square with genus >= 1");
  if (!omega.allFinite()) throw Error(ErrorKind::InvalidInput, "period matrix has non-finite entries");
  const double scale = 1.0 + omega.cwiseAbs().maxCoeff();
  symmetry_residual_ = (omega - omega.transpose()).cwiseAbs().maxCoeff();
  if (symmetry_residual_ > 1e-8 * scale)
    throw Error(ErrorKind::NonSymmetric, "symmetry residual " + std::to_string(symmetry_residual_));
  omega_ = 0.5 * (omega + omega.transpose());
  re_ = omega_.real();
  im_ = omega_.imag();
  factor_ = cholesky(im_);
  im_inv_ = factor_.inverse();
  im_inv_ = 0.5 * (im_inv_ + im_inv_.transpose()).eval();
  lattice_ = std::sqrt(kPi) * factor_.L.transpose();
  lattice_inverse_norm_ = 1.0 / Eigen::JacobiSVD<Mat>(lattice_).singularValues().minCoeff();

  const int g = genus();
  double bound = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g; ++j) bound = std::min(bound, lattice_.col(j).norm());
  double best = bound;
  const Vec zero = Vec::Zero(g);
  enumerate_ellipsoid(lattice_, zero, bound * (1.0 + 1e-9), [&](const Vec& u, double w2) {
    if (u.cwiseAbs().maxCoeff() > 0.5) best = std::min(best, std::sqrt(w2));
  });
  shortest_ = best;
}

ThetaCharacteristic ThetaCharacteristic::zero(int g) { return {Vec::Zero(g), Vec::Zero(g)}; }

ThetaCharacteristic ThetaCharacteristic::from_bits(int g, unsigned top_bits, unsigned bottom_bits) {
  ThetaCharacteristic c = zero(g);
  for (int j = 0; j < g; ++j) {
    if ((top_bits >> j) & 1u) c.top(j) = 0.5;
    if ((bottom_bits >> j) & 1u) c.bottom(j) = 0.5;
  }
  return c;
}

namespace {
unsigned to_bits(const Vec& v) {
  unsigned bits = 0;
  for (int j = 0; j < v.size(); ++j) {
    const double r = v(j) - std::floor(v(j));
    if (std::abs(r - 0.5) < 1e-9) bits |= 1u << j;
  }
  return bits;
}
}  // namespace

unsigned ThetaCharacteristic::top_bits() const { return to_bits(top); }
unsigned ThetaCharacteristic::bottom_bits() const { return to_bits(bottom); }

int ThetaCharacteristic::parity() const { return std::popcount(top_bits() & bottom_bits()) % 2; }

CVec ThetaCharacteristic::half_period(const PeriodMatrix& omega) const {
  return omega.omega() * top.cast<cplx>() + bottom.cast<cplx>();
}

ThetaCharacteristic ThetaCharacteristic::operator+(const ThetaCharacteristic& other) const {
  return from_bits(genus(), top_bits() ^ other.top_bits(), bottom_bits() ^ other.bottom_bits());
}

std::vector<ThetaCharacteristic> all_characteristics(int g) {
  std::vector<ThetaCharacteristic> out;
  for (unsigned t = 0; t < (1u << g); ++t)
    for (unsigned b = 0; b < (1u << g); ++b) out.push_back(ThetaCharacteristic::from_bits(g, t, b));
  return out;
}

std::vector<ThetaCharacteristic> even_characteristics(int g) {
  std::vector<ThetaCharacteristic> out;
  for (auto& c : all_characteristics(g))
    if (c.parity() == 0) out.push_back(c);
  return out;
}

LogComplex LogComplex::zero() { return {-std::numeric_limits<double>::infinity(), {1.0, 0.0}}; }
bool LogComplex::is_zero() const { return std::isinf(logmod) && logmod < 0; }

CVec ReducedPoint::point(const PeriodMatrix& omega) const {
  return x.cast<cplx>() + omega.omega() * y.cast<cplx>();
}

ReducedPoint reduce_point(const PeriodMatrix& omega, const CVec& z) {
  const int g = omega.genus();
  ReducedPoint r;
  const Vec c = omega.im_inverse() * z.imag();
  r.n.resize(g);
  r.m.resize(g);
  r.y.resize(g);
  for (int j = 0; j < g; ++j) {
    const double f = std::floor(c(j));
    r.n(j) = static_cast<int>(f);
    r.y(j) = c(j) - f;
    if (r.y(j) >= 1.0) { r.y(j) -= 1.0; r.n(j) += 1; }
  }
  const Vec xr = z.real() - omega.re() * r.n.cast<double>() - omega.re() * r.y;
  r.x.resize(g);
  for (int j = 0; j < g; ++j) {
    const double f = std::floor(xr(j));
    r.m(j) = static_cast<int>(f);
    r.x(j) = xr(j) - f;
    if (r.x(j) >= 1.0) { r.x(j) -= 1.0; r.m(j) += 1; }
  }
  return r;
}

CVec reduce(const PeriodMatrix& omega, const CVec& z) { return reduce_point(omega, z).point(omega); }

double lattice_residual(const PeriodMatrix& omega, const CVec& z) {
  const Vec y = omega.im_inverse() * z.imag();
  const Vec x = z.real() - omega.re() * y;
  double r = 0.0;
  for (int i = 0; i < omega.genus(); ++i)
    r = std::max({r, std::abs(x(i) - std::round(x(i))), std::abs(y(i) - std::round(y(i)))});
  return r;
}

double truncation_radius(const PeriodMatrix& omega, double center_distance, double shift_norm, int order,
                         double eps) {
  if (!(eps > 0.0) || eps > 1e-3) throw Error(ErrorKind::InvalidInput, "eps must lie in (0, 1e-3]");
  const int g = omega.genus();
  const double rho = omega.shortest_vector();
  const double kappa = omega.lattice_inverse_norm() + shift_norm;
  const double target = eps * std::exp(-center_distance * center_distance);
  const double front = 0.5 * g * std::pow(2.0 / rho, g) * std::pow(2.0 * kPi * kappa, order);
  auto bound = [&](double R) {
    const double x = (R - 0.5 * rho) * (R - 0.5 * rho);
    double sum = 0.0;
    for (int j = 0; j <= order; ++j)
      sum += binomial(order, j) * std::pow(0.5 * rho, order - j) * upper_incomplete_gamma_half(0.5 * (g + j), x);
    return front * sum;
  };
  double lo = std::max(rho, 0.5 * rho + 1e-9), hi = lo + 60.0;
  if (bound(lo) <= target) return std::max(lo, center_distance + 1e-12);
  for (int it = 0; it < 36; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bound(mid) <= target) hi = mid; else lo = mid;
  }
  return std::max(hi, center_distance + 1e-12);
}

ThetaSum theta_sum(const PeriodMatrix& omega, const CVec& z, const ThetaCharacteristic& chr, int order,
                   double eps) {
  const int g = omega.genus();
  if (z.size() != g) throw Error(ErrorKind::InvalidInput, "theta argument has wrong dimension");
  if (!z.allFinite()) throw Error(ErrorKind::InvalidInput, "theta argument is not finite");
  const Mat& T = omega.lattice_factor();
  const Mat& X = omega.re();
  const Vec y = z.imag();
  const Vec c = omega.im_inverse() * y;
  const Vec s = chr.top + c;
  const Vec xb = z.real() + chr.bottom;

  ThetaSum out;
  out.log_scale = kPi * y.dot(c);
  out.value = 0.0;
  if (order >= 1) out.gradient = CVec::Zero(g);
  if (order >= 2) out.hessian = CMat::Zero(g, g);

  // Nearest-plane point: the largest summand is at least exp(-d0^2).
  Vec u = Vec::Zero(g);
  double d0 = 0.0;
  for (int i = g - 1; i >= 0; --i) {
    double t = 0.0;
    for (int j = i + 1; j < g; ++j) t += T(i, j) * u(j);
    u(i) = std::round(-s(i) - t / T(i, i)) + s(i);
    const double term = T(i, i) * u(i) + t;
    d0 += term * term;
  }
  d0 = std::sqrt(d0);
  const double R = truncation_radius(omega, d0, c.norm() + chr.top.norm(), order, eps);

  double det_t = 1.0;
  for (int i = 0; i < g; ++i) det_t *= T(i, i);
  const double ball = std::pow(kPi, 0.5 * g) * std::pow(R + omega.shortest_vector(), g) / std::tgamma(0.5 * g + 1.0);
  if (ball / det_t > 1e9) throw Error(ErrorKind::RadiusOverflow, "theta truncation needs > 1e9 lattice points");

  const cplx two_pi_i(0.0, 2.0 * kPi);
  Vec v(g);
  enumerate_ellipsoid(T, s, R, [&](const Vec& uu, double w2) {
    v = uu - c;
    const double phase = kPi * v.dot(X * v) + 2.0 * kPi * v.dot(xb);
    const double mag = std::exp(-w2);
    const cplx term = std::polar(mag, phase);
    out.value += term;
    out.max_term = std::max(out.max_term, mag);
    ++out.terms;
    if (order >= 1) {
      for (int j = 0; j < g; ++j) out.gradient(j) += two_pi_i * v(j) * term;
      if (order >= 2)
        for (int j = 0; j < g; ++j)
          for (int k = 0; k < g; ++k) out.hessian(j, k) += -4.0 * kPi * kPi * v(j) * v(k) * term;
    }
  });
  return out;
}

LogComplex theta_log(const PeriodMatrix& omega, const CVec& z, const ThetaCharacteristic& chr, double eps) {
  const ThetaSum s = theta_sum(omega, z, chr, 0, eps);
  const double a = std::abs(s.value);
  if (a == 0.0) return LogComplex::zero();
  return {s.log_scale + std::log(a), s.value / a};
}

LogComplex theta_log(const PeriodMatrix& omega, const CVec& z, double eps) {
  return theta_log(omega, z, ThetaCharacteristic::zero(omega.genus()), eps);
}

Draw theta_norm_log(const PeriodMatrix& omega, const CVec& z, const ThetaCharacteristic& chr, double eps) {
  const int g = omega.genus();
  const CVec w = reduce(omega, z + chr.half_period(omega));
  const ThetaSum s = theta_sum(omega, w, ThetaCharacteristic::zero(g), 0, eps);
  const double base = 0.25 * omega.log_det_im();
  if (s.censored()) return {base + std::log(ThetaSum::kCensorRatio * s.max_term), true};
  return {base + std::log(std::abs(s.value)), false};
}

Draw theta_norm_log(const PeriodMatrix& omega, const CVec& z, double eps) {
  return theta_norm_log(omega, z, ThetaCharacteristic::zero(omega.genus()), eps);
}

std::pair<CVec, CMat> theta_derivs(const PeriodMatrix& omega, const CVec& z, const ThetaCharacteristic& chr,
                                   double eps) {
  const ThetaSum s = theta_sum(omega, z, chr, 2, eps);
  const double f = std::exp(s.log_scale);
  return {s.gradient * f, s.hessian * f};
}

namespace {

// log|det M| measured against the largest entry: a determinant below 1e-12 of
// max|M_ij|^n is indistinguishable from zero. Per-row scaling would blow rows of
// pure rounding noise up to unit size, so the scale is global.
Draw log_abs_det(const CMat& M) {
  const int n = static_cast<int>(M.rows());
  const double scale = M.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {-std::numeric_limits<double>::infinity(), true};
  const double d = std::abs(Eigen::PartialPivLU<CMat>(M / scale).determinant());
  constexpr double kFloor = 1e-12;
  const double log_scale = n * std::log(scale);
  if (d < kFloor) return {log_scale + std::log(kFloor), true};
  return {log_scale + std::log(d), false};
}

}  // namespace

Draw eta_norm_log(const PeriodMatrix& omega, const CVec& z, double eps) {
  const Draw t = theta_norm_log(omega, z, eps);
  if (!t.censored && t.value >= kOnThetaThreshold)
    throw Error(ErrorKind::NotOnTheta, "log||theta|| = " + std::to_string(t.value));
  const int g = omega.genus();
  const ThetaSum s = theta_sum(omega, reduce(omega, z), ThetaCharacteristic::zero(g), 2, eps);
  CMat M = CMat::Zero(g + 1, g + 1);
  M.topLeftCorner(g, g) = s.hessian;
  M.col(g).head(g) = s.gradient;
  M.row(g).head(g) = s.gradient.transpose();
  Draw d = log_abs_det(M);
  d.value += 0.25 * (g + 5) * omega.log_det_im();
  return d;
}

Draw J_norm_log(const PeriodMatrix& omega, const std::vector<CVec>& w, double eps) {
  const int g = omega.genus();
  if (static_cast<int>(w.size()) != g) throw Error(ErrorKind::InvalidInput, "J needs g lifts");
  CMat M(g, g);
  for (int k = 0; k < g; ++k) {
    const ThetaSum s = theta_sum(omega, w[k], ThetaCharacteristic::zero(g), 1, eps);
    M.row(k) = s.gradient.transpose();
  }
  Draw d = log_abs_det(M);
  d.value += 0.25 * (g + 2) * omega.log_det_im();
  return d;
}

double autissier_constant(int g) {
  const double base = 0.5 * (g + 2);
  if (g <= 3) return base;
  return base * std::pow((g + 2) / (kPi * std::sqrt(3.0)), 0.5 * g);
}

double autissier_margin(const PeriodMatrix& omega, const CVec& z, double eps) {
  return std::log(autissier_constant(omega.genus())) + 0.25 * omega.log_det_im() - theta_norm_log(omega, z, eps).value;
}

}  // namespace arakelov
