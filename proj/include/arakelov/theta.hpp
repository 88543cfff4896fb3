#pragma once

#include <utility>
#include <vector>

#include "arakelov/numerics.hpp"

namespace arakelov {

inline constexpr double kDefaultThetaEps = 1e-10;

// Symmetric g x g matrix with positive definite imaginary part, plus the
// factorizations every theta evaluation needs.
class PeriodMatrix {
 public:
  explicit PeriodMatrix(const CMat& omega);

  int genus() const { return static_cast<int>(omega_.rows()); }
  const CMat& omega() const { return omega_; }
  const Mat& re() const { return re_; }
  const Mat& im() const { return im_; }
  const Mat& im_inverse() const { return im_inv_; }
  const PDFactorization& im_factor() const { return factor_; }
  double log_det_im() const { return factor_.log_det; }
  // Upper triangular T with pi * Y = T^T T.
  const Mat& lattice_factor() const { return lattice_; }
  // Shortest nonzero vector length of the lattice T * Z^g.
  double shortest_vector() const { return shortest_; }
  // Operator norm of lattice_factor()^-1.
  double lattice_inverse_norm() const { return lattice_inverse_norm_; }
  double symmetry_residual() const { return symmetry_residual_; }

 private:
  CMat omega_;
  Mat re_, im_, im_inv_, lattice_;
  PDFactorization factor_;
  double shortest_ = 0.0;
  double lattice_inverse_norm_ = 0.0;
  double symmetry_residual_ = 0.0;
};

// Half-integer characteristic [top; bottom], entries in {0, 1/2}.
struct ThetaCharacteristic {
  Vec top, bottom;

  static ThetaCharacteristic zero(int g);
  // Bit j of `top_bits` sets top(j) = 1/2.
  static ThetaCharacteristic from_bits(int g, unsigned top_bits, unsigned bottom_bits);

  int genus() const { return static_cast<int>(top.size()); }
  unsigned top_bits() const;
  unsigned bottom_bits() const;
  // 0 for even, 1 for odd.
  int parity() const;
  bool is_zero() const { return top_bits() == 0 && bottom_bits() == 0; }
  CVec half_period(const PeriodMatrix& omega) const;

  ThetaCharacteristic operator+(const ThetaCharacteristic& other) const;
  bool operator==(const ThetaCharacteristic& other) const {
    return top_bits() == other.top_bits() && bottom_bits() == other.bottom_bits();
  }
};

std::vector<ThetaCharacteristic> all_characteristics(int g);
std::vector<ThetaCharacteristic> even_characteristics(int g);

struct LogComplex {
  double logmod = 0.0;
  cplx phase{1.0, 0.0};

  static LogComplex zero();
  bool is_zero() const;
  cplx value() const { return std::exp(logmod) * phase; }
  LogComplex operator*(const LogComplex& o) const { return {logmod + o.logmod, phase * o.phase}; }
};

// z = x + Omega * y + m + Omega * n with x, y in [0,1)^g.
struct ReducedPoint {
  Vec x, y;
  Eigen::VectorXi m, n;

  CVec point(const PeriodMatrix& omega) const;
};

ReducedPoint reduce_point(const PeriodMatrix& omega, const CVec& z);
CVec reduce(const PeriodMatrix& omega, const CVec& z);
// Distance of z from the lattice Z^g + Omega Z^g in the real coordinates (x, y)
// of z = x + Omega y (max norm).
double lattice_residual(const PeriodMatrix& omega, const CVec& z);

// Theta series and derivatives with the factor exp(pi Im(z)^T Y^-1 Im(z))
// pulled out: the true value is exp(log_scale) * value, and likewise for
// gradient and hessian.
struct ThetaSum {
  double log_scale = 0.0;
  cplx value;
  CVec gradient;
  CMat hessian;
  double max_term = 0.0;
  std::size_t terms = 0;

  // |value| below 1e-12 of the largest summand: cancellation has eaten the
  // digits and only an upper bound on |theta| is known.
  bool censored() const { return std::abs(value) < kCensorRatio * max_term; }
  static constexpr double kCensorRatio = 1e-12;
};

ThetaSum theta_sum(const PeriodMatrix& omega, const CVec& z, const ThetaCharacteristic& chr, int order,
                   double eps = kDefaultThetaEps);

// Ellipsoid radius (in the scaled metric) needed for `order` derivatives.
double truncation_radius(const PeriodMatrix& omega, double center_distance, double shift_norm, int order,
                         double eps);

LogComplex theta_log(const PeriodMatrix& omega, const CVec& z, const ThetaCharacteristic& chr,
                     double eps = kDefaultThetaEps);
LogComplex theta_log(const PeriodMatrix& omega, const CVec& z, double eps = kDefaultThetaEps);

// log ||theta[chr]||(z) = log ||theta||(z + Omega top + bottom). Censored values
// carry the cancellation floor.
Draw theta_norm_log(const PeriodMatrix& omega, const CVec& z, const ThetaCharacteristic& chr,
                    double eps = kDefaultThetaEps);
Draw theta_norm_log(const PeriodMatrix& omega, const CVec& z, double eps = kDefaultThetaEps);

std::pair<CVec, CMat> theta_derivs(const PeriodMatrix& omega, const CVec& z, const ThetaCharacteristic& chr,
                                   double eps = kDefaultThetaEps);

// Guard for eta_norm_log: points with log ||theta|| above this are not on Theta.
inline constexpr double kOnThetaThreshold = -12.0;

// log ||eta||(z) for z on the theta divisor. A bordered determinant that
// vanishes to working precision comes back censored at the 1e-12 floor.
Draw eta_norm_log(const PeriodMatrix& omega, const CVec& z, double eps = kDefaultThetaEps);

// log ||J|| for lifts w_1..w_g; censored like eta_norm_log when the gradient
// matrix is singular to working precision.
Draw J_norm_log(const PeriodMatrix& omega, const std::vector<CVec>& w, double eps = kDefaultThetaEps);

double autissier_constant(int g);
double autissier_margin(const PeriodMatrix& omega, const CVec& z, double eps = kDefaultThetaEps);

// Upper incomplete gamma function for s a positive multiple of 1/2.
double upper_incomplete_gamma_half(double s, double x);

}  // namespace arakelov
