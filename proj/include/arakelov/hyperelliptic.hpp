#pragma once

#include <string>
#include <vector>

#include "arakelov/theta.hpp"

namespace arakelov {

struct CurvePoint {
  cplx x{0.0, 0.0};
  cplx y{0.0, 0.0};
  bool infinity = false;

  static CurvePoint at_infinity() { return {cplx(0.0), cplx(0.0), true}; }
  // Hyperelliptic involution (x, y) -> (x, -y).
  CurvePoint involution() const { return {x, -y, infinity}; }
};

// y^2 = prod_j (x - a_j) with an odd number 2g+1 of distinct branch points; the
// remaining Weierstrass point is infinity.
class HyperellipticCurve {
 public:
  explicit HyperellipticCurve(std::vector<cplx> branch_points, std::string label = "");

  int genus() const { return genus_; }
  const std::vector<cplx>& branch_points() const { return points_; }
  const std::string& label() const { return label_; }
  // Order in which the cut polyline visits the branch points (input indices).
  const std::vector<int>& layout() const { return layout_; }
  cplx layout_point(int i) const { return points_[layout_[i]]; }

  cplx f(cplx x) const;
  CurvePoint point(cplx x, int sheet) const;
  // Weierstrass point j in input order; j = 2g+1 is infinity.
  CurvePoint weierstrass(int j) const;
  bool on_curve(const CurvePoint& p) const;

  double min_gap() const { return min_gap_; }
  double max_modulus() const { return max_modulus_; }
  cplx centroid() const;

 private:
  std::vector<cplx> points_;
  std::vector<int> layout_;
  std::string label_;
  int genus_ = 0;
  double min_gap_ = 0.0;
  double max_modulus_ = 0.0;
};

// y^2 = x^n + 1. Odd n uses the roots directly; even n sends the last root to
// infinity by x -> 1/(x - r).
HyperellipticCurve curve_xn_plus_one(int n);

// 2g+1 branch points uniform in the square [-2, 2]^2, redrawn until every
// pair is at least `min_gap` apart.
HyperellipticCurve random_curve(int g, std::uint64_t seed, double min_gap = 0.25);

// Isomorphic curve on which the j-th branch point (input order) sits at infinity.
HyperellipticCurve move_to_infinity(const HyperellipticCurve& curve, int j);

// Half-integer characteristics of the 2g+2 Weierstrass points (index 2g+1 is
// infinity, always zero) plus the Riemann constant for base point infinity.
class CharacteristicTable {
 public:
  CharacteristicTable(std::vector<ThetaCharacteristic> eta, ThetaCharacteristic kappa);

  // The standard table for branch points a_1..a_{2g+1} in cut order.
  static CharacteristicTable standard(int g);
  // standard(g) relabelled through the curve's cut layout.
  static CharacteristicTable for_curve(const HyperellipticCurve& curve);

  int genus() const { return kappa_.genus(); }
  const ThetaCharacteristic& operator[](int j) const { return eta_[j]; }
  const std::vector<ThetaCharacteristic>& entries() const { return eta_; }
  const ThetaCharacteristic& kappa() const { return kappa_; }
  // Sum of the entries indexed by `set`, mod 1.
  ThetaCharacteristic of_set(const std::vector<int>& set) const;
  // Characteristic of the divisor class sum_{j in set} W_j - kappa.
  ThetaCharacteristic divisor_class(const std::vector<int>& set) const { return of_set(set) + kappa_; }

 private:
  std::vector<ThetaCharacteristic> eta_;
  ThetaCharacteristic kappa_;
};

// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k);
double log_binomial(int n, int k);
long long binomial(int n, int k);

struct PeriodData {
  // Entry (i, k): integral of x^i dx / y over the k-th A- or B-cycle.
  CMat a_periods, b_periods;
  // Rows give the normalized differentials in the basis x^i dx / y.
  CMat normalization;
  CMat omega;
  std::vector<int> signs;
  int quad_order = 0;
  double symmetry_residual = 0.0;
};

// Periods over the cycles around consecutive cut segments, with Gauss-Chebyshev
// quadrature doubled from `quad_order` until converged.
PeriodData period_data(const HyperellipticCurve& curve, int quad_order = 128);
PeriodMatrix period_matrix(const HyperellipticCurve& curve, int quad_order = 128);

// log ||phi_g|| from the even theta constants selected by the table.
double phi_g_log(const PeriodMatrix& omega, const CharacteristicTable& table);

enum class DiscriminantMode { HyperellipticProduct, GeneralSum };
double delta_g_log(const PeriodMatrix& omega, DiscriminantMode mode, const CharacteristicTable* table = nullptr);

// Same product taken over every choice of the Weierstrass point at infinity.
double phi_g_log_all_infinities(const PeriodMatrix& omega, const CharacteristicTable& table);

// log ||J|| at g Weierstrass points (labels into the table).
Draw J_weierstrass_log(const PeriodMatrix& omega, const CharacteristicTable& table, const std::vector<int>& points);

// |log ||J||(W_t1..W_tg) - log(pi^g prod_j ||theta||(W_t1 + .. + W_tg - W_tj))|
// for a permutation t of {0..2g+1}.
double rosenhain_residual(const PeriodMatrix& omega, const CharacteristicTable& table, const std::vector<int>& perm);

// Difference of the two sides of the product of ||J|| over all g-subsets of
// Weierstrass points against pi^(C(2g+2,g) g) ||phi_g||^((g+1)/4), in log scale.
double jacobian_product_residual(const PeriodMatrix& omega, const CharacteristicTable& table);

}  // namespace arakelov
