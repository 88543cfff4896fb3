#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "arakelov/hyperelliptic.hpp"

namespace arakelov {

struct DivisorTerm {
  CurvePoint point;
  int multiplicity = 1;
};
using Divisor = std::vector<DivisorTerm>;

// Route used for an Abel-Jacobi integral from infinity: either straight in from
// infinity along the ray through the end point, or out along a ray to a branch
// point and then along a segment to the end point.
struct AJPath {
  CurvePoint end;
  int branch = -1;  // -1: direct from infinity
  cplx ray_direction{0.0, 0.0};
  std::vector<cplx> waypoints;
};

// A curve with its normalized periods, Abel-Jacobi images of the Weierstrass
// points, the characteristic table read off from those images, and the Riemann
// constant for base point infinity.
class CurveJacobian {
 public:
  explicit CurveJacobian(HyperellipticCurve curve, int quad_order = 128, double eps = kDefaultThetaEps);

  const HyperellipticCurve& curve() const { return curve_; }
  const PeriodData& periods() const { return periods_; }
  const PeriodMatrix& omega() const { return omega_; }
  int genus() const { return curve_.genus(); }
  double eps() const { return eps_; }

  const CharacteristicTable& table() const { return *table_; }
  // Half-period vector of the Riemann constant.
  const CVec& kappa() const { return kappa_; }
  // True when the calibrated table agrees with the standard cut-order table.
  bool matches_standard_table() const { return matches_standard_; }

  // Unreduced Abel-Jacobi image of branch point j (input order) from infinity.
  const CVec& aj_branch(int j) const { return aj_branch_[j]; }
  cplx ray_direction(int j) const { return ray_dir_[j]; }

  // Normalized holomorphic differentials at p as multiples of dx.
  CVec differentials(const CurvePoint& p) const;
  // Orthonormal (Hodge metric) differentials at p as multiples of dx.
  CVec orthonormal_differentials(const CurvePoint& p) const;
  // Density of mu on one sheet with respect to Lebesgue measure in x.
  double mu_density(const CurvePoint& p) const;

 private:
  HyperellipticCurve curve_;
  PeriodData periods_;
  PeriodMatrix omega_;
  double eps_;
  std::vector<CVec> aj_branch_;
  std::vector<cplx> ray_dir_;
  std::optional<CharacteristicTable> table_;
  CVec kappa_;
  bool matches_standard_ = false;
  Mat lower_inverse_;
};

AJPath plan_path(const CurveJacobian& jac, const CurvePoint& p, int via_branch = -1);

// Abel-Jacobi image with base point infinity, reduced to the fundamental domain.
// `via_branch` forces the route through a given branch point.
CVec aj_point(const CurveJacobian& jac, const CurvePoint& p, double tol = 1e-13, int via_branch = -1);

// log ||theta|| at sum mult * AJ - kappa (+ AJ(shift.first) - AJ(shift.second)).
Draw theta_of_divisor(const CurveJacobian& jac, const Divisor& d,
                      const std::optional<std::pair<CurvePoint, CurvePoint>>& shift = std::nullopt);

// log ||theta|| at an already assembled Abel-Jacobi sum, minus kappa.
Draw theta_at_class(const CurveJacobian& jac, const CVec& aj_sum);

// Rejection sampler for mu: a mixture proposal (uniform disk, cusps at the
// branch points, tail at infinity), a uniformly chosen sheet, and an envelope
// set from a pilot run.
class MuSampler {
 public:
  explicit MuSampler(const CurveJacobian& jac, std::size_t pilot = 20000, std::uint64_t pilot_seed = 0x6d75);

  struct Sample {
    CurvePoint point;
    double density;  // mu density on the sheet, w.r.t. area in x
  };

  Sample sample(Rng& rng) const;
  // Proposal density in x (before the sheet is chosen).
  double proposal_density(cplx x) const;
  cplx propose(Rng& rng) const;
  double envelope() const { return envelope_; }
  const CurveJacobian& jacobian() const { return jac_; }

 private:
  const CurveJacobian& jac_;
  cplx center_;
  double radius_;
  double cusp_radius_;
  double envelope_ = 0.0;
};

// k! det(N N^*) for the row-normalized k x g matrix of orthonormal differential values.
double cb_weight(const CurveJacobian& jac, const std::vector<CurvePoint>& points);

// A generic base point: off the branch points and away from infinity.
CurvePoint generic_point(const HyperellipticCurve& curve, int which = 0);

Estimate S_k(const MuSampler& mu, int k, const CurvePoint& q, const IntegrationConfig& config);
Estimate B_invariant(const MuSampler& mu, const IntegrationConfig& config);

// (1/g!) * integral over Theta + P - Q of log ||theta|| nu^(g-1).
Estimate theta_divisor_integral(const MuSampler& mu, const CurvePoint& p, const CurvePoint& q,
                                const IntegrationConfig& config);
// The same integral averaged over P distributed by mu.
Estimate theta_divisor_integral_mean(const MuSampler& mu, const CurvePoint& q, const IntegrationConfig& config);

// g(P, Q) = theta_divisor_integral + A(X), with A(X) supplied by the caller.
Estimate green(const MuSampler& mu, const CurvePoint& p, const CurvePoint& q, const Estimate& a_invariant,
               const IntegrationConfig& config);

Estimate lambda_jacobian(const MuSampler& mu, const IntegrationConfig& config);

// H through the pullbacks along P1 + .. + Pg - Q and 2 P1 + P2 + .. + P(g-1) - Pg.
std::pair<Estimate, Estimate> h_alt_estimators(const MuSampler& mu, const CurvePoint& q,
                                               const IntegrationConfig& config);

}  // namespace arakelov
