#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arakelov/abeljacobi.hpp"

namespace arakelov {

// Mean of log ||theta|| over the torus.
Estimate H_invariant(const PeriodMatrix& omega, const IntegrationConfig& config, double eps = kDefaultThetaEps);

struct DeltaPhi {
  Estimate delta;
  Estimate phi;
  double log_delta = 0.0;
};

// Closed forms for hyperelliptic curves in terms of H and log ||Delta_g||.
DeltaPhi hyperelliptic_delta_phi(int g, const Estimate& H, double log_delta);
double delta_from_H_phi(int g, double H, double phi);

struct AbelianExtensions {
  Estimate delta, phi, beta;
};
AbelianExtensions abelian_extensions(int g, const Estimate& H, const Estimate& lambda);

// A(X) = phi / 2g - H with phi from the hyperelliptic closed form.
Estimate bost_constant(int g, const Estimate& H, double log_delta);

// delta from the mu-average of the translated theta-divisor integral and H.
Estimate delta_via_green_integral(const MuSampler& mu, const CurvePoint& q, const Estimate& H,
                                  const IntegrationConfig& config);

// Genus one: j-invariant from the theta constants of [[tau]].
cplx j_invariant(const PeriodMatrix& omega);

struct BoundCheck {
  std::string name;
  double margin = 0.0;
  bool ok() const { return margin >= 0.0; }
};

struct BoundInputs {
  int genus = 0;
  double H = 0.0;
  double log_det_im = 0.0;
  bool check_det_bound = true;
  std::optional<double> log_delta, delta, phi;
  std::optional<double> theta_sup;  // largest sampled log ||theta||(z)
  std::optional<double> green_sup;  // largest sampled g(P, Q)
  std::optional<double> r;          // defaults to the admissible choice for the genus
  std::vector<double> s_values{0.0, 0.25, 1.0};
};

std::vector<BoundCheck> bounds_report(const BoundInputs& in);

// Largest log ||theta|| over `count` uniform points of the torus.
double theta_sup_sample(const PeriodMatrix& omega, std::size_t count, std::uint64_t seed,
                        double eps = kDefaultThetaEps);

struct ReportEntry {
  std::string name;
  Estimate value;
  std::string provenance;
};

struct InvariantReport {
  int genus = 0;
  std::vector<ReportEntry> entries;
  std::vector<BoundCheck> bounds;
  std::vector<std::string> notes;
  IntegrationConfig config;
  double eps = kDefaultThetaEps;

  const ReportEntry* find(const std::string& name) const;
  bool bounds_ok() const;
};

struct ReportOptions {
  bool monte_carlo_curve_integrals = true;  // S_1, S_g, B, Lambda
  std::size_t green_pairs = 0;              // pairs for the Green sup bound
  std::size_t theta_sup_points = 2000;
};

InvariantReport curve_invariants(const CurveJacobian& jac, const IntegrationConfig& config,
                                 const ReportOptions& options = {});
InvariantReport period_invariants(const PeriodMatrix& omega, const IntegrationConfig& config, double eps,
                                  const ReportOptions& options = {});

}  // namespace arakelov
