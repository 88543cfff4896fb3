#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "arakelov/error.hpp"

namespace arakelov {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using ComplexMatrix = CMat;

inline constexpr double kPi = 3.14159265358979323846;

// Y = L * L^T for a real symmetric positive definite Y.
struct PDFactorization {
  Mat L;
  double log_det = 0.0;

  int dim() const { return static_cast<int>(L.rows()); }
  Mat inverse() const;
  // Solves Y * x = b.
  Vec solve(const Vec& b) const;
};

PDFactorization cholesky(const Mat& Y);

// One evaluation of an integrand. `censored` marks a value replaced by the
// cancellation floor (see theta_norm_log).
struct Draw {
  double value = 0.0;
  bool censored = false;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t censored = 0;

  static Estimate exact(double v) { return Estimate{v, 0.0, 0, 0, 0}; }
  double censored_fraction() const {
    return samples ? static_cast<double>(censored) / static_cast<double>(samples) : 0.0;
  }
};

// Linear combination sum_i coef_i * est_i + constant of independent estimates.
struct Term {
  double coef;
  Estimate est;
};
Estimate combine(const std::vector<Term>& terms, double constant = 0.0);

// Counter-based generator: every (seed, stream) pair owns an independent
// SplitMix64 sequence, so sample i never depends on how samples are scheduled.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  double uniform();  // [0,1)
  double normal();

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);

enum class SampleKind { Pseudo, LowDiscrepancy };

// Deterministic point set in [0,1)^dim. LowDiscrepancy is a Sobol sequence with
// a seed-derived digital shift (up to 12 dimensions).
class SampleStream {
 public:
  SampleStream(int dim, std::uint64_t seed, SampleKind kind);
  int dim() const { return dim_; }
  void point(std::uint64_t index, std::span<double> out) const;
  std::vector<double> point(std::uint64_t index) const;

  static constexpr int kMaxSobolDim = 12;

 private:
  int dim_;
  std::uint64_t seed_;
  SampleKind kind_;
  std::vector<std::uint32_t> shift_;
};

SampleStream sample_stream(int dim, std::uint64_t seed, SampleKind kind);

struct IntegrationConfig {
  std::size_t samples = 200000;
  std::uint64_t seed = 42;
  SampleKind kind = SampleKind::LowDiscrepancy;
  int batches = 16;
};

// Mean of f over the stream. Batch b uses its own digital shift (LowDiscrepancy)
// or its own substreams (Pseudo), so batch means are independent replicates.
Estimate integrate(int dim, const IntegrationConfig& config,
                   const std::function<Draw(std::span<const double>)>& f);

// Mean of f(rng) where every sample receives a private Rng. Used for integrands
// that draw a variable number of variates (rejection sampling).
Estimate integrate_random(const IntegrationConfig& config, const std::function<Draw(Rng&)>& f);

// Worker threads used by the integrators: hardware concurrency, capped by
// ARAKELOV_THREADS.
int worker_count();

// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_legendre(int n);

// Adaptive composite Gauss-Legendre for a complex vector-valued integrand on
// [a, b]; panels are bisected until a 16-node panel agrees with its halves.
CVec integrate_adaptive(const std::function<CVec(double)>& f, double a, double b, double tol = 1e-13,
                        int max_depth = 40);

}  // namespace arakelov
