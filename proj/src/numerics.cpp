#include "arakelov/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace arakelov {

const char* error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::AllCensored: return "AllCensored";
    case ErrorKind::RadiusOverflow: return "RadiusOverflow";
    case ErrorKind::NotOnTheta: return "NotOnTheta";
    case ErrorKind::DuplicateBranchPoint: return "DuplicateBranchPoint";
    case ErrorKind::EvenCount: return "EvenCount";
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::BadCutLayout: return "BadCutLayout";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::VanishingEvenThetaConstant: return "VanishingEvenThetaConstant";
    case ErrorKind::GenusTooLarge: return "GenusTooLarge";
    case ErrorKind::PathClearanceFailure: return "PathClearanceFailure";
    case ErrorKind::WrongDegree: return "WrongDegree";
    case ErrorKind::EnvelopeTooSmall: return "EnvelopeTooSmall";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::ParameterTooLarge: return "ParameterTooLarge";
    case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
  }
  return "Unknown";
}

Mat PDFactorization::inverse() const {
  Mat inv = L.triangularView<Eigen::Lower>().solve(Mat::Identity(dim(), dim()));
  return inv.transpose() * inv;
}

Vec PDFactorization::solve(const Vec& b) const {
  Vec t = L.triangularView<Eigen::Lower>().solve(b);
  return L.transpose().triangularView<Eigen::Upper>().solve(t);
}

PDFactorization cholesky(const Mat& Y) {
  if (Y.rows() != Y.cols() || Y.rows() == 0)
    throw Error(ErrorKind::InvalidInput, "cholesky needs a non-empty square matrix");
  const double scale = std::max(1.0, Y.cwiseAbs().maxCoeff());
  if ((Y - Y.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(ErrorKind::InvalidInput, "cholesky needs a symmetric matrix");
  Eigen::LLT<Mat> llt(Y);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "non-positive pivot");
  PDFactorization out;
  out.L = llt.matrixL();
  for (int i = 0; i < out.L.rows(); ++i) {
    if (!(out.L(i, i) > 0.0)) throw Error(ErrorKind::NotPositiveDefinite, "non-positive pivot");
    out.log_det += 2.0 * std::log(out.L(i, i));
  }
  return out;
}

Estimate combine(const std::vector<Term>& terms, double constant) {
  Estimate out;
  out.value = constant;
  double var = 0.0;
  for (const auto& t : terms) {
    out.value += t.coef * t.est.value;
    var += t.coef * t.coef * t.est.std_error * t.est.std_error;
    out.samples += t.est.samples;
    out.censored += t.est.censored;
    if (out.seed == 0) out.seed = t.est.seed;
  }
  out.std_error = std::sqrt(var);
  return out;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL))) {}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // Box-Muller; the cosine branch only, to keep the stream stateless.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

namespace {

// Joe-Kuo primitive polynomials and initial direction numbers for dims 2..12.
struct SobolInit {
  int s;
  unsigned a;
  unsigned m[5];
};
constexpr SobolInit kSobol[] = {
    {1, 0, {1}},           {2, 1, {1, 3}},          {3, 1, {1, 3, 1}},        {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},  {4, 4, {1, 3, 5, 13}},   {5, 2, {1, 1, 5, 5, 17}}, {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}}, {5, 11, {1, 1, 5, 1, 1}}, {5, 13, {1, 1, 1, 3, 11}},
};

const std::vector<std::vector<std::uint32_t>>& sobol_directions() {
  static const std::vector<std::vector<std::uint32_t>> dirs = [] {
    std::vector<std::vector<std::uint32_t>> d(SampleStream::kMaxSobolDim, std::vector<std::uint32_t>(32));
    for (int j = 0; j < 32; ++j) d[0][j] = 1u << (31 - j);
    for (int k = 1; k < SampleStream::kMaxSobolDim; ++k) {
      const auto& init = kSobol[k - 1];
      const int s = init.s;
      auto& v = d[k];
      for (int j = 0; j < s; ++j) v[j] = init.m[j] << (31 - j);
      for (int j = s; j < 32; ++j) {
        std::uint32_t x = v[j - s] ^ (v[j - s] >> s);
        for (int i = 1; i < s; ++i)
          if ((init.a >> (s - 1 - i)) & 1u) x ^= v[j - i];
        v[j] = x;
      }
    }
    return d;
  }();
  return dirs;
}

}  // namespace

SampleStream::SampleStream(int dim, std::uint64_t seed, SampleKind kind) : dim_(dim), seed_(seed), kind_(kind) {
  if (dim < 1) throw Error(ErrorKind::InvalidInput, "sample_stream dim must be >= 1");
  if (kind_ == SampleKind::LowDiscrepancy && dim > kMaxSobolDim) kind_ = SampleKind::Pseudo;
  if (kind_ == SampleKind::LowDiscrepancy) {
    Rng rng(seed, 0x5eedULL);
    shift_.resize(dim);
    for (auto& s : shift_) s = static_cast<std::uint32_t>(rng.next_u64() >> 32);
  }
}

void SampleStream::point(std::uint64_t index, std::span<double> out) const {
  if (kind_ == SampleKind::Pseudo) {
    Rng rng(seed_, index);
    for (int d = 0; d < dim_; ++d) out[d] = rng.uniform();
    return;
  }
  const auto& dirs = sobol_directions();
  const std::uint64_t gray = index ^ (index >> 1);
  // Sub-resolution jitter below 2^-32 keeps points off exact dyadic values.
  Rng jitter(seed_ ^ 0x71773ULL, index);
  for (int d = 0; d < dim_; ++d) {
    std::uint32_t x = shift_[d];
    for (int j = 0; j < 32; ++j)
      if ((gray >> j) & 1ULL) x ^= dirs[d][j];
    double u = (static_cast<double>(x) + jitter.uniform()) * 0x1.0p-32;
    out[d] = u < 1.0 ? u : std::nextafter(1.0, 0.0);
  }
}

std::vector<double> SampleStream::point(std::uint64_t index) const {
  std::vector<double> p(dim_);
  point(index, p);
  return p;
}

SampleStream sample_stream(int dim, std::uint64_t seed, SampleKind kind) { return SampleStream(dim, seed, kind); }

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("ARAKELOV_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

namespace {

struct ChunkResult {
  double sum = 0.0;
  std::size_t censored = 0;
};

struct Chunk {
  int batch;
  std::size_t begin, end;  // indices local to the batch
};

constexpr std::size_t kChunk = 256;

// Runs `eval(batch, local_index)` over all samples and reduces per batch in a
// fixed order, independent of the number of threads.
Estimate run_batches(std::size_t samples, int batches, std::uint64_t seed,
                     const std::function<Draw(int, std::size_t)>& eval) {
  if (batches < 8) throw Error(ErrorKind::InvalidInput, "at least 8 batches are required");
  if (samples < static_cast<std::size_t>(batches))
    throw Error(ErrorKind::InvalidInput, "fewer samples than batches");
  std::vector<std::size_t> batch_size(batches);
  for (int b = 0; b < batches; ++b)
    batch_size[b] = samples / batches + (static_cast<std::size_t>(b) < samples % batches ? 1 : 0);
  std::vector<Chunk> chunks;
  for (int b = 0; b < batches; ++b)
    for (std::size_t s = 0; s < batch_size[b]; s += kChunk)
      chunks.push_back({b, s, std::min(batch_size[b], s + kChunk)});
  std::vector<ChunkResult> results(chunks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t c = next++; c < chunks.size(); c = next++) {
        ChunkResult r;
        for (std::size_t i = chunks[c].begin; i < chunks[c].end; ++i) {
          const Draw d = eval(chunks[c].batch, i);
          r.sum += d.value;
          if (d.censored) ++r.censored;
        }
        results[c] = r;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks.size();
    }
  };
  const int threads = std::min<int>(worker_count(), static_cast<int>(chunks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> batch_sum(batches, 0.0);
  Estimate est;
  est.samples = samples;
  est.seed = seed;
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    batch_sum[chunks[c].batch] += results[c].sum;
    est.censored += results[c].censored;
  }
  if (est.censored == samples) throw Error(ErrorKind::AllCensored, "every sample was censored");
  double total = 0.0, mean_of_means = 0.0;
  std::vector<double> means(batches);
  for (int b = 0; b < batches; ++b) {
    total += batch_sum[b];
    means[b] = batch_sum[b] / static_cast<double>(batch_size[b]);
    mean_of_means += means[b];
  }
  mean_of_means /= batches;
  double ss = 0.0;
  for (double m : means) ss += (m - mean_of_means) * (m - mean_of_means);
  est.value = total / static_cast<double>(samples);
  est.std_error = std::sqrt(ss / (static_cast<double>(batches) * (batches - 1)));
  return est;
}

}  // namespace

Estimate integrate(int dim, const IntegrationConfig& config,
                   const std::function<Draw(std::span<const double>)>& f) {
  std::vector<SampleStream> streams;
  std::vector<std::size_t> offset(config.batches, 0);
  for (int b = 0; b < config.batches; ++b) {
    if (config.kind == SampleKind::LowDiscrepancy) {
      streams.emplace_back(dim, mix64(config.seed + 0x1000ULL * (b + 1)), config.kind);
    } else {
      streams.emplace_back(dim, config.seed, config.kind);
      offset[b] = b == 0 ? 0 : offset[b - 1] + (config.samples / config.batches +
                                                (static_cast<std::size_t>(b - 1) < config.samples % config.batches));
    }
  }
  return run_batches(config.samples, config.batches, config.seed, [&](int b, std::size_t i) {
    double buf[64];
    std::span<double> p(buf, dim);
    streams[b].point(offset[b] + i, p);
    return f(std::span<const double>(buf, dim));
  });
}

Estimate integrate_random(const IntegrationConfig& config, const std::function<Draw(Rng&)>& f) {
  std::vector<std::size_t> offset(config.batches, 0);
  for (int b = 1; b < config.batches; ++b)
    offset[b] = offset[b - 1] + config.samples / config.batches +
                (static_cast<std::size_t>(b - 1) < config.samples % config.batches);
  return run_batches(config.samples, config.batches, config.seed, [&](int b, std::size_t i) {
    Rng rng(config.seed, offset[b] + i);
    return f(rng);
  });
}

const QuadratureRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

CVec panel(const std::function<CVec(double)>& f, double a, double b, const QuadratureRule& rule) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  CVec sum;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    CVec v = f(mid + half * rule.nodes[i]) * (rule.weights[i] * half);
    if (i == 0) sum = v; else sum += v;
  }
  return sum;
}

CVec adapt(const std::function<CVec(double)>& f, double a, double b, const CVec& whole, double tol, int depth,
           const QuadratureRule& rule) {
  const double m = 0.5 * (a + b);
  CVec left = panel(f, a, m, rule), right = panel(f, m, b, rule);
  CVec both = left + right;
  const double scale = std::max(1.0, both.cwiseAbs().maxCoeff());
  if (depth <= 0 || (both - whole).cwiseAbs().maxCoeff() <= tol * scale) return both;
  return adapt(f, a, m, left, tol, depth - 1, rule) + adapt(f, m, b, right, tol, depth - 1, rule);
}

}  // namespace

CVec integrate_adaptive(const std::function<CVec(double)>& f, double a, double b, double tol, int max_depth) {
  const QuadratureRule& rule = gauss_legendre(16);
  return adapt(f, a, b, panel(f, a, b, rule), tol, max_depth, rule);
}

}  // namespace arakelov
