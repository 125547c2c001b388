#include "ccx/oracle.hpp"

#include <cmath>

#include "ccx/lp.hpp"
#include "ccx/parallel.hpp"

namespace ccx {
namespace oracle {

namespace {
constexpr double kLpTol = 1e-9;
constexpr int kMaxPoints = 512;
}  // namespace

CaratheodoryCertificate convex_envelope_value(int dim,
                                              std::span<const double> points,
                                              std::span<const double> values,
                                              const double* x0) {
  require(dim >= 1 && dim <= kMaxDim, ErrorCode::invalid_argument,
          "dimension must be in [1,3]");
  const int count = static_cast<int>(values.size());
  require(count >= 1, ErrorCode::invalid_argument, "empty point set");
  require(points.size() == static_cast<std::size_t>(count) * dim,
          ErrorCode::invalid_argument, "point/value count mismatch");
  require(count <= kMaxPoints, ErrorCode::size_guard,
          "oracle instances are capped at 512 points");

  double scale = 0.0;
  for (int i = 0; i < count; ++i) {
    for (int k = 0; k < dim; ++k) {
      scale = std::max(scale, std::abs(points[i * dim + k] - x0[k]));
    }
  }
  if (scale == 0.0) scale = 1.0;

  const int m = dim + 1;
  std::vector<double> e(static_cast<std::size_t>(m) * count);
  std::vector<double> rhs(m, 0.0);
  rhs[0] = 1.0;
  for (int i = 0; i < count; ++i) {
    e[i] = 1.0;
    for (int k = 0; k < dim; ++k) {
      e[static_cast<std::size_t>(k + 1) * count + i] =
          (points[i * dim + k] - x0[k]) / scale;
    }
  }
  SimplexResult lp = simplex_min(m, count, e.data(), rhs.data(), values.data(),
                                 kLpTol, false);
  require(lp.feasible, ErrorCode::not_in_hull,
          "query point is outside the convex hull of the data");

  CaratheodoryCertificate cert;
  cert.value = lp.objective;
  for (int i = 0; i < count; ++i) {
    if (lp.weights[i] > 1e-12) {
      cert.support.push_back(i);
      cert.weights.push_back(lp.weights[i]);
    }
  }
  return cert;
}

double lower_transform_exact(const ScatteredSamples& samples, const double* x0,
                             double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  const int dim = samples.dim();
  const std::int64_t n = samples.count();
  std::vector<double> shifted(samples.values());
  for (std::int64_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = samples.points()[i * dim + k] - x0[k];
      d2 += d * d;
    }
    shifted[i] += lambda * d2;
  }
  return convex_envelope_value(dim, samples.points(), shifted, x0).value;
}

double upper_transform_exact(const ScatteredSamples& samples, const double* x0,
                             double lambda) {
  std::vector<double> neg(samples.values());
  for (double& v : neg) v = -v;
  ScatteredSamples flipped(samples.dim(), samples.points(), std::move(neg));
  return -lower_transform_exact(flipped, x0, lambda);
}

double average_approx_exact(const ScatteredSamples& samples, const double* x0,
                            double lambda) {
  const double lo = lower_transform_exact(samples, x0, lambda);
  const double hi = upper_transform_exact(samples, x0, lambda);
  return lo + 0.5 * (hi - lo);
}

GridFunction moreau_bruteforce(const GridFunction& f, double lambda,
                               MoreauKind kind) {
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  const GridDomain& dom = f.domain();
  const std::int64_t n = dom.node_count();
  require(n <= 65536, ErrorCode::size_guard,
          "brute-force Moreau is capped at 65536 nodes");
  const int dim = dom.dim();
  std::array<double, kMaxDim> c{0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) c[k] = lambda * dom.spacing(k) * dom.spacing(k);

  std::vector<double> out(n);
  const bool lower = kind == MoreauKind::lower;
  parallel_for(n, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      const auto xi = dom.unflatten(i);
      double best = 0.0;
      bool first = true;
      for (std::int64_t j = 0; j < n; ++j) {
        const auto xj = dom.unflatten(j);
        double t = 0.0;
        for (int k = 0; k < dim; ++k) {
          const double d = static_cast<double>(xi[k] - xj[k]);
          t += c[k] * (d * d);
        }
        const double cand = lower ? f[j] + t : f[j] - t;
        if (first || (lower ? cand < best : cand > best)) {
          best = cand;
          first = false;
        }
      }
      out[i] = best;
    }
  });
  return GridFunction(dom, std::move(out));
}

double spike_upper_value(double alpha, double lambda, double distance) {
  require(std::isfinite(alpha) && alpha > 0.0, ErrorCode::bad_params,
          "alpha must be positive");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  const double r = std::sqrt(alpha / lambda);
  const double d = std::abs(distance);
  if (d >= r) return 0.0;
  const double t = d - r;
  return lambda * t * t;
}

}  // namespace oracle
}  // namespace ccx
