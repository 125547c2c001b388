#include "ccx/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "ccx/parallel.hpp"

namespace ccx {

namespace {

constexpr int kMaxKnotBins = 256;
constexpr std::int64_t kExhaustiveNodeCap = 4096;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct BinAcc {
  double max_dist = 0.0;
  double max_gap = -1.0;  // -1 marks an empty bin
};

}  // namespace

double ModulusModel::eval_cav(double t) const {
  require(has_cav(), ErrorCode::invalid_argument,
          "concave majorant has not been computed");
  if (t <= 0.0) return 0.0;
  const std::size_t n = knots.size();
  if (t >= knots[n - 1]) {
    if (n == 1) return 0.0;
    // Last-chord extension keeps the majorant concave and nondecreasing.
    const double slope =
        (omega_cav[n - 1] - omega_cav[n - 2]) / (knots[n - 1] - knots[n - 2]);
    return omega_cav[n - 1] + slope * (t - knots[n - 1]);
  }
  const auto it = std::upper_bound(knots.begin(), knots.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - knots.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - knots[lo]) / (knots[hi] - knots[lo]);
  return omega_cav[lo] + w * (omega_cav[hi] - omega_cav[lo]);
}

ModulusModel ModulusModel::linear(double slope) {
  require(std::isfinite(slope) && slope >= 0.0, ErrorCode::bad_params,
          "modulus slope must be nonnegative");
  ModulusModel m;
  m.knots = {0.0, 1.0};
  m.omega_f = {0.0, slope};
  m.omega_cav = {0.0, slope};
  m.a = slope;
  m.b = 0.0;
  m.affine_valid = true;
  return m;
}

ModulusModel ModulusModel::zero() { return linear(0.0); }

ModulusModel ModulusModel::from_samples(std::vector<double> knots,
                                        std::vector<double> omega_f) {
  require(!knots.empty() && knots.size() == omega_f.size(),
          ErrorCode::invalid_argument, "knot/value length mismatch");
  require(knots[0] == 0.0 && omega_f[0] == 0.0, ErrorCode::invalid_argument,
          "modulus must start at (0, 0)");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    require(knots[i] > knots[i - 1], ErrorCode::invalid_argument,
            "knots must be strictly increasing");
    require(omega_f[i] >= omega_f[i - 1], ErrorCode::invalid_argument,
            "modulus values must be nondecreasing");
  }
  ModulusModel m;
  m.knots = std::move(knots);
  m.omega_f = std::move(omega_f);
  return m;
}

ModulusModel empirical_modulus(const GridFunction& f, std::int64_t max_pairs) {
  const GridDomain& dom = f.domain();
  const std::int64_t n = dom.node_count();
  const int dim = dom.dim();

  std::vector<double> coords(static_cast<std::size_t>(n) * dim);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto x = dom.node_coords(i);
    for (int k = 0; k < dim; ++k) coords[i * dim + k] = x[k];
  }
  double dmax2 = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double span = dom.spacing(k) * static_cast<double>(dom.extent(k) - 1);
    dmax2 += span * span;
  }
  const double dmax = std::sqrt(dmax2);

  std::vector<BinAcc> bins(kMaxKnotBins);
  auto feed = [&](std::vector<BinAcc>& acc, std::int64_t i, std::int64_t j) {
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = coords[i * dim + k] - coords[j * dim + k];
      d2 += d * d;
    }
    if (d2 == 0.0) return;
    const double dist = std::sqrt(d2);
    int bi = dmax > 0.0
                 ? static_cast<int>(dist / dmax * kMaxKnotBins)
                 : 0;
    bi = std::min(bi, kMaxKnotBins - 1);
    const double gap = std::abs(f[i] - f[j]);
    acc[bi].max_dist = std::max(acc[bi].max_dist, dist);
    acc[bi].max_gap = std::max(acc[bi].max_gap, gap);
  };

  if (n <= kExhaustiveNodeCap) {
    std::mutex merge_mutex;
    parallel_for(n, [&](std::int64_t b, std::int64_t e) {
      std::vector<BinAcc> local(kMaxKnotBins);
      for (std::int64_t i = b; i < e; ++i) {
        for (std::int64_t j = i + 1; j < n; ++j) feed(local, i, j);
      }
      // Merging under max is order-independent, so the result stays
      // deterministic regardless of scheduling.
      std::lock_guard<std::mutex> lock(merge_mutex);
      for (int bi = 0; bi < kMaxKnotBins; ++bi) {
        bins[bi].max_dist = std::max(bins[bi].max_dist, local[bi].max_dist);
        bins[bi].max_gap = std::max(bins[bi].max_gap, local[bi].max_gap);
      }
    });
  } else {
    require(max_pairs > 0, ErrorCode::invalid_argument,
            "max_pairs must be positive for sampled enumeration");
    std::uint64_t rng = 0x0123456789ABCDEFull;
    for (std::int64_t p = 0; p < max_pairs; ++p) {
      const std::int64_t i =
          static_cast<std::int64_t>(splitmix64(rng) % static_cast<std::uint64_t>(n));
      const std::int64_t j =
          static_cast<std::int64_t>(splitmix64(rng) % static_cast<std::uint64_t>(n));
      if (i != j) feed(bins, i, j);
    }
  }

  ModulusModel model;
  model.knots.push_back(0.0);
  model.omega_f.push_back(0.0);
  double running = 0.0;
  for (const BinAcc& bin : bins) {
    if (bin.max_gap < 0.0) continue;
    running = std::max(running, bin.max_gap);
    model.knots.push_back(bin.max_dist);
    model.omega_f.push_back(running);
  }
  return model;
}

void least_concave_majorant(ModulusModel& model) {
  const std::size_t n = model.knots.size();
  require(n >= 1 && model.omega_f.size() == n, ErrorCode::invalid_argument,
          "empirical modulus is not populated");
  // Upper concave hull of the knot points; slopes strictly decreasing.
  std::vector<std::size_t> hull;
  auto slope = [&](std::size_t u, std::size_t v) {
    return (model.omega_f[v] - model.omega_f[u]) /
           (model.knots[v] - model.knots[u]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2 &&
           slope(hull[hull.size() - 1], i) >=
               slope(hull[hull.size() - 2], hull[hull.size() - 1])) {
      hull.pop_back();
    }
    hull.push_back(i);
  }
  model.omega_cav.assign(n, 0.0);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (seg + 1 < hull.size() && model.knots[hull[seg + 1]] < model.knots[i])
      ++seg;
    if (seg + 1 >= hull.size()) {
      model.omega_cav[i] = model.omega_f[hull.back()];
      continue;
    }
    const std::size_t u = hull[seg];
    const std::size_t v = hull[seg + 1];
    const double w =
        (model.knots[i] - model.knots[u]) / (model.knots[v] - model.knots[u]);
    model.omega_cav[i] =
        model.omega_f[u] + w * (model.omega_f[v] - model.omega_f[u]);
  }
}

std::pair<double, double> affine_bound(ModulusModel& model) {
  require(model.has_cav(), ErrorCode::invalid_argument,
          "concave majorant has not been computed");
  const std::size_t n = model.knots.size();
  if (n == 1) {
    model.a = 0.0;
    model.b = 0.0;
  } else {
    // Find the final hull segment of omega_cav (skip trailing equal knots).
    std::size_t lo = n - 2;
    const double a = (model.omega_cav[n - 1] - model.omega_cav[lo]) /
                     (model.knots[n - 1] - model.knots[lo]);
    model.a = std::max(0.0, a);
    model.b = model.omega_cav[n - 1] - model.a * model.knots[n - 1];
    if (model.b < 0.0) model.b = 0.0;
  }
  model.affine_valid = true;
  return {model.a, model.b};
}

double error_bound_uc(double r_c, double lambda, const ModulusModel& model) {
  require(std::isfinite(r_c) && r_c >= 0.0, ErrorCode::bad_params,
          "r_c must be nonnegative");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  require(model.has_cav() && model.affine_valid, ErrorCode::invalid_argument,
          "modulus model is incomplete");
  const double arg = r_c + model.a / lambda + std::sqrt(2.0 * model.b / lambda);
  return model.eval_cav(arg);
}

double error_bound_lip(double r_c, double lambda, double l) {
  require(std::isfinite(l) && l >= 0.0, ErrorCode::bad_params,
          "L must be nonnegative");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  return l * r_c + l * l / lambda;
}

double error_bound_c11(double r_c, double lambda, double l) {
  require(std::isfinite(l) && l >= 0.0, ErrorCode::bad_params,
          "L must be nonnegative");
  require(std::isfinite(lambda) && lambda > l, ErrorCode::bad_params,
          "the C^{1,1} bound requires lambda > L");
  return 0.25 * l * ((lambda + 0.5 * l) / (lambda - 0.5 * l) + 1.0) * r_c * r_c;
}

}  // namespace ccx
