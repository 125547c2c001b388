#include "ccx/moreau.hpp"

#include <cmath>
#include <limits>

#include "ccx/parallel.hpp"

namespace ccx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// winners[i] = argmin_j w[j] + c*(i-j)^2 over the whole line.
// idx needs m entries, z needs m+1. Ties break toward the smaller index.
void envelope_argmin(const double* w, std::int64_t m, double c,
                     std::int64_t* winners, std::int64_t* idx, double* z) {
  auto intersect = [&](std::int64_t j, std::int64_t p) {
    const double jj = static_cast<double>(j);
    const double pp = static_cast<double>(p);
    return ((w[j] + c * jj * jj) - (w[p] + c * pp * pp)) /
           (2.0 * c * (jj - pp));
  };
  std::int64_t k = 0;
  idx[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (std::int64_t j = 1; j < m; ++j) {
    double s = intersect(j, idx[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(j, idx[k]);
    }
    ++k;
    idx[k] = j;
    z[k] = s;
    z[k + 1] = kInf;
  }
  std::int64_t p = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    while (z[p + 1] < static_cast<double>(i)) ++p;
    winners[i] = idx[p];
  }
}

// Direct windowed variant; same tie rule (first minimum scanning upward).
void windowed_argmin(const double* w, std::int64_t m, double c, std::int64_t r,
                     std::int64_t* winners) {
  for (std::int64_t i = 0; i < m; ++i) {
    const std::int64_t lo = std::max<std::int64_t>(0, i - r);
    const std::int64_t hi = std::min<std::int64_t>(m - 1, i + r);
    std::int64_t best = lo;
    double dj = static_cast<double>(i - lo);
    double bestv = w[lo] + c * dj * dj;
    for (std::int64_t j = lo + 1; j <= hi; ++j) {
      dj = static_cast<double>(i - j);
      const double v = w[j] + c * dj * dj;
      if (v < bestv) {
        bestv = v;
        best = j;
      }
    }
    winners[i] = best;
  }
}

struct LineScratch {
  std::vector<double> v;
  std::array<std::vector<std::int64_t>, kMaxDim> q;
  std::vector<double> gbase;
  std::vector<std::int64_t> winners;
  std::vector<std::int64_t> idx;
  std::vector<double> z;

  void resize(std::int64_t m, int dim) {
    v.resize(m);
    gbase.resize(m);
    winners.resize(m);
    idx.resize(m);
    z.resize(m + 1);
    for (int k = 0; k < dim; ++k) q[k].resize(m);
  }
};

void sweep_axis(detail::SweepField& field, const GridDomain& dom, int axis,
                int sign, std::int64_t radius) {
  const int n = field.dim;
  const std::int64_t len = dom.extent(axis);
  if (len == 1) return;  // single node per line: identity sweep
  std::int64_t stride = 1;
  for (int k = axis + 1; k < n; ++k) stride *= dom.extent(k);
  const std::int64_t nlines = dom.node_count() / len;
  const double c = field.c[axis];

  parallel_for(nlines, [&](std::int64_t lb, std::int64_t le) {
    LineScratch s;
    s.resize(len, n);
    for (std::int64_t line = lb; line < le; ++line) {
      const std::int64_t outer = line / stride;
      const std::int64_t inner = line % stride;
      const std::int64_t off = outer * len * stride + inner;
      // Gather the line.
      for (std::int64_t j = 0; j < len; ++j) {
        const std::int64_t p = off + j * stride;
        s.gbase[j] = field.base[p];
        double t = field.c[0] * static_cast<double>(field.q[0][p]);
        for (int k = 1; k < n; ++k)
          t += field.c[k] * static_cast<double>(field.q[k][p]);
        const double val = field.base[p] + t;
        s.v[j] = sign > 0 ? val : -val;
        for (int k = 0; k < n; ++k) s.q[k][j] = field.q[k][p];
      }
      if (radius >= 0) {
        windowed_argmin(s.v.data(), len, c, radius, s.winners.data());
      } else {
        envelope_argmin(s.v.data(), len, c, s.winners.data(), s.idx.data(),
                        s.z.data());
      }
      // Scatter winner provenance back.
      for (std::int64_t i = 0; i < len; ++i) {
        const std::int64_t j = s.winners[i];
        const std::int64_t p = off + i * stride;
        field.base[p] = s.gbase[j];
        for (int k = 0; k < n; ++k) field.q[k][p] = s.q[k][j];
        const std::int64_t d = i - j;
        field.q[axis][p] += sign > 0 ? d * d : -(d * d);
      }
    }
  });
}

}  // namespace

Window Window::from_physical_radius(const GridDomain& domain, double r) {
  require(std::isfinite(r) && r >= 0.0, ErrorCode::bad_params,
          "window radius must be nonnegative");
  Window w;
  for (int k = 0; k < domain.dim(); ++k) {
    w.radius[k] = static_cast<std::int64_t>(std::ceil(r / domain.spacing(k)));
  }
  return w;
}

double locality_radius(double m, double lambda) {
  require(std::isfinite(m) && m > 0.0, ErrorCode::bad_params,
          "M must be positive");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  return 2.0 * std::sqrt(2.0) * std::sqrt(m / lambda);
}

namespace detail {

void SweepField::init(const GridFunction& f, double lambda) {
  const GridDomain& dom = f.domain();
  dim = dom.dim();
  for (int k = 0; k < dim; ++k) {
    c[k] = lambda * dom.spacing(k) * dom.spacing(k);
  }
  base = f.values();
  for (int k = 0; k < dim; ++k) {
    q[k].assign(dom.node_count(), 0);
  }
}

std::vector<double> SweepField::canonical_all() const {
  std::vector<double> out(base.size());
  const std::int64_t n = static_cast<std::int64_t>(base.size());
  parallel_for(n, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) out[i] = canonical(i);
  });
  return out;
}

void moreau_pass(SweepField& field, const GridDomain& domain, int sign,
                 const std::optional<Window>& window) {
  for (int axis = 0; axis < domain.dim(); ++axis) {
    const std::int64_t r = window ? window->radius[axis] : -1;
    sweep_axis(field, domain, axis, sign, r);
  }
}

}  // namespace detail

std::vector<double> lower_moreau_1d(std::span<const double> values,
                                    double lambda, double h) {
  require(!values.empty(), ErrorCode::invalid_argument, "empty input");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  require(std::isfinite(h) && h > 0.0, ErrorCode::bad_params,
          "h must be positive");
  const std::int64_t shape[1] = {static_cast<std::int64_t>(values.size())};
  const double hs[1] = {h};
  const double org[1] = {0.0};
  GridDomain dom(1, shape, hs, org);
  GridFunction f(dom, std::vector<double>(values.begin(), values.end()));
  return lower_moreau(f, lambda).values();
}

GridFunction lower_moreau(const GridFunction& f, double lambda,
                          const std::optional<Window>& window) {
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  detail::SweepField field;
  field.init(f, lambda);
  detail::moreau_pass(field, f.domain(), +1, window);
  return GridFunction(f.domain(), field.canonical_all());
}

GridFunction upper_moreau(const GridFunction& f, double lambda,
                          const std::optional<Window>& window) {
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  detail::SweepField field;
  field.init(f, lambda);
  detail::moreau_pass(field, f.domain(), -1, window);
  return GridFunction(f.domain(), field.canonical_all());
}

}  // namespace ccx
