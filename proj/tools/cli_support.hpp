#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccx/capi.h"

namespace ccxcli {

using nlohmann::json;

// Exit codes: 0 pass, 2 input error, 3 invariant violation, 4 parameter
// error.
inline int exit_code_for(ccx_status s) {
  switch (s) {
    case CCX_OK:
      return 0;
    case CCX_ERR_IO:
    case CCX_ERR_FORMAT:
    case CCX_ERR_EMPTY_MASK:
    case CCX_ERR_DOMAIN_MISMATCH:
    case CCX_ERR_NOT_IN_HULL:
    case CCX_ERR_SIZE_GUARD:
      return 2;
    case CCX_ERR_INTERNAL:
      return 3;
    default:
      return 4;
  }
}

/// Raised by command bodies; main() turns it into the exit code.
struct CliError : std::runtime_error {
  int code;
  CliError(int code_, const std::string& msg)
      : std::runtime_error(msg), code(code_) {}
};

inline void must(ccx_status s, const std::string& context) {
  if (s == CCX_OK) return;
  throw CliError(exit_code_for(s),
                 context + ": " + ccx_status_name(s) + " (" +
                     ccx_last_error() + ")");
}

[[noreturn]] inline void fail_param(const std::string& msg) {
  throw CliError(4, msg);
}

struct GridDeleter {
  void operator()(ccx_grid* g) const { ccx_grid_destroy(g); }
};
struct MaskDeleter {
  void operator()(ccx_mask* m) const { ccx_mask_destroy(m); }
};
struct SamplesDeleter {
  void operator()(ccx_samples* s) const { ccx_samples_destroy(s); }
};
struct ModulusDeleter {
  void operator()(ccx_modulus* m) const { ccx_modulus_destroy(m); }
};
using GridPtr = std::unique_ptr<ccx_grid, GridDeleter>;
using MaskPtr = std::unique_ptr<ccx_mask, MaskDeleter>;
using SamplesPtr = std::unique_ptr<ccx_samples, SamplesDeleter>;
using ModulusPtr = std::unique_ptr<ccx_modulus, ModulusDeleter>;

/// Flat description of a grid/mask domain for window arithmetic.
struct DomainSpec {
  int dim = 0;
  std::vector<std::int64_t> shape;
  std::vector<double> spacing;
  std::vector<double> origin;

  std::int64_t node_count() const {
    std::int64_t n = 1;
    for (auto s : shape) n *= s;
    return n;
  }
  std::int64_t flatten(const std::int64_t* idx) const {
    std::int64_t flat = 0;
    for (int k = 0; k < dim; ++k) flat = flat * shape[k] + idx[k];
    return flat;
  }
  void unflatten(std::int64_t flat, std::int64_t* idx) const {
    for (int k = dim - 1; k >= 0; --k) {
      idx[k] = flat % shape[k];
      flat /= shape[k];
    }
  }
  void coords(std::int64_t flat, double* x) const {
    std::int64_t idx[3];
    unflatten(flat, idx);
    for (int k = 0; k < dim; ++k) {
      x[k] = origin[k] + spacing[k] * static_cast<double>(idx[k]);
    }
  }
};

inline DomainSpec domain_of(const ccx_grid* g) {
  DomainSpec d;
  d.dim = ccx_grid_dim(g);
  d.shape.resize(d.dim);
  d.spacing.resize(d.dim);
  d.origin.resize(d.dim);
  must(ccx_grid_shape(g, d.shape.data()), "grid shape");
  must(ccx_grid_spacing(g, d.spacing.data()), "grid spacing");
  must(ccx_grid_origin(g, d.origin.data()), "grid origin");
  return d;
}

inline DomainSpec domain_of(const ccx_mask* m) {
  DomainSpec d;
  d.dim = ccx_mask_dim(m);
  d.shape.resize(d.dim);
  d.spacing.resize(d.dim);
  d.origin.resize(d.dim);
  must(ccx_mask_shape(m, d.shape.data()), "mask shape");
  must(ccx_mask_spacing(m, d.spacing.data()), "mask spacing");
  must(ccx_mask_origin(m, d.origin.data()), "mask origin");
  return d;
}

inline GridPtr make_grid(const DomainSpec& d, const std::vector<double>& v) {
  ccx_grid* g = nullptr;
  must(ccx_grid_create(d.dim, d.shape.data(), d.spacing.data(),
                       d.origin.data(), v.data(), &g),
       "grid create");
  return GridPtr(g);
}

inline MaskPtr make_mask(const DomainSpec& d,
                         const std::vector<std::uint8_t>& m) {
  ccx_mask* h = nullptr;
  must(ccx_mask_create(d.dim, d.shape.data(), d.spacing.data(),
                       d.origin.data(), m.data(), &h),
       "mask create");
  return MaskPtr(h);
}

/// Crops a padded grid back to an inner window offset by `off` nodes per
/// axis.
inline GridPtr crop_grid(const ccx_grid* padded, const DomainSpec& inner,
                         std::int64_t off) {
  const DomainSpec big = domain_of(padded);
  const double* values = ccx_grid_values(padded);
  std::vector<double> out(inner.node_count());
  std::int64_t idx[3];
  for (std::int64_t i = 0; i < inner.node_count(); ++i) {
    inner.unflatten(i, idx);
    std::int64_t shifted[3];
    for (int k = 0; k < inner.dim; ++k) shifted[k] = idx[k] + off;
    out[i] = values[big.flatten(shifted)];
  }
  return make_grid(inner, out);
}

/// Deterministic generator shared by the experiment drivers.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  std::int64_t index(std::int64_t n) {
    return static_cast<std::int64_t>(next_u64() %
                                     static_cast<std::uint64_t>(n));
  }
};

/// JSON-lines run report; deterministic content, atomic write.
class Report {
public:
  void set_header(json h) { header_ = std::move(h); }
  void add(json line) {
    if (line.contains("pass") && !line["pass"].get<bool>()) ++failures_;
    lines_.push_back(std::move(line));
  }
  int failures() const { return failures_; }

  void write(const std::string& path) const {
    std::string text = header_.dump() + "\n";
    for (const auto& l : lines_) text += l.dump() + "\n";
    if (path.empty() || path == "-") {
      std::fputs(text.c_str(), stdout);
      return;
    }
    namespace fs = std::filesystem;
    fs::path tmp = fs::path(path);
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out.good()) throw CliError(2, "cannot create " + tmp.string());
      out << text;
      if (!out.good()) throw CliError(2, "write failure on " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw CliError(2, "cannot move report onto " + path);
  }

private:
  json header_;
  std::vector<json> lines_;
  int failures_ = 0;
};

}  // namespace ccxcli
