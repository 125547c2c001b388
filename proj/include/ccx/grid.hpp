#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccx/error.hpp"

namespace ccx {

inline constexpr int kMaxDim = 3;

/// Regular axis-aligned grid: per-axis node count, spacing and the physical
/// coordinates of node (0,...,0). Node (i_1,...,i_n) sits at
/// origin + (i_k * h_k). Values stored elsewhere are row-major with the last
/// axis fastest.
class GridDomain {
public:
  GridDomain(int dim, std::span<const std::int64_t> shape,
             std::span<const double> spacing, std::span<const double> origin);

  int dim() const { return dim_; }
  std::int64_t extent(int axis) const { return shape_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double origin(int axis) const { return origin_[axis]; }
  std::int64_t node_count() const { return count_; }

  double coord(int axis, std::int64_t index) const {
    return origin_[axis] + spacing_[axis] * static_cast<double>(index);
  }

  /// Row-major flattening, last axis fastest.
  std::int64_t flatten(std::span<const std::int64_t> idx) const;
  std::array<std::int64_t, kMaxDim> unflatten(std::int64_t flat) const;
  /// Physical coordinates of a node given its flat index.
  std::array<double, kMaxDim> node_coords(std::int64_t flat) const;

  bool operator==(const GridDomain& other) const;
  bool operator!=(const GridDomain& other) const { return !(*this == other); }

private:
  int dim_ = 0;
  std::array<std::int64_t, kMaxDim> shape_{1, 1, 1};
  std::array<double, kMaxDim> spacing_{1.0, 1.0, 1.0};
  std::array<double, kMaxDim> origin_{0.0, 0.0, 0.0};
  std::int64_t count_ = 0;
};

/// Finite real values on every node of a GridDomain. NaN and infinities are
/// rejected at construction; unbounded extensions live in the oracle module
/// on finite sample sets, never on grids.
class GridFunction {
public:
  GridFunction(GridDomain domain, std::vector<double> values);

  const GridDomain& domain() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  double operator[](std::int64_t flat) const { return values_[flat]; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

  static GridFunction constant(const GridDomain& domain, double value);

private:
  GridDomain domain_;
  std::vector<double> values_;
};

/// Boolean node membership over a GridDomain; carries the sample set K (or
/// its complement's complement). Always nonempty.
class SampleMask {
public:
  SampleMask(GridDomain domain, std::vector<std::uint8_t> member);

  const GridDomain& domain() const { return domain_; }
  bool is_member(std::int64_t flat) const { return member_[flat] != 0; }
  const std::vector<std::uint8_t>& member() const { return member_; }
  std::int64_t member_count() const { return member_count_; }
  std::int64_t size() const { return static_cast<std::int64_t>(member_.size()); }

  /// Flat indices of member nodes, ascending.
  std::vector<std::int64_t> member_indices() const;
  /// Physical coordinates of member nodes (dim() values each, packed).
  std::vector<double> member_coords() const;

  static SampleMask full(const GridDomain& domain);
  /// Non-member nodes become members and vice versa; fails when the
  /// complement is empty.
  SampleMask inverted() const;

  /// Largest pairwise distance between member nodes (0 for one node).
  double diameter() const;

private:
  GridDomain domain_;
  std::vector<std::uint8_t> member_;
  std::int64_t member_count_ = 0;
};

/// Finite list of (point, value) samples; duplicate points are allowed and
/// represent multivalued data.
class ScatteredSamples {
public:
  ScatteredSamples(int dim, std::vector<double> points, std::vector<double> values);

  int dim() const { return dim_; }
  std::int64_t count() const { return static_cast<std::int64_t>(values_.size()); }
  /// Packed point coordinates, dim() per sample.
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> point(std::int64_t i) const {
    return {points_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

private:
  int dim_;
  std::vector<double> points_;
  std::vector<double> values_;
};

/// Scale parameters for transforms and approximations. M is either finite or
/// a symbolic infinity; the infinite regime is only legal on oracle paths.
struct TransformParams {
  double lambda = 1.0;
  std::optional<double> tau;
  bool m_infinite = false;
  double m = 1.0;         // meaningful only when !m_infinite
  double s = 0.5;

  static TransformParams with_lambda(double lambda, double m) {
    TransformParams p;
    p.lambda = lambda;
    p.m = m;
    return p;
  }

  void validate() const;
};

enum class ExtendSign { plus, minus };

/// f extended off K by the constant +M or -M.
GridFunction extend_with_constant(const GridFunction& f_on_k, const SampleMask& k,
                                  double m, ExtendSign sign);

/// Threshold a0 + lambda * d^2; callers must pick M strictly greater.
double min_safe_m(double a0, double lambda, double d);

/// Max of |f| over member nodes.
double bound_a0(const GridFunction& f_on_k, const SampleMask& k);

struct MedianShiftResult {
  GridFunction shifted;
  double shift;  // midrange (sup+inf)/2 over K
};

/// Subtracts the midrange of f over K so the shifted values have midrange 0.
MedianShiftResult median_shift(const GridFunction& f_on_k, const SampleMask& k);

}  // namespace ccx
