#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "relcoll/vec3.hpp"

namespace relcoll {

/// Cell-centred sampling of f on [-V, V]^3 with N nodes per axis.
/// Node (i, j, k) sits at (-V + (i + 1/2) h, ...), h = 2V / N.
class DensityField {
 public:
  DensityField(double half_width, int n_per_axis);

  static DensityField sample(double half_width, int n_per_axis,
                             const std::function<double(const Vec3&)>& fn);

  double half_width() const { return half_width_; }
  int n() const { return n_; }
  double spacing() const { return spacing_; }
  double cell_volume() const { return spacing_ * spacing_ * spacing_; }
  std::size_t size() const { return values_.size(); }

  double coord(int i) const { return -half_width_ + (i + 0.5) * spacing_; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  Vec3 node(std::size_t idx) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t idx) const { return values_[idx]; }
  double& operator[](std::size_t idx) { return values_[idx]; }

  bool contains(const Vec3& v) const;
  bool same_grid(const DensityField& other) const;

  /// Throws std::invalid_argument on a negative or non-finite node value.
  void validate() const;

  /// Trilinear interpolation, zero outside [-V, V]^3. Convenience entry
  /// point; loops should build an Interpolator once.
  double interpolate(const Vec3& v) const;

 private:
  double half_width_;
  int n_;
  double spacing_;
  std::vector<double> values_;
};

/// Trilinear interpolant over a zero-padded copy of a field. Ghost nodes
/// outside the grid are zero and anything outside [-V, V]^3 evaluates to 0.
class Interpolator {
 public:
  explicit Interpolator(const DensityField& f);

  double operator()(const Vec3& x) const {
    const double tx = (x.x + half_width_) * inv_h_ + 0.5;
    const double ty = (x.y + half_width_) * inv_h_ + 0.5;
    const double tz = (x.z + half_width_) * inv_h_ + 0.5;
    if (!(tx >= 0.5 && tx <= hi_ && ty >= 0.5 && ty <= hi_ && tz >= 0.5 && tz <= hi_)) return 0.0;
    const int ix = static_cast<int>(tx);
    const int iy = static_cast<int>(ty);
    const int iz = static_cast<int>(tz);
    const double fx = tx - ix;
    const double fy = ty - iy;
    const double fz = tz - iz;
    const double* p = padded_.data() + (static_cast<std::size_t>(ix) * stride_ + iy) * stride_ + iz;
    const std::size_t sy = stride_;
    const std::size_t sx = stride_ * stride_;
    const double c00 = p[0] + fz * (p[1] - p[0]);
    const double c01 = p[sy] + fz * (p[sy + 1] - p[sy]);
    const double c10 = p[sx] + fz * (p[sx + 1] - p[sx]);
    const double c11 = p[sx + sy] + fz * (p[sx + sy + 1] - p[sx + sy]);
    const double c0 = c00 + fy * (c01 - c00);
    const double c1 = c10 + fy * (c11 - c10);
    return c0 + fx * (c1 - c0);
  }

 private:
  double half_width_;
  double inv_h_;
  double hi_;
  std::size_t stride_;
  std::vector<double> padded_;
};

}  // namespace relcoll
