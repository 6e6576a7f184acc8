#include "relcoll/density_field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relcoll {

DensityField::DensityField(double half_width, int n_per_axis)
    : half_width_(half_width), n_(n_per_axis), spacing_(0.0) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("DensityField: half_width must be positive");
  }
  if (n_per_axis < 1) throw std::invalid_argument("DensityField: n_per_axis must be >= 1");
  spacing_ = 2.0 * half_width / n_per_axis;
  values_.assign(static_cast<std::size_t>(n_) * n_ * n_, 0.0);
}

DensityField DensityField::sample(double half_width, int n_per_axis,
                                  const std::function<double(const Vec3&)>& fn) {
  DensityField f(half_width, n_per_axis);
  for (std::size_t idx = 0; idx < f.size(); ++idx) f.values_[idx] = fn(f.node(idx));
  f.validate();
  return f;
}

Vec3 DensityField::node(std::size_t idx) const {
  const int k = static_cast<int>(idx % n_);
  const int j = static_cast<int>((idx / n_) % n_);
  const int i = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
  return {coord(i), coord(j), coord(k)};
}

bool DensityField::contains(const Vec3& v) const {
  const double w = half_width_;
  return std::abs(v.x) <= w && std::abs(v.y) <= w && std::abs(v.z) <= w;
}

bool DensityField::same_grid(const DensityField& other) const {
  return n_ == other.n_ && half_width_ == other.half_width_;
}

void DensityField::validate() const {
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    const double x = values_[idx];
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument("DensityField: node " + std::to_string(idx) +
                                  " is negative or non-finite");
    }
  }
}

double DensityField::interpolate(const Vec3& v) const { return Interpolator(*this)(v); }

Interpolator::Interpolator(const DensityField& f)
    : half_width_(f.half_width()),
      inv_h_(1.0 / f.spacing()),
      hi_(f.n() + 0.5),
      stride_(static_cast<std::size_t>(f.n()) + 2) {
  padded_.assign(stride_ * stride_ * stride_, 0.0);
  const int n = f.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        padded_[((i + 1) * stride_ + (j + 1)) * stride_ + (k + 1)] = f[f.index(i, j, k)];
      }
    }
  }
}

}  // namespace relcoll
