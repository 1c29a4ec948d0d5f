#include "romr/mcl/likelihood_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace romr::mcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) over one line.
// Infinite samples contribute no parabola.
void transform_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  auto meet = [&](int q, int p) {
    return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
  };
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (std::isinf(f[q])) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s = meet(q, v[k]);
    while (s <= z[k]) s = meet(q, v[--k]);
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(d, d + n, kInf);
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

void SensorModel::validate() const {
  if (!(sigma_hit > 0) || !(max_distance > 0) || z_hit < 0 || z_rand < 0 ||
      std::abs(z_hit + z_rand - 1.0) > 1e-9) {
    throw std::invalid_argument("sensor model needs sigma > 0 and z_hit + z_rand = 1");
  }
}

std::vector<double> squared_distance_transform(const std::vector<bool>& feature, int width,
                                               int height) {
  const auto w = static_cast<std::size_t>(width);
  std::vector<double> out(feature.size());
  for (std::size_t i = 0; i < feature.size(); ++i) out[i] = feature[i] ? 0.0 : kInf;

  std::vector<int> v;
  std::vector<double> z;
  std::vector<double> f(static_cast<std::size_t>(std::max(width, height)));
  std::vector<double> d(f.size());
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) f[y] = out[y * w + x];
    transform_1d(f.data(), d.data(), height, v, z);
    for (int y = 0; y < height; ++y) out[y * w + x] = d[y];
  }
  for (int y = 0; y < height; ++y) {
    transform_1d(&out[y * w], d.data(), width, v, z);
    std::copy(d.begin(), d.begin() + width, out.begin() + static_cast<long>(y * w));
  }
  return out;
}

LikelihoodField::LikelihoodField(const OccupancyGrid& map, SensorModel model)
    : model_(model),
      frame_(1, 1, map.resolution(), map.origin()),
      width_(map.width()),
      height_(map.height()) {
  model_.validate();
  std::vector<bool> occupied(static_cast<std::size_t>(width_) * height_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      occupied[static_cast<std::size_t>(y) * width_ + x] =
          map.classify({x, y}) == CellClass::Occupied;
  distances_ = squared_distance_transform(occupied, width_, height_);
  for (double& d : distances_) {
    d = std::min(std::sqrt(d) * map.resolution(), model_.max_distance);
  }
}

double LikelihoodField::distance(const Vec2& p) const {
  const Vec2 m = frame_.world_to_map(p);
  const double fx = std::floor(m.x()), fy = std::floor(m.y());
  if (!(fx >= 0 && fy >= 0 && fx < width_ && fy < height_)) return model_.max_distance;
  return distance(static_cast<int>(fx), static_cast<int>(fy));
}

double LikelihoodField::beam_likelihood(double distance, double range_max) const {
  const double s = model_.sigma_hit;
  const double gauss = std::exp(-0.5 * distance * distance / (s * s)) / (s * std::sqrt(2.0 * kPi));
  return model_.z_hit * gauss + model_.z_rand / range_max;
}

}  // namespace romr::mcl
