#include "romr/mcl/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace romr::mcl {

ParticleSet init_global(const OccupancyGrid& map, std::size_t n, std::uint64_t seed) {
  std::vector<CellIndex> free;
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x)
      if (map.classify({x, y}) == CellClass::Free) free.push_back({x, y});
  if (free.empty()) throw MclError(MclErrorCode::NoFreeSpace, "map has no free cells");

  ParticleSet ps;
  ps.rng.seed(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> heading(-kPi, kPi);
  ps.particles.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CellIndex c = free[pick(ps.rng)];
    const double mx = c.x + unit(ps.rng);
    const double my = c.y + unit(ps.rng);
    const Vec2 p = map.map_to_world({mx, my});
    ps.particles.push_back({Pose2D(p.x(), p.y(), heading(ps.rng)), 1.0 / static_cast<double>(n)});
  }
  return ps;
}

void predict(ParticleSet& ps, const Pose2D& odom_delta, const MotionNoise& noise) {
  const double trans = std::hypot(odom_delta.x, odom_delta.y);
  const double rot1 = trans < 1e-9 ? 0.0 : std::atan2(odom_delta.y, odom_delta.x);
  const double rot2 = angle_diff(odom_delta.theta, rot1);
  const double sd_rot1 = std::sqrt(noise.a1 * rot1 * rot1 + noise.a2 * trans * trans);
  const double sd_trans =
      std::sqrt(noise.a3 * trans * trans + noise.a4 * (rot1 * rot1 + rot2 * rot2));
  const double sd_rot2 = std::sqrt(noise.a1 * rot2 * rot2 + noise.a2 * trans * trans);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Particle& p : ps.particles) {
    const double r1 = rot1 - sd_rot1 * gauss(ps.rng);
    const double t = trans - sd_trans * gauss(ps.rng);
    const double r2 = rot2 - sd_rot2 * gauss(ps.rng);
    const double heading = p.pose.theta + r1;
    p.pose = Pose2D(p.pose.x + t * std::cos(heading), p.pose.y + t * std::sin(heading),
                    heading + r2);
  }
}

void normalize_weights(ParticleSet& ps) {
  double sum = 0.0;
  for (const Particle& p : ps.particles) sum += p.weight;
  for (Particle& p : ps.particles) p.weight /= sum;
}

WeightUpdate update_weights(ParticleSet& ps, const LaserScan& scan, const LikelihoodField& field,
                            int beam_stride) {
  WeightUpdate out;
  if (ps.particles.empty()) throw MclError(MclErrorCode::EmptySet, "no particles to weight");
  struct Beam {
    double range, cos_a, sin_a;
  };
  std::vector<Beam> beams;
  const auto stride = static_cast<std::size_t>(std::max(beam_stride, 1));
  for (std::size_t i = 0; i < scan.ranges.size(); i += stride) {
    const double r = scan.ranges[i];
    if (!scan.is_valid_return(r)) continue;
    const double a = scan.beam_angle(i);
    beams.push_back({r, std::cos(a), std::sin(a)});
  }
  out.beams_used = static_cast<int>(beams.size());

  std::vector<double> log_w(ps.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Particle& p = ps.particles[k];
    double lw = std::log(p.weight);
    const double c = std::cos(p.pose.theta), s = std::sin(p.pose.theta);
    for (const Beam& b : beams) {
      const double lx = b.range * b.cos_a, ly = b.range * b.sin_a;
      const Vec2 end(p.pose.x + c * lx - s * ly, p.pose.y + s * lx + c * ly);
      lw += std::log(field.beam_likelihood(field.distance(end), scan.range_max));
    }
    log_w[k] = lw;
    best = std::max(best, lw);
  }

  if (!std::isfinite(best)) {
    out.reset = true;
    for (Particle& p : ps.particles) p.weight = 1.0 / static_cast<double>(ps.size());
    return out;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    ps.particles[k].weight = std::exp(log_w[k] - best);
    sum += ps.particles[k].weight;
  }
  for (Particle& p : ps.particles) p.weight /= sum;
  return out;
}

double effective_sample_size(const ParticleSet& ps) {
  double sq = 0.0;
  for (const Particle& p : ps.particles) sq += p.weight * p.weight;
  return sq > 0.0 ? 1.0 / sq : 0.0;
}

std::vector<std::size_t> systematic_resample(const std::vector<double>& weights,
                                             std::size_t n_out, double u0) {
  std::vector<std::size_t> picks;
  picks.reserve(n_out);
  if (weights.empty()) return picks;
  double total = 0.0;
  for (double w : weights) total += w;
  std::size_t i = 0;
  double cumulative = weights[0] / total;
  for (std::size_t k = 0; k < n_out; ++k) {
    const double u = (u0 + static_cast<double>(k)) / static_cast<double>(n_out);
    while (u >= cumulative && i + 1 < weights.size()) cumulative += weights[++i] / total;
    picks.push_back(i);
  }
  return picks;
}

std::size_t adapted_count(const ParticleSet& ps, const ResampleOptions& opts) {
  const double ess = effective_sample_size(ps);
  const double n = static_cast<double>(ps.size());
  const double wanted = ess > 0.0 ? std::round(opts.min_particles * n / ess)
                                  : static_cast<double>(opts.max_particles);
  return static_cast<std::size_t>(std::clamp(wanted, static_cast<double>(opts.min_particles),
                                             static_cast<double>(opts.max_particles)));
}

bool resample(ParticleSet& ps, const ResampleOptions& opts) {
  if (ps.particles.empty()) throw MclError(MclErrorCode::EmptySet, "no particles to resample");
  if (!(effective_sample_size(ps) < opts.ess_fraction * static_cast<double>(ps.size()))) {
    return false;
  }
  const std::size_t n_out = adapted_count(ps, opts);
  std::vector<double> weights(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) weights[k] = ps.particles[k].weight;
  const double u0 = std::uniform_real_distribution<double>(0.0, 1.0)(ps.rng);
  std::vector<Particle> next;
  next.reserve(n_out);
  for (std::size_t i : systematic_resample(weights, n_out, u0)) {
    next.push_back({ps.particles[i].pose, 1.0 / static_cast<double>(n_out)});
  }
  ps.particles = std::move(next);
  return true;
}

PoseEstimate estimate(const ParticleSet& ps) {
  if (ps.particles.empty()) throw MclError(MclErrorCode::EmptySet, "no particles to estimate");
  double total = 0.0, mx = 0.0, my = 0.0, sc = 0.0, ss = 0.0;
  for (const Particle& p : ps.particles) {
    total += p.weight;
    mx += p.weight * p.pose.x;
    my += p.weight * p.pose.y;
    sc += p.weight * std::cos(p.pose.theta);
    ss += p.weight * std::sin(p.pose.theta);
  }
  PoseEstimate out;
  out.pose = Pose2D(mx / total, my / total, std::atan2(ss, sc));
  for (const Particle& p : ps.particles) {
    const Eigen::Vector3d d(p.pose.x - out.pose.x, p.pose.y - out.pose.y,
                            angle_diff(p.pose.theta, out.pose.theta));
    out.covariance += (p.weight / total) * d * d.transpose();
  }
  return out;
}

}  // namespace romr::mcl
