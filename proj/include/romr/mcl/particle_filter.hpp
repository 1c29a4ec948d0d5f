#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "romr/core/error.hpp"
#include "romr/core/occupancy_grid.hpp"
#include "romr/core/sensor_types.hpp"
#include "romr/mcl/likelihood_field.hpp"

namespace romr::mcl {

enum class MclErrorCode { NoFreeSpace, EmptySet };
using MclError = CodedError<MclErrorCode>;

struct Particle {
  Pose2D pose;
  double weight = 0.0;
};

struct ParticleSet {
  std::vector<Particle> particles;
  std::mt19937_64 rng;

  std::size_t size() const { return particles.size(); }
};

/// Odometry motion model noise, as in the rotation-translation-rotation
/// decomposition: a1 rot<-rot, a2 rot<-trans, a3 trans<-trans, a4 trans<-rot.
struct MotionNoise {
  double a1 = 0.05;
  double a2 = 0.05;
  double a3 = 0.1;
  double a4 = 0.1;
};

struct ResampleOptions {
  std::size_t min_particles = 100;
  std::size_t max_particles = 2000;
  double ess_fraction = 0.5;  // resample when ESS < fraction * n
};

struct WeightUpdate {
  int beams_used = 0;
  bool reset = false;  // every weight vanished; set back to uniform
};

struct PoseEstimate {
  Pose2D pose;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
};

/// n particles uniform over the free cells with uniform heading.
ParticleSet init_global(const OccupancyGrid& map, std::size_t n, std::uint64_t seed);

/// Applies the odometry increment `odom_delta` (expressed in the previous
/// odometry pose's frame) to every particle with sampled noise.
void predict(ParticleSet& ps, const Pose2D& odom_delta, const MotionNoise& noise = {});

/// Multiplies each weight by the likelihood of every `beam_stride`-th
/// finite beam and normalises. Computed in the log domain.
WeightUpdate update_weights(ParticleSet& ps, const LaserScan& scan, const LikelihoodField& field,
                            int beam_stride = 10);

void normalize_weights(ParticleSet& ps);
double effective_sample_size(const ParticleSet& ps);

/// Low-variance sampler: output k takes the particle whose cumulative
/// weight interval contains (u0 + k) / n_out, u0 in [0, 1).
std::vector<std::size_t> systematic_resample(const std::vector<double>& weights,
                                             std::size_t n_out, double u0);

/// Number of particles after a resample: min_particles * n / ESS, clamped.
/// n / ESS = 1 + n^2 Var(w), so the count grows with the weight variance.
std::size_t adapted_count(const ParticleSet& ps, const ResampleOptions& opts);

/// Resamples when ESS < ess_fraction * n. Returns whether it did.
bool resample(ParticleSet& ps, const ResampleOptions& opts = {});

/// Weighted mean with a circular mean for heading, and weighted covariance.
PoseEstimate estimate(const ParticleSet& ps);

}  // namespace romr::mcl
