#include "romr/slam/scan_matcher.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace romr::slam {

std::vector<Vec2> scan_endpoints(const LaserScan& scan) {
  std::vector<Vec2> points;
  points.reserve(scan.ranges.size());
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double r = scan.ranges[i];
    if (!scan.is_valid_return(r)) continue;
    const double a = scan.beam_angle(i);
    points.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return points;
}

MatchCost evaluate_match_cost(const OccupancyGrid& grid, const std::vector<Vec2>& endpoints,
                              const Pose2D& pose) {
  MatchCost out;
  out.total_points = static_cast<int>(endpoints.size());
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  for (const Vec2& p : endpoints) {
    const Vec2 world(pose.x + c * p.x() - s * p.y(), pose.y + s * p.x() + c * p.y());
    const auto sample = try_interpolate_occupancy(grid, world);
    if (!sample) {
      out.cost += 1.0;
      continue;
    }
    ++out.valid_points;
    const double residual = 1.0 - sample->value;
    // dS/dtheta = R'(theta) p
    const double dx_dtheta = -s * p.x() - c * p.y();
    const double dy_dtheta = c * p.x() - s * p.y();
    const Eigen::Vector3d jac(sample->gradient.x(), sample->gradient.y(),
                              sample->gradient.x() * dx_dtheta +
                                  sample->gradient.y() * dy_dtheta);
    out.cost += residual * residual;
    out.gradient -= 2.0 * residual * jac;
    out.hessian += jac * jac.transpose();
    out.rhs += residual * jac;
  }
  return out;
}

namespace {

// Rank test in physical units: rotation is scaled by the RMS endpoint range
// so all three axes are metres of endpoint motion. Normalising by the
// diagonal instead would hide a direction that is weak but uncorrelated.
bool is_degenerate(const Eigen::Matrix3d& h, const std::vector<Vec2>& endpoints, double ratio) {
  double sq = 0.0;
  for (const Vec2& p : endpoints) sq += p.squaredNorm();
  const double lever = std::sqrt(sq / static_cast<double>(endpoints.size()));
  if (!(lever > 0.0)) return true;
  const Eigen::Vector3d scale(1.0, 1.0, 1.0 / lever);
  const Eigen::Matrix3d scaled = scale.asDiagonal() * h * scale.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scaled);
  const Eigen::Vector3d ev = eig.eigenvalues();  // ascending
  return !(ev(2) > 0.0) || !(ev(0) > ratio * ev(2));
}

}  // namespace

MatchResult match_scan(const OccupancyGrid& grid, const LaserScan& scan, const Pose2D& initial,
                       const MatchOptions& opts) {
  const std::vector<Vec2> endpoints = scan_endpoints(scan);
  MatchResult result;
  result.pose = initial;

  MatchCost current = evaluate_match_cost(grid, endpoints, initial);
  if (current.valid_points == 0 || is_degenerate(current.hessian, endpoints, opts.degenerate_ratio)) {
    throw SlamError(SlamErrorCode::DegenerateHessian,
                    "scan-match normal equations are rank deficient");
  }

  result.cost_history.push_back(current.cost);
  double lambda = opts.lambda_initial;
  Pose2D pose = initial;
  bool done = false;
  while (!done && result.iterations < opts.max_iterations) {
    ++result.iterations;
    bool accepted = false;
    while (!accepted) {
      Eigen::Matrix3d damped = current.hessian;
      damped.diagonal() *= (1.0 + lambda);
      const Eigen::Vector3d delta = damped.ldlt().solve(current.rhs);
      if (!delta.allFinite()) {
        throw SlamError(SlamErrorCode::Diverged, "non-finite scan-match step");
      }
      const Pose2D candidate(pose.x + delta(0), pose.y + delta(1), pose.theta + delta(2));
      const MatchCost next = evaluate_match_cost(grid, endpoints, candidate);
      if (next.cost <= current.cost && next.valid_points > 0) {
        const double decrease = current.cost - next.cost;
        pose = candidate;
        current = next;
        result.cost_history.push_back(current.cost);
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (delta.norm() < opts.step_tolerance || decrease < opts.cost_tolerance) {
          done = true;
        }
      } else {
        lambda *= 10.0;
        if (lambda > opts.lambda_max) {
          // no descent direction left at this iterate: a stationary point
          done = true;
          break;
        }
      }
    }
  }

  if (!std::isfinite(current.cost) ||
      current.valid_points < opts.min_valid_fraction * current.total_points) {
    throw SlamError(SlamErrorCode::Diverged, "scan-match estimate left the mapped area");
  }
  result.pose = pose;
  result.final_cost = current.cost;
  result.converged = done;
  return result;
}

}  // namespace romr::slam
