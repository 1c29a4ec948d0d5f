#pragma once

#include <vector>

#include <Eigen/Core>

#include "romr/core/occupancy_grid.hpp"
#include "romr/core/sensor_types.hpp"
#include "romr/slam/grid_interpolation.hpp"

namespace romr::slam {

struct MatchOptions {
  int max_iterations = 30;
  double step_tolerance = 1e-6;   // |delta xi|
  double cost_tolerance = 1e-9;   // accepted cost decrease
  double lambda_initial = 1e-3;   // Levenberg-Marquardt damping
  double lambda_max = 1e8;        // give up on the current iterate beyond this
  double min_valid_fraction = 0.5;
  double degenerate_ratio = 1e-3;  // smallest / largest Hessian eigenvalue, rotation in metres
};

struct MatchResult {
  Pose2D pose;
  int iterations = 0;
  double final_cost = 0.0;
  bool converged = false;
  std::vector<double> cost_history;  // initial cost, then one entry per accepted step
};

/// Cost of a candidate pose: sum over endpoints of (1 - M(S_i(xi)))^2 with
/// its analytic gradient and the Gauss-Newton approximation of the Hessian.
/// Endpoints outside the grid interior count as M = 0 with zero gradient.
struct MatchCost {
  double cost = 0.0;
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
  Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();  // sum J^T J
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();      // sum J^T (1 - M)
  int valid_points = 0;
  int total_points = 0;
};

/// Scan endpoints in the robot frame; beams without a valid return are dropped.
std::vector<Vec2> scan_endpoints(const LaserScan& scan);

MatchCost evaluate_match_cost(const OccupancyGrid& grid, const std::vector<Vec2>& endpoints,
                              const Pose2D& pose);

/// Damped Gauss-Newton alignment of a scan against the occupancy surface.
/// Throws SlamError(DegenerateHessian) when the normal equations are rank
/// deficient at the start (e.g. unknown map, featureless corridor) and
/// SlamError(Diverged) when the estimate leaves the mapped area.
MatchResult match_scan(const OccupancyGrid& grid, const LaserScan& scan, const Pose2D& initial,
                       const MatchOptions& opts = {});

}  // namespace romr::slam
