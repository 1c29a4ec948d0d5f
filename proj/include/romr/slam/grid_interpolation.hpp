#pragma once

#include <optional>

#include "romr/core/error.hpp"
#include "romr/core/occupancy_grid.hpp"

namespace romr::slam {

enum class SlamErrorCode { OutOfInterior, Diverged, DegenerateHessian };
using SlamError = CodedError<SlamErrorCode>;

struct InterpolatedValue {
  double value = 0.0;
  Vec2 gradient = Vec2::Zero();  // d value / d world position, per metre
};

/// Bilinear surface over four lattice values one `spacing` apart.
/// (fx, fy) in [0, 1] locate the query inside the square; v00 is the lower
/// left node, v10 the lower right, v01 the upper left.
InterpolatedValue bilinear_patch(double v00, double v10, double v01, double v11, double fx,
                                 double fy, double spacing);

/// Occupancy probability interpolated between the four surrounding cell
/// centres, with the analytic gradient of the same surface. Returns nullopt
/// when the point is not surrounded by four cell centres.
std::optional<InterpolatedValue> try_interpolate_occupancy(const OccupancyGrid& grid,
                                                           const Vec2& point);

/// As above but throws SlamError(OutOfInterior) near the border.
InterpolatedValue interpolate_occupancy(const OccupancyGrid& grid, const Vec2& point);

}  // namespace romr::slam
