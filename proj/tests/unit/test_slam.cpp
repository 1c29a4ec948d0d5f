#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "romr/harness/slam_session.hpp"
#include "romr/sim/lidar_sim.hpp"
#include "romr/sim/world_map.hpp"
#include "romr/slam/grid_interpolation.hpp"
#include "romr/slam/map_io.hpp"
#include "romr/slam/mapper.hpp"
#include "romr/slam/scan_matcher.hpp"
#include "support/slam_checks.hpp"

#ifndef ROMR_DATA_DIR
#error "ROMR_DATA_DIR must point at the data directory"
#endif

namespace romr::slam {
namespace {

namespace fs = std::filesystem;

const fs::path kDataDir = ROMR_DATA_DIR;

OccupancyGrid small_grid(int w = 20, int h = 20, double res = 0.05) {
  return OccupancyGrid(w, h, res, Pose2D(0, 0, 0));
}

sim::WorldMap square_room() { return sim::WorldMap::from_segments(sim::rectangle({-3, -3}, 6, 6)); }

// Room with an obstacle so no direction is featureless.
sim::WorldMap furnished_room() {
  auto segs = sim::rectangle({-3, -2.5}, 6, 5);
  for (const auto& s : sim::rectangle({0.8, 0.4}, 0.6, 0.5)) segs.push_back(s);
  return sim::WorldMap::from_segments(segs);
}

MapperState map_from(const sim::WorldMap& world, const Pose2D& pose, int scans,
                     std::uint64_t seed, const MapperOptions& opts = {}) {
  MapperState state = make_mapper_state(opts);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < scans; ++i) {
    update_map(state, sim::simulate_lidar(pose, world, {}, rng), pose, opts);
  }
  return state;
}

// ---------------------------------------------------------------- interpolation

TEST(Interpolation, BilinearPatchCornerWeights) {
  const auto v = bilinear_patch(0.7, 0.1, 0.2, 0.3, 0.0, 0.0, 0.05);
  EXPECT_DOUBLE_EQ(v.value, 0.7);
}

TEST(Interpolation, SplitPatchAtCentre) {
  const double res = 0.05;
  // lower row free, upper row occupied
  const auto v = bilinear_patch(0, 0, 1, 1, 0.5, 0.5, res);
  // closed form: value = fy, d/dy = (top - bottom) / spacing
  EXPECT_DOUBLE_EQ(v.value, 0.5);
  EXPECT_NEAR(v.gradient.x(), 0.0, 1e-12);
  EXPECT_NEAR(v.gradient.y(), 1.0 / res, 1e-9);
}

TEST(Interpolation, ExactCellCentreReturnsCellProbability) {
  auto grid = small_grid();
  grid.set_log_odds({5, 7}, 1.3);
  grid.set_log_odds({6, 7}, -2.0);
  grid.set_log_odds({5, 8}, 0.4);
  const auto v = interpolate_occupancy(grid, grid.grid_to_world({5, 7}));
  EXPECT_NEAR(v.value, grid.probability(5, 7), 1e-12);
  // gradient comes from the neighbours towards +x and +y
  EXPECT_NEAR(v.gradient.x(), (grid.probability(6, 7) - grid.probability(5, 7)) / 0.05, 1e-9);
  EXPECT_NEAR(v.gradient.y(), (grid.probability(5, 8) - grid.probability(5, 7)) / 0.05, 1e-9);
}

TEST(Interpolation, UniformGridHasZeroGradient) {
  auto grid = small_grid();
  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < grid.width(); ++x) grid.set_log_odds({x, y}, 0.8);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const auto v = interpolate_occupancy(grid, {u(rng), u(rng)});
    EXPECT_NEAR(v.value, log_odds_to_probability(0.8), 1e-12);
    EXPECT_NEAR(v.gradient.norm(), 0.0, 1e-9);
  }
}

TEST(Interpolation, BorderIsOutOfInterior) {
  auto grid = small_grid();
  try {
    interpolate_occupancy(grid, {0.01, 0.5});
    FAIL() << "expected OutOfInterior";
  } catch (const SlamError& e) {
    EXPECT_EQ(e.code(), SlamErrorCode::OutOfInterior);
  }
  EXPECT_FALSE(try_interpolate_occupancy(grid, {0.5, 0.99}));
  EXPECT_FALSE(try_interpolate_occupancy(grid, {-1.0, 0.5}));
  EXPECT_TRUE(try_interpolate_occupancy(grid, {0.5, 0.5}));
}

TEST(Interpolation, RotatedOriginGradientIsInWorldFrame) {
  OccupancyGrid grid(20, 20, 0.05, Pose2D(0, 0, kPi / 2));
  // probability rising along the grid's +x axis, which is world +y
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) grid.set_log_odds({x, y}, -2.0 + 0.2 * x);
  const Vec2 p = grid.map_to_world({10.3, 10.6});
  const auto v = interpolate_occupancy(grid, p);
  const double h = 1e-6;
  const double fd_x =
      (interpolate_occupancy(grid, p + Vec2(h, 0)).value - interpolate_occupancy(grid, p - Vec2(h, 0)).value) / (2 * h);
  const double fd_y =
      (interpolate_occupancy(grid, p + Vec2(0, h)).value - interpolate_occupancy(grid, p - Vec2(0, h)).value) / (2 * h);
  EXPECT_NEAR(v.gradient.x(), fd_x, 1e-6);
  EXPECT_NEAR(v.gradient.y(), fd_y, 1e-6);
  EXPECT_GT(v.gradient.y(), 0.0);
}

// ---------------------------------------------------------------- map update

TEST(UpdateMap, SingleBeamHitsWallAtTwoMetres) {
  MapperOptions opts;
  MapperState state = make_mapper_state(opts);
  LaserScan scan = make_full_circle_scan(1);  // one beam along +x
  scan.angle_min = 0.0;
  scan.angle_max = 0.0;
  scan.ranges = {2.0};
  // start at a cell centre so the beam runs along one row
  const Vec2 start = state.grid.grid_to_world({200, 200});
  const Pose2D pose(start.x(), start.y(), 0.0);
  update_map(state, scan, pose, opts);

  const auto end = state.grid.world_to_grid(start + Vec2(2.0, 0.0));
  ASSERT_TRUE(end);
  EXPECT_EQ(end->x, 240);
  EXPECT_DOUBLE_EQ(state.grid.log_odds(*end), 0.85);
  int freed = 0, touched = 0;
  for (int y = 0; y < state.grid.height(); ++y) {
    for (int x = 0; x < state.grid.width(); ++x) {
      const double l = state.grid.log_odds({x, y});
      if (l != 0.0) ++touched;
      if (l == -0.4) {
        ++freed;
        EXPECT_EQ(y, 200);
        EXPECT_GE(x, 200);
        EXPECT_LT(x, 240);
      }
    }
  }
  // 2 m / 0.05 m cells from the start cell up to the endpoint cell
  EXPECT_EQ(freed, 40);
  EXPECT_EQ(touched, 41);
}

TEST(UpdateMap, RepeatedScansSaturate) {
  MapperOptions opts;
  MapperState state = make_mapper_state(opts);
  LaserScan scan = make_full_circle_scan(1);
  scan.angle_min = scan.angle_max = 0.0;
  scan.ranges = {1.0};
  const Pose2D pose(0.025, 0.025, 0.0);
  for (int i = 0; i < 10; ++i) update_map(state, scan, pose, opts);
  const auto end = *state.grid.world_to_grid({1.025, 0.025});
  EXPECT_DOUBLE_EQ(state.grid.log_odds(end), 4.0);
  EXPECT_DOUBLE_EQ(state.grid.log_odds(*state.grid.world_to_grid({0.5, 0.025})), -4.0);
}

TEST(UpdateMap, InfiniteBeamOnlyClears) {
  MapperOptions opts;
  MapperState state = make_mapper_state(opts);
  LaserScan scan = make_full_circle_scan(1);
  scan.angle_min = scan.angle_max = 0.0;
  scan.range_max = 3.0;
  scan.ranges = {kNoReturn};
  update_map(state, scan, Pose2D(0.025, 0.025, 0.0), opts);
  int freed = 0;
  for (int x = 0; x < state.grid.width(); ++x) {
    const double l = state.grid.log_odds({x, 200});
    EXPECT_LE(l, 0.0);
    if (l < 0) ++freed;
  }
  EXPECT_EQ(freed, 60);
}

TEST(UpdateMap, TranslationEquivariance) {
  const auto world = furnished_room();
  MapperOptions opts;
  std::mt19937_64 rng(11);
  const Pose2D pose(-0.7, 0.3, 0.4);
  const LaserScan scan = sim::simulate_lidar(pose, world, {}, rng);
  const int sx = 10, sy = 4;
  const double res = opts.resolution;
  MapperState a = make_mapper_state(opts);
  MapperState b = make_mapper_state(opts);
  update_map(a, scan, pose, opts);
  update_map(b, scan, Pose2D(pose.x + sx * res, pose.y + sy * res, pose.theta), opts);
  int compared = 0;
  for (int y = 0; y + sy < opts.height; ++y) {
    for (int x = 0; x + sx < opts.width; ++x) {
      ASSERT_EQ(a.grid.log_odds({x, y}), b.grid.log_odds({x + sx, y + sy})) << x << "," << y;
      ++compared;
    }
  }
  EXPECT_GT(compared, 0);
}

// ---------------------------------------------------------------- matching

TEST(ScanMatch, AtOptimumStaysPut) {
  // Noise-free returns on walls along cell centres: the map built from the
  // scan peaks exactly under its endpoints.
  const auto world = sim::WorldMap::from_segments(sim::rectangle({-2.975, -2.975}, 6.0, 6.0));
  sim::LidarSpec exact;
  exact.range_sigma = 0.0;
  const Pose2D truth(0.3, -0.2, 0.1);
  MapperOptions opts;
  MapperState state = make_mapper_state(opts);
  std::mt19937_64 rng(5);
  const LaserScan scan = sim::simulate_lidar(truth, world, exact, rng);
  update_map(state, scan, truth, opts);
  const auto r = match_scan(state.grid, scan, truth);
  EXPECT_LT(std::hypot(r.pose.x - truth.x, r.pose.y - truth.y), 1e-3);
  EXPECT_LT(std::abs(angle_diff(r.pose.theta, truth.theta)), deg_to_rad(0.1));
}

TEST(ScanMatch, NoisyRebuildBiasStaysBelowQuarterCell) {
  const auto world = square_room();
  const Pose2D truth(0.3, -0.2, 0.1);
  for (int scans : {1, 3, 10}) {
    const auto state = map_from(world, truth, scans, 5);
    std::mt19937_64 rng(5);
    const LaserScan first = sim::simulate_lidar(truth, world, {}, rng);
    const auto r = match_scan(state.grid, first, truth);
    EXPECT_LT(std::hypot(r.pose.x - truth.x, r.pose.y - truth.y), 0.0125) << scans;
  }
}

TEST(ScanMatch, RecoversOffsetInSquareRoom) {
  const auto world = square_room();
  const Pose2D truth(0.3, -0.2, 0.1);
  const auto state = map_from(world, truth, 5, 21);
  std::mt19937_64 rng(99);
  const LaserScan scan = sim::simulate_lidar(truth, world, {}, rng);
  const Pose2D initial(truth.x + 0.05, truth.y + 0.05, truth.theta + deg_to_rad(2.0));
  const auto r = match_scan(state.grid, scan, initial);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(std::hypot(r.pose.x - truth.x, r.pose.y - truth.y), 0.01);
  EXPECT_LT(std::abs(angle_diff(r.pose.theta, truth.theta)), deg_to_rad(0.5));
}

TEST(ScanMatch, CostNeverIncreases) {
  const auto world = furnished_room();
  const Pose2D truth(-0.5, 0.4, -0.3);
  const auto state = map_from(world, truth, 3, 8);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> jitter(0.0, 0.04);
  for (int trial = 0; trial < 30; ++trial) {
    const LaserScan scan = sim::simulate_lidar(truth, world, {}, rng);
    const Pose2D initial(truth.x + jitter(rng), truth.y + jitter(rng),
                         truth.theta + deg_to_rad(2.0) * jitter(rng) / 0.04);
    const auto r = match_scan(state.grid, scan, initial);
    ASSERT_FALSE(r.cost_history.empty());
    for (std::size_t i = 1; i < r.cost_history.size(); ++i) {
      EXPECT_LE(r.cost_history[i], r.cost_history[i - 1]);
    }
    EXPECT_DOUBLE_EQ(r.cost_history.back(), r.final_cost);
  }
}

TEST(ScanMatch, AnalyticGradientMatchesFiniteDifferences) {
  const auto world = furnished_room();
  const Pose2D mapped_at(0.0, 0.0, 0.0);
  const auto state = map_from(world, mapped_at, 3, 17);
  std::mt19937_64 rng(23);
  const auto endpoints = scan_endpoints(sim::simulate_lidar(mapped_at, world, {}, rng));
  const auto check = testsupport::check_match_gradient(state.grid, endpoints, mapped_at, 100, 29);
  EXPECT_EQ(check.accepted, 100);
  EXPECT_EQ(check.failures, 0) << "worst relative error " << check.worst_relative;
}

TEST(ScanMatch, StencilAcrossLatticeLineIsDetected) {
  const auto grid = small_grid();
  // world x = 0.075 is the lattice line between cell centres 0.025 and 0.075... and 0.125
  const std::vector<Vec2> on_line{{0.075, 0.5}};
  EXPECT_FALSE(testsupport::stencil_is_smooth(grid, on_line, {}, 1e-5, 1e-6));
  const std::vector<Vec2> inside{{0.1, 0.51}};
  EXPECT_TRUE(testsupport::stencil_is_smooth(grid, inside, {}, 1e-5, 1e-6));
}

TEST(ScanMatch, UnknownGridIsDegenerate) {
  const MapperState state = make_mapper_state({});
  std::mt19937_64 rng(1);
  const LaserScan scan = sim::simulate_lidar({}, square_room(), {}, rng);
  try {
    match_scan(state.grid, scan, {});
    FAIL() << "expected DegenerateHessian";
  } catch (const SlamError& e) {
    EXPECT_EQ(e.code(), SlamErrorCode::DegenerateHessian);
  }
}

TEST(ScanMatch, FeaturelessCorridorIsDegenerate) {
  // Ideal corridor map, longer than the lidar range: nothing constrains x.
  const auto corridor = sim::WorldMap::from_segments({{{-30, -1}, {30, -1}}, {{-30, 1}, {30, 1}}});
  const OccupancyGrid grid = sim::rasterize_world(corridor, 0.05, {0.0, 0.0});
  std::mt19937_64 rng(2);
  for (const Pose2D& pose : {Pose2D(0, 0, 0), Pose2D(2.3, 0.2, 0.3)}) {
    const LaserScan scan = sim::simulate_lidar(pose, corridor, {}, rng);
    try {
      match_scan(grid, scan, pose);
      FAIL() << "expected DegenerateHessian";
    } catch (const SlamError& e) {
      EXPECT_EQ(e.code(), SlamErrorCode::DegenerateHessian);
    }
  }
}

TEST(ScanMatch, IdealRoomMapIsNotDegenerate) {
  const auto world = furnished_room();
  const OccupancyGrid grid = sim::rasterize_world(world, 0.05, {0.0, 0.0});
  std::mt19937_64 rng(2);
  const Pose2D truth(-0.4, 0.2, 0.5);
  const LaserScan scan = sim::simulate_lidar(truth, world, {}, rng);
  const auto r = match_scan(grid, scan, Pose2D(truth.x + 0.01, truth.y - 0.01, truth.theta + 0.01));
  EXPECT_LT(std::hypot(r.pose.x - truth.x, r.pose.y - truth.y), 0.01);
}

TEST(ScanMatch, FarOffMapStartDiverges) {
  const auto world = square_room();
  const auto state = map_from(world, {}, 2, 3);
  std::mt19937_64 rng(3);
  const LaserScan scan = sim::simulate_lidar({}, world, {}, rng);
  // most endpoints land outside the 20 m grid
  try {
    match_scan(state.grid, scan, Pose2D(8.5, 8.5, 0.0));
    FAIL() << "expected an error";
  } catch (const SlamError& e) {
    EXPECT_TRUE(e.code() == SlamErrorCode::Diverged || e.code() == SlamErrorCode::DegenerateHessian);
  }
}

// ---------------------------------------------------------------- mapper

TEST(Mapper, FirstScanInitialisesAtOrigin) {
  Mapper mapper;
  std::mt19937_64 rng(1);
  const auto u = mapper.process_scan(sim::simulate_lidar(Pose2D(1, 1, 0.5), square_room(), {}, rng));
  EXPECT_EQ(u.status, ScanStatus::Initialized);
  EXPECT_EQ(u.estimate, Pose2D(0, 0, 0));
  EXPECT_EQ(mapper.state().trajectory.size(), 1u);
}

TEST(Mapper, StationaryRepeatScanStaysNearOrigin) {
  const auto world = furnished_room();
  Mapper mapper;
  std::mt19937_64 rng(8);
  const Pose2D truth(-1.0, 0.5, 0.2);
  mapper.process_scan(sim::simulate_lidar(truth, world, {}, rng));
  const auto u = mapper.process_scan(sim::simulate_lidar(truth, world, {}, rng));
  EXPECT_EQ(u.status, ScanStatus::Matched);
  EXPECT_LT(std::hypot(u.estimate.x, u.estimate.y), 0.02);
  EXPECT_EQ(mapper.state().scan_count, 2u);
}

TEST(Mapper, DegenerateScanLeavesStateUntouched) {
  Mapper mapper;
  std::mt19937_64 rng(2);
  // open space: every beam comes back without a return
  const sim::WorldMap nothing;
  mapper.process_scan(sim::simulate_lidar({}, nothing, {}, rng));
  const auto before = mapper.state().grid.cells();
  try {
    mapper.process_scan(sim::simulate_lidar({}, nothing, {}, rng));
    FAIL() << "expected DegenerateHessian";
  } catch (const SlamError& e) {
    EXPECT_EQ(e.code(), SlamErrorCode::DegenerateHessian);
  }
  EXPECT_EQ(mapper.state().scan_count, 1u);
  EXPECT_EQ(mapper.state().grid.cells(), before);
}

TEST(Mapper, LabLoopDriftAndMapAccuracy) {
  const auto world = sim::load_world(kDataDir / "worlds/lab.world");
  const auto path = sim::load_path(kDataDir / "paths/lab_loop.path");
  const auto session = harness::run_slam_session(world, path, Pose2D(-3, -2, 0), 1);
  EXPECT_NEAR(session.path_length, 20.0, 0.05);
  EXPECT_LT(session.final_drift(), 0.05);
  for (auto s : session.status) EXPECT_NE(s, ScanStatus::Fallback);
  const auto acc = harness::evaluate_map(session.mapper.grid(), world, session.start);
  EXPECT_GT(acc.wall_cells, 500);
  EXPECT_GE(acc.wall_fraction(), 0.95);
  EXPECT_GE(acc.free_fraction(), 0.95);
}

// ---------------------------------------------------------------- map files

class MapFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("romr_map_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
  }

  fs::path dir_;
};

TEST_F(MapFiles, UnknownGridIsAll205) {
  const auto grid = small_grid(7, 5);
  save_map(grid, dir_ / "m");
  const std::string pgm = slurp(dir_ / "m.pgm");
  const std::string pixels = pgm.substr(pgm.size() - 35);
  for (char c : pixels) EXPECT_EQ(static_cast<unsigned char>(c), 205);
  EXPECT_EQ(pgm.rfind("P5\n", 0), 0u);
}

TEST_F(MapFiles, PixelThresholds) {
  EXPECT_EQ(occupancy_to_pixel(0.9), 0);
  EXPECT_EQ(occupancy_to_pixel(0.1), 254);
  EXPECT_EQ(occupancy_to_pixel(0.5), 205);
  EXPECT_EQ(occupancy_to_pixel(0.65), 205);
  EXPECT_EQ(occupancy_to_pixel(0.196), 205);
}

TEST_F(MapFiles, YamlSidecarFields) {
  OccupancyGrid grid(4, 3, 0.05, Pose2D(-10, -7.5, 0));
  save_map(grid, dir_ / "lab");
  EXPECT_EQ(slurp(dir_ / "lab.yaml"),
            "image: lab.pgm\nresolution: 0.050000\norigin: [-10.000000, -7.500000, 0.000000]\n"
            "negate: 0\noccupied_thresh: 0.65\nfree_thresh: 0.196\n\n");
}

TEST_F(MapFiles, SaveLoadSaveIsByteIdentical) {
  const auto state = map_from(furnished_room(), Pose2D(0.2, -0.1, 0.3), 4, 6);
  save_map(state.grid, dir_ / "a");
  const auto loaded = load_map(dir_ / "a");
  EXPECT_EQ(loaded.width(), state.grid.width());
  EXPECT_EQ(loaded.height(), state.grid.height());
  EXPECT_DOUBLE_EQ(loaded.resolution(), state.grid.resolution());
  // top row of the image is the highest y
  for (int y = 0; y < loaded.height(); y += 7) {
    for (int x = 0; x < loaded.width(); x += 7) {
      ASSERT_EQ(loaded.classify({x, y}), state.grid.classify({x, y}));
    }
  }
  save_map(loaded, dir_ / "b");
  EXPECT_EQ(slurp(dir_ / "a.pgm"), slurp(dir_ / "b.pgm"));
  std::string ya = slurp(dir_ / "a.yaml"), yb = slurp(dir_ / "b.yaml");
  EXPECT_EQ(ya.replace(ya.find("a.pgm"), 5, "b.pgm"), yb);
}

TEST_F(MapFiles, ParseErrorsNameLineAndField) {
  save_map(small_grid(3, 3), dir_ / "m");
  spit(dir_ / "m.yaml", "image: m.pgm\nresolution: fine\norigin: [0, 0, 0]\n");
  try {
    load_map(dir_ / "m");
    FAIL() << "expected a parse error";
  } catch (const MapIoError& e) {
    EXPECT_EQ(e.code(), MapIoErrorCode::Parse);
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.field(), "resolution");
  }
  spit(dir_ / "m.yaml", "image: m.pgm\nresolution: 0.05\n");
  try {
    load_map(dir_ / "m");
    FAIL() << "expected a parse error";
  } catch (const MapIoError& e) {
    EXPECT_EQ(e.field(), "origin");
  }
  spit(dir_ / "m.yaml", "image: m.pgm\nresolution: 0.05\norigin: [0, 0]\n");
  EXPECT_THROW(load_map(dir_ / "m"), MapIoError);
}

TEST_F(MapFiles, MissingFilesAreIoErrors) {
  try {
    load_map(dir_ / "nothing");
    FAIL();
  } catch (const MapIoError& e) {
    EXPECT_EQ(e.code(), MapIoErrorCode::Io);
  }
  spit(dir_ / "m.yaml", "image: gone.pgm\nresolution: 0.05\norigin: [0, 0, 0]\n");
  try {
    load_map(dir_ / "m.yaml");
    FAIL();
  } catch (const MapIoError& e) {
    EXPECT_EQ(e.code(), MapIoErrorCode::Io);
  }
}

TEST_F(MapFiles, TruncatedImageIsRejected) {
  save_map(small_grid(10, 10), dir_ / "m");
  std::string pgm = slurp(dir_ / "m.pgm");
  spit(dir_ / "m.pgm", pgm.substr(0, pgm.size() - 3));
  EXPECT_THROW(load_map(dir_ / "m"), MapIoError);
}

}  // namespace
}  // namespace romr::slam
