#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "romr/core/error.hpp"
#include "romr/core/occupancy_grid.hpp"

namespace romr::slam {

// map_server conventions: 8-bit binary PGM plus a YAML sidecar.
inline constexpr std::uint8_t kPixelOccupied = 0;
inline constexpr std::uint8_t kPixelFree = 254;
inline constexpr std::uint8_t kPixelUnknown = 205;

enum class MapIoErrorCode { Io, Parse };

class MapIoError : public CodedError<MapIoErrorCode> {
 public:
  MapIoError(MapIoErrorCode code, const std::string& what, std::string file = {},
             int line = 0, std::string field = {})
      : CodedError(code, what), file_(std::move(file)), line_(line), field_(std::move(field)) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }  // 1-based, 0 when unknown
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  int line_;
  std::string field_;
};

std::uint8_t occupancy_to_pixel(double probability);

/// Writes `<basename>.pgm` and `<basename>.yaml`.
void save_map(const OccupancyGrid& grid, const std::filesystem::path& basename);

/// Reads `<basename>.yaml` (a trailing `.yaml` is accepted) and the image it
/// names. Cells come back quantised: occupied -> l_max, free -> l_min,
/// unknown -> 0.
OccupancyGrid load_map(const std::filesystem::path& basename);

}  // namespace romr::slam
