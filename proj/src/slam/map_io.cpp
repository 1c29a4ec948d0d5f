#include "romr/slam/map_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace romr::slam {

namespace fs = std::filesystem;

namespace {

fs::path with_suffix(const fs::path& basename, const char* ext) {
  return fs::path(basename.string() + ext);
}

// Reads the next whitespace-delimited PGM header token, skipping comments.
std::string next_header_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

template <typename T>
T require_field(const YAML::Node& doc, const char* key, const std::string& file) {
  const YAML::Node node = doc[key];
  if (!node) {
    throw MapIoError(MapIoErrorCode::Parse,
                     fmt::format("{}: missing field '{}'", file, key), file, 0, key);
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    const int line = node.Mark().line + 1;
    throw MapIoError(MapIoErrorCode::Parse,
                     fmt::format("{}:{}: field '{}' has the wrong type", file, line, key), file,
                     line, key);
  }
}

}  // namespace

std::uint8_t occupancy_to_pixel(double probability) {
  if (probability > kOccupiedThresh) return kPixelOccupied;
  if (probability < kFreeThresh) return kPixelFree;
  return kPixelUnknown;
}

void save_map(const OccupancyGrid& grid, const fs::path& basename) {
  const fs::path pgm_path = with_suffix(basename, ".pgm");
  const fs::path yaml_path = with_suffix(basename, ".yaml");

  std::ofstream pgm(pgm_path, std::ios::binary);
  if (!pgm) throw MapIoError(MapIoErrorCode::Io, "cannot write " + pgm_path.string());
  pgm << fmt::format("P5\n# CREATOR: romr map export {:.3f} m/pix\n{} {}\n255\n",
                     grid.resolution(), grid.width(), grid.height());
  std::vector<char> row(static_cast<std::size_t>(grid.width()));
  for (int y = grid.height() - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width(); ++x) {
      row[static_cast<std::size_t>(x)] =
          static_cast<char>(occupancy_to_pixel(grid.probability(x, y)));
    }
    pgm.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!pgm.flush()) throw MapIoError(MapIoErrorCode::Io, "write failed: " + pgm_path.string());

  std::ofstream yaml(yaml_path, std::ios::binary);
  if (!yaml) throw MapIoError(MapIoErrorCode::Io, "cannot write " + yaml_path.string());
  yaml << fmt::format(
      "image: {}\nresolution: {:.6f}\norigin: [{:.6f}, {:.6f}, {:.6f}]\nnegate: 0\n"
      "occupied_thresh: 0.65\nfree_thresh: 0.196\n\n",
      pgm_path.filename().string(), grid.resolution(), grid.origin().x, grid.origin().y,
      grid.origin().theta);
  if (!yaml.flush()) throw MapIoError(MapIoErrorCode::Io, "write failed: " + yaml_path.string());
}

OccupancyGrid load_map(const fs::path& basename) {
  fs::path yaml_path = basename;
  if (yaml_path.extension() != ".yaml") yaml_path = with_suffix(basename, ".yaml");
  const std::string yaml_name = yaml_path.string();

  std::ifstream yaml_in(yaml_path);
  if (!yaml_in) throw MapIoError(MapIoErrorCode::Io, "cannot open " + yaml_name, yaml_name);
  YAML::Node doc;
  try {
    doc = YAML::Load(yaml_in);
  } catch (const YAML::ParserException& e) {
    throw MapIoError(MapIoErrorCode::Parse,
                     fmt::format("{}:{}: {}", yaml_name, e.mark.line + 1, e.msg), yaml_name,
                     e.mark.line + 1);
  }
  if (!doc.IsMap()) {
    throw MapIoError(MapIoErrorCode::Parse, yaml_name + ": expected a mapping", yaml_name, 1);
  }

  const auto image = require_field<std::string>(doc, "image", yaml_name);
  const auto resolution = require_field<double>(doc, "resolution", yaml_name);
  const auto origin = require_field<std::vector<double>>(doc, "origin", yaml_name);
  const int negate = doc["negate"] ? require_field<int>(doc, "negate", yaml_name) : 0;
  const double occ_thresh = doc["occupied_thresh"]
                                ? require_field<double>(doc, "occupied_thresh", yaml_name)
                                : kOccupiedThresh;
  const double free_thresh =
      doc["free_thresh"] ? require_field<double>(doc, "free_thresh", yaml_name) : kFreeThresh;
  if (origin.size() != 3) {
    const int line = doc["origin"].Mark().line + 1;
    throw MapIoError(MapIoErrorCode::Parse,
                     fmt::format("{}:{}: field 'origin' needs 3 values", yaml_name, line),
                     yaml_name, line, "origin");
  }
  if (!(resolution > 0)) {
    const int line = doc["resolution"].Mark().line + 1;
    throw MapIoError(MapIoErrorCode::Parse,
                     fmt::format("{}:{}: field 'resolution' must be positive", yaml_name, line),
                     yaml_name, line, "resolution");
  }

  fs::path image_path = image;
  if (image_path.is_relative()) image_path = yaml_path.parent_path() / image_path;
  const std::string pgm_name = image_path.string();
  std::ifstream pgm(image_path, std::ios::binary);
  if (!pgm) throw MapIoError(MapIoErrorCode::Io, "cannot open " + pgm_name, pgm_name);
  if (next_header_token(pgm) != "P5") {
    throw MapIoError(MapIoErrorCode::Parse, pgm_name + ": not a binary PGM (P5)", pgm_name, 1);
  }
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_header_token(pgm));
    height = std::stoi(next_header_token(pgm));
    maxval = std::stoi(next_header_token(pgm));
  } catch (const std::exception&) {
    throw MapIoError(MapIoErrorCode::Parse, pgm_name + ": malformed PGM header", pgm_name);
  }
  if (width <= 0 || height <= 0 || maxval != 255) {
    throw MapIoError(MapIoErrorCode::Parse,
                     pgm_name + ": unsupported PGM geometry or maxval", pgm_name);
  }
  std::vector<unsigned char> pixels(static_cast<std::size_t>(width) * height);
  pgm.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (pgm.gcount() != static_cast<std::streamsize>(pixels.size())) {
    throw MapIoError(MapIoErrorCode::Parse, pgm_name + ": truncated pixel data", pgm_name);
  }

  OccupancyGrid grid(width, height, resolution, Pose2D(origin[0], origin[1], origin[2]));
  for (int row = 0; row < height; ++row) {
    const int y = height - 1 - row;
    for (int x = 0; x < width; ++x) {
      const double px = pixels[static_cast<std::size_t>(row) * width + x];
      const double p = negate ? px / 255.0 : (255.0 - px) / 255.0;
      if (p > occ_thresh) {
        grid.set_log_odds({x, y}, grid.l_max());
      } else if (p < free_thresh) {
        grid.set_log_odds({x, y}, grid.l_min());
      }
    }
  }
  return grid;
}

}  // namespace romr::slam
