#pragma once

#include <filesystem>

#include "rcnav/map/occupancy_grid.hpp"

namespace rcnav {

/// Metadata block of the map interchange YAML.
struct MapMetadata {
    std::filesystem::path image;
    double resolution{0.05};
    Pose2D origin{};
    bool negate{false};
    double occupied_thresh{0.65};
    double free_thresh{0.196};
};

/// Classifies one 8-bit pixel. p = (255 - v) / 255 (or v / 255 when negated);
/// Occupied when p > occupied_thresh, Free when p < free_thresh, Unknown otherwise.
Cell classify_pixel(std::uint8_t value, const MapMetadata& meta) noexcept;

/// Reads the YAML metadata. Throws LoadError naming the file and the missing or bad key.
MapMetadata load_map_metadata(const std::filesystem::path& yaml_path);

/// Loads a PGM (P5 binary or P2 ASCII, 8-bit) raster with the given YAML metadata.
/// Image row 0 is the top of the map: it becomes grid row height - 1.
/// The `image` key of the YAML is ignored in favour of `pgm_path`.
OccupancyGrid load_map(const std::filesystem::path& pgm_path, const std::filesystem::path& yaml_path);

/// Loads a map from its YAML alone, resolving `image` relative to the YAML's directory.
OccupancyGrid load_map(const std::filesystem::path& yaml_path);

/// Writes a P5 PGM + YAML pair (free = 254, occupied = 0, unknown = 205; thresholds 0.65 / 0.196).
void save_map(const OccupancyGrid& grid, const std::filesystem::path& yaml_path);

}  // namespace rcnav
