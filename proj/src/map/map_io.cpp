#include "rcnav/map/map_io.hpp"

#include <charconv>
#include <yaml-cpp/yaml.h>

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "rcnav/core/errors.hpp"

namespace rcnav {
namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw LoadError(path.string() + ": " + what);
}

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(const std::string& data, std::size_t& pos) {
    while (pos < data.size()) {
        const auto ch = static_cast<unsigned char>(data[pos]);
        if (ch == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else if (std::isspace(ch)) {
            ++pos;
        } else {
            break;
        }
    }
    const std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) && data[pos] != '#') {
        ++pos;
    }
    return data.substr(start, pos - start);
}

long parse_header_int(const std::filesystem::path& path, const std::string& token, const char* field) {
    if (token.empty()) fail(path, std::string("malformed PGM header: missing ") + field);
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        fail(path, std::string("malformed PGM header: bad ") + field + " '" + token + "'");
    }
    if (used != token.size()) {
        fail(path, std::string("malformed PGM header: bad ") + field + " '" + token + "'");
    }
    return value;
}

struct Raster {
    int width{0};
    int height{0};
    int maxval{255};
    std::vector<std::uint8_t> pixels;
};

Raster read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::size_t pos = 0;
    const std::string magic = next_token(data, pos);
    if (magic != "P5" && magic != "P2") {
        fail(path, "malformed PGM header: expected P5 or P2, found '" + magic + "'");
    }
    Raster r;
    const long w = parse_header_int(path, next_token(data, pos), "width");
    const long h = parse_header_int(path, next_token(data, pos), "height");
    const long maxval = parse_header_int(path, next_token(data, pos), "maxval");
    if (w <= 0 || h <= 0) fail(path, "malformed PGM header: non-positive dimensions");
    if (maxval > 255) fail(path, "bit depth is not 8 (maxval " + std::to_string(maxval) + ")");
    if (maxval <= 0) fail(path, "malformed PGM header: maxval must be positive");
    r.width = static_cast<int>(w);
    r.height = static_cast<int>(h);
    r.maxval = static_cast<int>(maxval);
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    r.pixels.resize(n);

    if (magic == "P5") {
        // Exactly one whitespace byte separates the header from the raster.
        if (pos >= data.size()) fail(path, "inconsistent dimensions: raster missing");
        ++pos;
        if (data.size() - pos < n) {
            fail(path, "inconsistent dimensions: header says " + std::to_string(w) + "x" + std::to_string(h) +
                           " but raster has " + std::to_string(data.size() - pos) + " bytes");
        }
        for (std::size_t i = 0; i < n; ++i) {
            r.pixels[i] = static_cast<std::uint8_t>(data[pos + i]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::string tok = next_token(data, pos);
            if (tok.empty()) {
                fail(path, "inconsistent dimensions: expected " + std::to_string(n) + " samples, found " +
                               std::to_string(i));
            }
            const long v = parse_header_int(path, tok, "sample");
            if (v < 0 || v > maxval) fail(path, "sample " + tok + " outside [0, maxval]");
            r.pixels[i] = static_cast<std::uint8_t>(v);
        }
    }
    if (r.maxval != 255) {
        for (auto& v : r.pixels) {
            v = static_cast<std::uint8_t>((static_cast<int>(v) * 255 + r.maxval / 2) / r.maxval);
        }
    }
    return r;
}

template <typename T>
T require(const YAML::Node& root, const char* key, const std::filesystem::path& path) {
    const YAML::Node node = root[key];
    if (!node) fail(path, std::string("missing key '") + key + "'");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(path, std::string("bad value for key '") + key + "'");
    }
}

}  // namespace

Cell classify_pixel(std::uint8_t value, const MapMetadata& meta) noexcept {
    const double v = static_cast<double>(value);
    const double p = meta.negate ? v / 255.0 : (255.0 - v) / 255.0;
    if (p > meta.occupied_thresh) return Cell::Occupied;
    if (p < meta.free_thresh) return Cell::Free;
    return Cell::Unknown;
}

MapMetadata load_map_metadata(const std::filesystem::path& yaml_path) {
    if (!std::filesystem::exists(yaml_path)) fail(yaml_path, "cannot open file");
    YAML::Node root;
    try {
        root = YAML::LoadFile(yaml_path.string());
    } catch (const YAML::Exception& e) {
        fail(yaml_path, std::string("malformed YAML: ") + e.what());
    }
    MapMetadata meta;
    if (root["image"]) meta.image = root["image"].as<std::string>();
    meta.resolution = require<double>(root, "resolution", yaml_path);
    const auto origin = require<std::vector<double>>(root, "origin", yaml_path);
    if (origin.size() != 3) fail(yaml_path, "origin must be [x, y, yaw]");
    meta.origin = {origin[0], origin[1], origin[2]};
    meta.negate = require<int>(root, "negate", yaml_path) != 0;
    meta.occupied_thresh = require<double>(root, "occupied_thresh", yaml_path);
    meta.free_thresh = require<double>(root, "free_thresh", yaml_path);
    if (!(meta.resolution > 0.0)) fail(yaml_path, "resolution must be > 0");
    return meta;
}

OccupancyGrid load_map(const std::filesystem::path& pgm_path, const std::filesystem::path& yaml_path) {
    const MapMetadata meta = load_map_metadata(yaml_path);
    const Raster raster = read_pgm(pgm_path);
    std::vector<Cell> cells(raster.pixels.size());
    for (int img_row = 0; img_row < raster.height; ++img_row) {
        const int grid_row = raster.height - 1 - img_row;
        for (int col = 0; col < raster.width; ++col) {
            cells[static_cast<std::size_t>(grid_row) * raster.width + col] =
                classify_pixel(raster.pixels[static_cast<std::size_t>(img_row) * raster.width + col], meta);
        }
    }
    return {raster.width, raster.height, meta.resolution, meta.origin, std::move(cells)};
}

OccupancyGrid load_map(const std::filesystem::path& yaml_path) {
    const MapMetadata meta = load_map_metadata(yaml_path);
    if (meta.image.empty()) fail(yaml_path, "missing key 'image'");
    std::filesystem::path image = meta.image;
    if (image.is_relative()) image = yaml_path.parent_path() / image;
    return load_map(image, yaml_path);
}

namespace {

// Shortest text that reads back to the same double.
std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

}  // namespace

void save_map(const OccupancyGrid& grid, const std::filesystem::path& yaml_path) {
    std::filesystem::path pgm_path = yaml_path;
    pgm_path.replace_extension(".pgm");
    {
        std::ofstream out(pgm_path, std::ios::binary);
        if (!out) throw LoadError(pgm_path.string() + ": cannot open for writing");
        out << "P5\n" << grid.width() << ' ' << grid.height() << "\n255\n";
        for (int img_row = 0; img_row < grid.height(); ++img_row) {
            const int row = grid.height() - 1 - img_row;
            for (int col = 0; col < grid.width(); ++col) {
                char v = static_cast<char>(205);
                switch (grid.at(col, row)) {
                    case Cell::Free: v = static_cast<char>(254); break;
                    case Cell::Occupied: v = 0; break;
                    case Cell::Unknown: break;
                }
                out.put(v);
            }
        }
    }
    std::ofstream out(yaml_path);
    if (!out) throw LoadError(yaml_path.string() + ": cannot open for writing");
    out << "image: " << pgm_path.filename().string() << '\n'
        << "resolution: " << shortest(grid.resolution()) << '\n'
        << "origin: [" << shortest(grid.origin().x) << ", " << shortest(grid.origin().y) << ", "
        << shortest(grid.origin().theta) << "]\n"
        << "negate: 0\n"
        << "occupied_thresh: 0.65\n"
        << "free_thresh: 0.196\n";
}

}  // namespace rcnav
