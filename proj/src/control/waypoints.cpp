#include "rcnav/control/waypoints.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "rcnav/core/errors.hpp"

namespace rcnav {

WaypointTarget next_waypoint(std::span<const Pose2D> path, const Pose2D& current, double lookahead,
                             double goal_tolerance) {
    if (path.empty()) throw DomainError("next_waypoint: empty path");
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double d = distance(path[i], current);
        if (d < best) {
            best = d;
            nearest = i;
        }
    }
    WaypointTarget target{path.back(), path.size() - 1, false};
    double arc = 0.0;
    for (std::size_t j = nearest + 1; j < path.size(); ++j) {
        arc += distance(path[j - 1], path[j]);
        if (arc >= lookahead) {
            target.goal = path[j];
            target.index = j;
            break;
        }
    }
    target.done = distance(current, path.back()) < goal_tolerance;
    return target;
}

std::vector<Pose2D> densify_path(std::span<const Pose2D> path, double spacing) {
    if (!(spacing > 0.0)) throw DomainError("densify_path: spacing must be > 0");
    std::vector<Pose2D> out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) {
            const Pose2D& a = path[i - 1];
            const Pose2D& b = path[i];
            const int pieces = static_cast<int>(std::ceil(distance(a, b) / spacing));
            const double heading = std::atan2(b.y - a.y, b.x - a.x);
            for (int k = 1; k < pieces; ++k) {
                const double f = static_cast<double>(k) / pieces;
                out.push_back({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), heading});
            }
        }
        out.push_back(path[i]);
    }
    return out;
}

std::vector<Pose2D> load_waypoints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError(path + ": cannot open file");
    std::vector<Pose2D> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        Pose2D p;
        if (!(ss >> p.x)) continue;
        if (!(ss >> p.y)) throw LoadError(path + ":" + std::to_string(lineno) + ": expected 'x y [theta]'");
        if (!(ss >> p.theta)) p.theta = 0.0;
        out.push_back(p);
    }
    if (out.empty()) throw LoadError(path + ": no waypoints");
    return out;
}

}  // namespace rcnav
