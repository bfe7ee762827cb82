// Writes the bundled scenario maps as PGM + YAML pairs.
#include <iostream>

#include "rcnav/app/scenarios.hpp"
#include "rcnav/map/map_io.hpp"

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "maps";
    std::filesystem::create_directories(dir);
    rcnav::save_map(rcnav::room_scenario().grid, dir / "room.yaml");
    rcnav::save_map(rcnav::straight_corridor_scenario().grid, dir / "corridor.yaml");
    rcnav::save_map(rcnav::obstacle_corridor_scenario().grid, dir / "obstacle_corridor.yaml");
    std::cout << "wrote maps to " << dir << '\n';
}
