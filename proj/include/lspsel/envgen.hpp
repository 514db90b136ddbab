#pragma once

// Procedural maze and office worlds. Feature labels stand in for floor and
// wall colours:
//   mazes:   1 = marker, 0 = plain
//   offices: 2 = hallway (wall-adjacent hallway cells), 3 = room interior
//            (swapped in OfficeDiff)

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lspsel/gridmap.hpp"

namespace lspsel {

enum class EnvFamily { MazeGreen, MazeGray, MazeRandom, OfficeBase, OfficeDiff };

std::string_view to_string(EnvFamily f);
EnvFamily parse_family(std::string_view name);
bool is_maze(EnvFamily f);

inline constexpr int kMarkerLabel = 1;
inline constexpr int kHallwayLabel = 2;
inline constexpr int kRoomLabel = 3;

struct Scenario {
  GridMap true_map;
  Cell start;
  Cell goal;
  EnvFamily family = EnvFamily::MazeGreen;
  std::uint64_t seed = 0;
  std::string id;
};

struct MazeParams {
  int width = 17;
  int height = 17;
};

struct OfficeParams {
  int width = 45;
  int height = 45;
  int hallway_width = 3;
  int vertical_hallways = 3;    // including the two outer ones
  int horizontal_hallways = 3;  // including the two outer ones
  int min_room_span = 4;        // smallest room interior side
  double clutter_fraction = 0.10;
};

Scenario generate_maze(EnvFamily family, const MazeParams& params, std::uint64_t seed);
Scenario generate_office(EnvFamily family, const OfficeParams& params, std::uint64_t seed);

/// Dispatches on family with default parameters.
Scenario generate_scenario(EnvFamily family, std::uint64_t seed);

std::string scenario_id(EnvFamily family, std::uint64_t seed);

/// Cells of a shortest 4-connected path over Free cells, start first.
/// Empty when disconnected.
std::vector<Cell> free_path(const GridMap& map, Cell from, Cell to);

}  // namespace lspsel
