#pragma once

#include <vector>

#include "coadapt/sim/config.hpp"

namespace coadapt::sim {

struct TerrainBlock {
  double start_x = 0.0;
  double width = 0.0;
  double height = 0.0;
};

// Ground as a heightfield: flat at z = 0, optionally with a staircase of
// axis-aligned blocks. The observation never includes terrain state.
struct Terrain {
  std::vector<TerrainBlock> blocks;  // non-overlapping, ascending start_x

  // Blocks are contiguous ascending steps; past the last block the ground
  // stays at the top height.
  double height(double x) const {
    double h = 0.0;
    for (const TerrainBlock& b : blocks) {
      if (x < b.start_x) break;
      h = b.height;
    }
    return h;
  }
};

Terrain build_terrain(morph::EnvKind kind, const SimConfig& cfg);

}  // namespace coadapt::sim
