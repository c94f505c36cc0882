#include "coadapt/sim/terrain.hpp"

namespace coadapt::sim {

Terrain build_terrain(morph::EnvKind kind, const SimConfig& cfg) {
  Terrain t;
  if (kind != morph::EnvKind::MultiPedStairs) return t;
  for (int i = 0; i < cfg.stairs_count; ++i)
    t.blocks.push_back({cfg.stairs_start_x + i * cfg.stairs_depth, cfg.stairs_depth,
                        (i + 1) * cfg.stairs_rise});
  return t;
}

}  // namespace coadapt::sim
