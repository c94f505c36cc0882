#pragma once

#include <vector>

#include "coadapt/morph/graph.hpp"
#include "coadapt/sim/config.hpp"

namespace coadapt::sim {

// Deterministic physical realisation of one graph node.
struct SegmentModel {
  int parent_body = 0;       // 0 = torso, otherwise node index + 1
  double length = 0.0;       // from the design
  double mass = 0.0;         // uniform line density
  double inertia = 0.0;      // rod about its centre
  double anchor_lx = 0.0;    // attachment point in the parent body frame (x)
  double rest_world_angle = 0.0;  // rod direction angle at rest, world frame
  double rest_rel_angle = 0.0;    // rest (child - parent) body angle, defines q = 0
};

struct ArticulatedAgent {
  double torso_length = 0.0;
  double torso_mass = 0.0;
  double torso_inertia = 0.0;
  std::vector<SegmentModel> segments;  // one per graph node, node order

  int body_count() const { return static_cast<int>(segments.size()) + 1; }
  int joint_count() const { return static_cast<int>(segments.size()); }
};

// Realises (graph, design) as rigid bodies and joints. Throws on designs
// outside the graph's parameter bounds.
ArticulatedAgent build_agent(const morph::MorphologyGraph& graph, const morph::Design& design,
                             morph::EnvKind kind, const SimConfig& cfg);

}  // namespace coadapt::sim
