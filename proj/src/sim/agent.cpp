#include "coadapt/sim/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace coadapt::sim {

namespace {
constexpr double kHalfPi = 1.5707963267948966192313216916398;

double param_value(const morph::MorphologyGraph& g, const morph::Design& d, int node,
                   const char* name, double fallback, bool* found = nullptr) {
  const auto& params = g.nodes()[node].params;
  const int off = g.param_offset(node);
  for (size_t k = 0; k < params.size(); ++k)
    if (params[k].name == name) {
      if (found) *found = true;
      return d.values[off + k];
    }
  if (found) *found = false;
  return fallback;
}
}  // namespace

ArticulatedAgent build_agent(const morph::MorphologyGraph& graph, const morph::Design& design,
                             morph::EnvKind kind, const SimConfig& cfg) {
  (void)kind;
  const morph::DesignSpace space = morph::DesignSpace::of(graph);
  if (!design.within(space)) throw std::invalid_argument("build_agent: design out of bounds");

  ArticulatedAgent a;
  a.torso_length = cfg.torso_length;
  a.torso_mass = cfg.torso_mass;
  a.torso_inertia = cfg.torso_mass * cfg.torso_length * cfg.torso_length / 12.0;

  const int n = graph.node_count();
  a.segments.resize(n);
  for (int i = 0; i < n; ++i) {
    const morph::NodeSpec& node = graph.nodes()[i];
    SegmentModel& s = a.segments[i];
    s.length = param_value(graph, design, i, "length", 0.4);
    s.mass = cfg.segment_density * s.length;
    s.inertia = s.mass * s.length * s.length / 12.0;
    const double orient = param_value(graph, design, i, "orientation", 0.0);
    if (node.anchor_x) {
      // Mounted on the torso; rest direction is straight down plus the
      // orientation parameter.
      s.parent_body = 0;
      s.anchor_lx = *node.anchor_x;
      s.rest_world_angle = -kHalfPi + orient;
      s.rest_rel_angle = s.rest_world_angle;  // torso rests at angle 0
    } else {
      // Mounted on the tip of the parent segment.
      const int p = node.parent;
      s.parent_body = p + 1;
      s.anchor_lx = a.segments[p].length / 2.0;
      s.rest_world_angle = a.segments[p].rest_world_angle + orient;
      s.rest_rel_angle = orient;
    }
  }
  return a;
}

}  // namespace coadapt::sim
