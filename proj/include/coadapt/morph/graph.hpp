#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coadapt/num/rng.hpp"

namespace coadapt::morph {

struct ParamSpec {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
};

// One actuated limb segment. Nodes form a single tree: `parent` is the graph
// parent (-1 for the root). A node with `anchor_x` set is physically mounted
// on the torso at that x-offset; all other nodes mount on the tip of their
// graph parent. Limb roots after the first are linked to the previous limb
// root so the actuator graph stays one connected tree even though the torso
// itself is not a node.
struct NodeSpec {
  int parent = -1;
  std::optional<double> anchor_x;
  std::vector<ParamSpec> params;
};

struct DirectedEdge {
  int from = 0;
  int to = 0;
  double feature = 0.0;  // +1 parent->child, -1 child->parent
};

class MorphologyGraph {
 public:
  MorphologyGraph() = default;

  // Validates the tree invariants and computes the canonical id.
  static MorphologyGraph make(std::vector<NodeSpec> nodes, std::string label);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const std::string& label() const { return label_; }
  const std::string& id() const { return id_; }

  // Both directions for every tree edge, parent->child carrying +1.
  const std::vector<DirectedEdge>& directed_edges() const { return edges_; }

  int design_dim() const;
  int param_offset(int node) const;  // offset of a node's params in the flat design

 private:
  std::vector<NodeSpec> nodes_;
  std::vector<DirectedEdge> edges_;
  std::string label_;
  std::string id_;
};

// Per-node box bounds for the continuous design parameters.
struct DesignSpace {
  std::vector<std::vector<ParamSpec>> per_node;

  static DesignSpace of(const MorphologyGraph& g);
  int dim() const;
  const ParamSpec& flat(int i) const;
};

// Flattened design vector; values are indexed via MorphologyGraph::param_offset.
struct Design {
  std::vector<double> values;

  bool within(const DesignSpace& space, double tol = 0.0) const;
};

Design sample_random_design(const DesignSpace& space, num::Rng& rng);
Design clamp_design(const Design& d, const DesignSpace& space);

}  // namespace coadapt::morph
