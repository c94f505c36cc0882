#include "coadapt/morph/graph.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace coadapt::morph {

namespace {

// Canonical AHU-style encoding: node attributes plus recursively sorted
// child encodings. Invariant under any reordering of the node list.
std::string canonical_encode(const std::vector<NodeSpec>& nodes,
                             const std::vector<std::vector<int>>& children, int node) {
  std::string attr;
  if (nodes[node].anchor_x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "a%.9g", *nodes[node].anchor_x);
    attr = buf;
  } else {
    attr = "i";
  }
  for (const ParamSpec& p : nodes[node].params) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "|%s:%.9g:%.9g", p.name.c_str(), p.lo, p.hi);
    attr += buf;
  }
  std::vector<std::string> subs;
  for (const int c : children[node]) subs.push_back(canonical_encode(nodes, children, c));
  std::sort(subs.begin(), subs.end());
  std::string out = "(" + attr;
  for (const std::string& s : subs) out += s;
  out += ")";
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

MorphologyGraph MorphologyGraph::make(std::vector<NodeSpec> nodes, std::string label) {
  const int n = static_cast<int>(nodes.size());
  if (n == 0) throw std::invalid_argument("morphology: graph has no nodes");

  int root = -1;
  for (int i = 0; i < n; ++i) {
    const int p = nodes[i].parent;
    if (p == -1) {
      if (root != -1) throw std::invalid_argument("morphology: more than one root node");
      root = i;
      if (!nodes[i].anchor_x)
        throw std::invalid_argument("morphology: root node must carry a torso anchor");
    } else if (p < 0 || p >= n || p == i) {
      throw std::invalid_argument("morphology: invalid parent index");
    }
  }
  if (root == -1) throw std::invalid_argument("morphology: no root node");

  // Cycle check: walking up from any node must reach the root within n steps.
  for (int i = 0; i < n; ++i) {
    int cur = i, steps = 0;
    while (cur != -1) {
      cur = nodes[cur].parent;
      if (++steps > n) throw std::invalid_argument("morphology: parent links contain a cycle");
    }
  }

  MorphologyGraph g;
  g.nodes_ = std::move(nodes);
  g.label_ = std::move(label);
  for (int i = 0; i < n; ++i) {
    const int p = g.nodes_[i].parent;
    if (p == -1) continue;
    g.edges_.push_back({p, i, +1.0});
    g.edges_.push_back({i, p, -1.0});
  }

  std::vector<std::vector<int>> children(n);
  for (int i = 0; i < n; ++i)
    if (g.nodes_[i].parent != -1) children[g.nodes_[i].parent].push_back(i);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "m%016" PRIx64,
                fnv1a(canonical_encode(g.nodes_, children, root)));
  g.id_ = buf;
  return g;
}

int MorphologyGraph::design_dim() const {
  int d = 0;
  for (const NodeSpec& node : nodes_) d += static_cast<int>(node.params.size());
  return d;
}

int MorphologyGraph::param_offset(int node) const {
  int off = 0;
  for (int i = 0; i < node; ++i) off += static_cast<int>(nodes_[i].params.size());
  return off;
}

DesignSpace DesignSpace::of(const MorphologyGraph& g) {
  DesignSpace s;
  for (const NodeSpec& node : g.nodes()) s.per_node.push_back(node.params);
  return s;
}

int DesignSpace::dim() const {
  int d = 0;
  for (const auto& ps : per_node) d += static_cast<int>(ps.size());
  return d;
}

const ParamSpec& DesignSpace::flat(int i) const {
  for (const auto& ps : per_node) {
    if (i < static_cast<int>(ps.size())) return ps[i];
    i -= static_cast<int>(ps.size());
  }
  throw std::out_of_range("design space: flat index out of range");
}

bool Design::within(const DesignSpace& space, double tol) const {
  if (static_cast<int>(values.size()) != space.dim()) return false;
  for (size_t i = 0; i < values.size(); ++i) {
    const ParamSpec& p = space.flat(static_cast<int>(i));
    if (values[i] < p.lo - tol || values[i] > p.hi + tol) return false;
  }
  return true;
}

Design sample_random_design(const DesignSpace& space, num::Rng& rng) {
  Design d;
  d.values.reserve(space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const ParamSpec& p = space.flat(i);
    d.values.push_back(rng.uniform(p.lo, p.hi));
  }
  return d;
}

Design clamp_design(const Design& d, const DesignSpace& space) {
  if (static_cast<int>(d.values.size()) != space.dim())
    throw std::invalid_argument("clamp_design: dimension mismatch");
  Design out = d;
  for (size_t i = 0; i < out.values.size(); ++i) {
    const ParamSpec& p = space.flat(static_cast<int>(i));
    out.values[i] = std::clamp(out.values[i], p.lo, p.hi);
  }
  return out;
}

}  // namespace coadapt::morph
