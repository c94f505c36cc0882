#include "coadapt/morph/catalog.hpp"

#include <stdexcept>

#include "json.hpp"

namespace coadapt::morph {

using nlohmann::json;

namespace {

// Versioned catalog document. Each morphology is a list of limb chains
// [torso_anchor_x, segment_count], expanded to one node per actuated
// segment. The first chain's first segment is the graph root; the first
// segment of every later chain links to the previous chain's first segment,
// which keeps the actuator graph one connected tree across the torso.
constexpr const char* kCatalogJson = R"CAT({
  "version": 1,
  "environments": {
    "halfcheetah": {
      "params": [["length", 0.2, 0.6]],
      "morphologies": [
        {"label": "halfcheetah-b1f1", "chains": [[-0.5, 1], [0.5, 1]]},
        {"label": "halfcheetah-b1f2", "chains": [[-0.5, 1], [0.5, 2]]},
        {"label": "halfcheetah-b2f1", "chains": [[-0.5, 2], [0.5, 1]]},
        {"label": "halfcheetah-b2f2", "chains": [[-0.5, 2], [0.5, 2]]},
        {"label": "halfcheetah-b2f3", "chains": [[-0.5, 2], [0.5, 3]]},
        {"label": "halfcheetah-b3f2", "chains": [[-0.5, 3], [0.5, 2]]},
        {"label": "halfcheetah-b3f3", "chains": [[-0.5, 3], [0.5, 3]]}
      ]
    },
    "crawler": {
      "params": [["length", 0.2, 0.6], ["orientation", -1.0, 1.0]],
      "morphologies": [
        {"label": "crawler-u3", "chains": [[0.0, 3]]},
        {"label": "crawler-u4", "chains": [[0.0, 4]]},
        {"label": "crawler-b22", "chains": [[-0.3, 2], [0.3, 2]]},
        {"label": "crawler-b23", "chains": [[-0.3, 2], [0.3, 3]]},
        {"label": "crawler-b33", "chains": [[-0.3, 3], [0.3, 3]]}
      ]
    },
    "multiped": {
      "params": [["length", 0.2, 0.6], ["orientation", -1.0, 1.0]],
      "morphologies": [
        {"label": "multiped-b22", "chains": [[-0.5, 2], [0.5, 2]]},
        {"label": "multiped-b23", "chains": [[-0.5, 2], [0.5, 3]]},
        {"label": "multiped-t212", "chains": [[-0.5, 2], [0.0, 1], [0.5, 2]]},
        {"label": "multiped-t222", "chains": [[-0.5, 2], [0.0, 2], [0.5, 2]]},
        {"label": "multiped-q1221", "chains": [[-0.5, 1], [-0.17, 2], [0.17, 2], [0.5, 1]]}
      ]
    },
    "multiped_stairs": {"alias": "multiped"}
  }
})CAT";

MorphologyPool expand(const json& env) {
  std::vector<ParamSpec> params;
  for (const json& jp : env.at("params"))
    params.push_back({jp.at(0).get<std::string>(), jp.at(1).get<double>(), jp.at(2).get<double>()});

  MorphologyPool pool;
  for (const json& jm : env.at("morphologies")) {
    std::vector<NodeSpec> nodes;
    int prev_chain_root = -1;
    for (const json& jc : jm.at("chains")) {
      const double anchor = jc.at(0).get<double>();
      const int count = jc.at(1).get<int>();
      int prev = -1;
      for (int s = 0; s < count; ++s) {
        NodeSpec n;
        n.params = params;
        if (s == 0) {
          n.anchor_x = anchor;
          n.parent = prev_chain_root;  // -1 for the very first chain
          prev_chain_root = static_cast<int>(nodes.size());
        } else {
          n.parent = prev;
        }
        prev = static_cast<int>(nodes.size());
        nodes.push_back(std::move(n));
      }
    }
    pool.graphs.push_back(MorphologyGraph::make(std::move(nodes), jm.at("label").get<std::string>()));
  }
  return pool;
}

}  // namespace

EnvKind parse_env_kind(const std::string& name) {
  if (name == "halfcheetah") return EnvKind::HalfCheetah;
  if (name == "crawler") return EnvKind::Crawler;
  if (name == "multiped") return EnvKind::MultiPed;
  if (name == "multiped_stairs") return EnvKind::MultiPedStairs;
  throw std::invalid_argument("unknown environment kind: " + name);
}

std::string env_kind_name(EnvKind kind) {
  switch (kind) {
    case EnvKind::HalfCheetah: return "halfcheetah";
    case EnvKind::Crawler: return "crawler";
    case EnvKind::MultiPed: return "multiped";
    case EnvKind::MultiPedStairs: return "multiped_stairs";
  }
  return "?";
}

const char* catalog_document() { return kCatalogJson; }

MorphologyPool build_catalog(EnvKind kind) {
  const json doc = json::parse(kCatalogJson);
  json env = doc.at("environments").at(env_kind_name(kind));
  if (env.contains("alias")) env = doc.at("environments").at(env.at("alias").get<std::string>());
  return expand(env);
}

const MorphologyGraph* MorphologyPool::find(const std::string& morphology_id) const {
  for (const MorphologyGraph& g : graphs)
    if (g.id() == morphology_id) return &g;
  return nullptr;
}

}  // namespace coadapt::morph
