#include "coadapt/morph/serialize.hpp"

#include <stdexcept>

#include "json.hpp"

namespace coadapt::morph {

using nlohmann::json;

namespace {
constexpr const char* kFormat = "coadapt-morph-1";
}

std::string serialize_morphology(const MorphologyGraph& g, const Design* design) {
  json doc;
  doc["format"] = kFormat;
  doc["morphology_id"] = g.id();
  doc["label"] = g.label();
  json nodes = json::array();
  for (const NodeSpec& n : g.nodes()) {
    json jn;
    jn["parent"] = n.parent;
    if (n.anchor_x) jn["anchor_x"] = *n.anchor_x;
    json params = json::array();
    for (const ParamSpec& p : n.params) params.push_back({{"name", p.name}, {"lo", p.lo}, {"hi", p.hi}});
    jn["params"] = params;
    nodes.push_back(jn);
  }
  doc["nodes"] = nodes;
  if (design) doc["design"] = design->values;
  return doc.dump(2);
}

ParsedMorphology deserialize_morphology(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("morphology parse error: ") + e.what());
  }
  try {
    if (doc.value("format", "") != kFormat)
      throw std::runtime_error("unsupported format tag");
    std::vector<NodeSpec> nodes;
    for (const json& jn : doc.at("nodes")) {
      NodeSpec n;
      n.parent = jn.at("parent").get<int>();
      if (jn.contains("anchor_x")) n.anchor_x = jn.at("anchor_x").get<double>();
      if (jn.contains("params"))
        for (const json& jp : jn.at("params"))
          n.params.push_back({jp.at("name").get<std::string>(), jp.at("lo").get<double>(),
                              jp.at("hi").get<double>()});
      nodes.push_back(std::move(n));
    }
    ParsedMorphology out;
    out.graph = MorphologyGraph::make(std::move(nodes), doc.value("label", ""));
    if (doc.contains("morphology_id") &&
        doc.at("morphology_id").get<std::string>() != out.graph.id())
      throw std::runtime_error("stored morphology_id does not match the graph topology");
    if (doc.contains("design")) {
      Design d;
      d.values = doc.at("design").get<std::vector<double>>();
      if (!d.within(DesignSpace::of(out.graph)))
        throw std::runtime_error("design is outside its parameter bounds");
      out.design = std::move(d);
    }
    return out;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("morphology parse error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("morphology parse error: ") + e.what());
  }
}

}  // namespace coadapt::morph
