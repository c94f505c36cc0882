#pragma once

#include <optional>
#include <string>

#include "coadapt/morph/graph.hpp"

namespace coadapt::morph {

// JSON text round-trip for (graph[, design]). Doubles survive bit-exactly.
// Deserialization re-validates all graph invariants and recomputes the
// morphology id; a stored id that disagrees is rejected.
std::string serialize_morphology(const MorphologyGraph& g, const Design* design = nullptr);

struct ParsedMorphology {
  MorphologyGraph graph;
  std::optional<Design> design;
};

// Throws std::runtime_error with a location-carrying message on bad input.
ParsedMorphology deserialize_morphology(const std::string& text);

}  // namespace coadapt::morph
