#pragma once

#include <string>
#include <vector>

#include "coadapt/morph/graph.hpp"

namespace coadapt::morph {

enum class EnvKind { HalfCheetah, Crawler, MultiPed, MultiPedStairs };

EnvKind parse_env_kind(const std::string& name);  // throws on unknown name
std::string env_kind_name(EnvKind kind);

struct MorphologyPool {
  std::vector<MorphologyGraph> graphs;  // catalog order; ids unique

  const MorphologyGraph* find(const std::string& morphology_id) const;
};

// Fixed candidate pool for an environment, parsed from the versioned
// catalog document compiled into the library.
MorphologyPool build_catalog(EnvKind kind);

// The raw catalog document (JSON text); exposed for inspection and tests.
const char* catalog_document();

}  // namespace coadapt::morph
