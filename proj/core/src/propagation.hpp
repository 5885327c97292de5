#pragma once

#include "credal/model.hpp"

#include <cstddef>

namespace credal::detail {

enum class Mode { kAR, kARPlus };

struct EngineStats {
  std::size_t credal_sites = 0;
  std::size_t fallbacks = 0;
  std::size_t peak_vertices = 0;
};

// Collects interval messages toward `query` over the requisite variables and
// returns the normalized belief. kARPlus replaces the table/message products
// by credal local elimination under `budget`.
IntervalPotential propagate(const CredalNetwork& net, std::size_t query, const Evidence& evidence,
                            const VertexSelection* selection, Mode mode, std::size_t budget,
                            EngineStats* stats);

}  // namespace credal::detail
