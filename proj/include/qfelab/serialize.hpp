#pragma once

#include <string>

#include "qfelab/channels.hpp"
#include "qfelab/core.hpp"

namespace qfelab {

// JSON encodings. Pure states and density operators use {"n", "re", "im"} with
// matrices flattened row-major; Kraus operators are rectangular and carry
// explicit "rows"/"cols" alongside "re"/"im".
std::string to_json(const PureState& state);
std::string to_json(const DensityOperator& rho);
std::string to_json(const KrausChannel& channel);

PureState pure_state_from_json(const std::string& text);
DensityOperator density_from_json(const std::string& text);
KrausChannel channel_from_json(const std::string& text);

}  // namespace qfelab
