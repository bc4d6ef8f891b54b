#pragma once

#include <string>

#include "hyptctl/model.hpp"

namespace hyptctl {

/// Graphviz rendering of a PTA (locations with labels and invariants,
/// edges with guards and resets).
std::string to_dot(const Pta& a);

}  // namespace hyptctl
