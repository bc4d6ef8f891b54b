#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hyptctl/formula.hpp"
#include "hyptctl/model.hpp"
#include "hyptctl/polyhedra.hpp"

namespace hyptctl {

/// Symbolic state of the zone exploration: a location and a polyhedron
/// over clocks, parameters and (when a duration bound is checked) the
/// absolute-time clock "__dur", which is never reset.
struct SymbolicState {
    int location = 0;
    ConvexPoly poly;
};

struct SynthOptions {
    std::optional<int> max_depth;          // BFS layers
    double timeout_seconds = 300.0;        // per temporal sub-call
    bool inclusion_check = true;           // prune states subsumed at the same location
    enum class TimeDomain { Dense, Discrete };
    TimeDomain time_domain = TimeDomain::Dense;
};

struct SynthOutcome {
    ParamSet result;
    bool truncated = false;  // depth/timeout cut: the result is an under-approximation
    long long states_explored = 0;
    std::vector<std::string> warnings;
};

/// Time-elapsed successors of an elapsed symbolic state: guard, reset,
/// target invariant, then time elapse re-intersected with the invariant.
std::vector<SymbolicState> symbolic_successors(const SymbolicState& s, const Pta& a);

/// Parameter synthesis for  E [phi1 U{rel gamma} phi2]  where the operand
/// truth is per-location (phi1_locs / phi2_locs). Collects, over every
/// state reachable through phi1 locations, the parameter projection of
/// the state intersected with the phi2 location set and the duration
/// bound; a phi2 location outside phi1 only contributes its entry
/// instant. May not terminate in general; depth/timeout cuts yield an
/// under-approximation flagged as truncated.
SynthOutcome eu_synth(const Pta& a, const std::set<int>& phi1_locs, const std::set<int>& phi2_locs,
                      const std::optional<TemporalBound>& bound, const SynthOptions& opts);

/// Per-location truth of a Boolean operand over location labels only
/// (extended predicates must have been compiled away first).
std::set<int> locations_satisfying(const Pta& a, const BoolPtr& operand);

}  // namespace hyptctl
