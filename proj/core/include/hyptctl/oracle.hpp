#pragma once

#include <functional>
#include <vector>

#include "hyptctl/formula.hpp"
#include "hyptctl/model.hpp"

namespace hyptctl {

/// A position of a bounded joint path enumeration: the per-path states,
/// the elapsed duration and an evaluator for Boolean-level formulas
/// (including extended predicates) at this position.
struct JointPositionView {
    const std::vector<int>& locations;                      // per path variable
    const std::vector<std::vector<long long>>& clocks;      // per path, in clock_names order
    const std::vector<std::string>& clock_names;
    long long time = 0;
    std::function<bool(const BoolPtr&)> holds;
};

/// Reference bounded discrete-time evaluation of a top-level formula.
///
/// Preconditions: discrete time; the model constants and the valuation
/// are integral (rescale first otherwise); horizon >= 1. The horizon
/// bounds both the total duration and the number of joint steps of every
/// enumerated path prefix. Existential parameter quantifiers range over
/// `exists_grid` (a finite caller-supplied candidate list).
///
/// Paths are required to extend to time-divergent runs, decided on the
/// capped-clock finite graph.
bool oracle_eval_top(const Pta& a, const ParamValuation& v, const TopPtr& psi, int horizon,
                     const std::vector<Rational>& exists_grid = {});

/// The subset of the grid where oracle_eval_top holds.
std::vector<ParamValuation> oracle_grid_synth(const Pta& a, const TopPtr& psi,
                                              const std::vector<ParamValuation>& grid, int horizon,
                                              const std::vector<Rational>& exists_grid = {});

/// Enumerates every reachable position/bookkeeping configuration of `n`
/// joint paths of the valuated automaton up to the horizon and calls the
/// visitor once per distinct configuration. Path variables are named
/// pi1..pin for the evaluator.
void oracle_walk_positions(const Pta& a, const ParamValuation& v, int n, int horizon,
                           const std::function<void(const JointPositionView&)>& visit);

}  // namespace hyptctl
