#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hyptctl/compose.hpp"
#include "hyptctl/formula.hpp"
#include "hyptctl/model.hpp"

namespace hyptctl {

struct ObserverResult {
    Pta observer;
    std::string fresh_prop;
    std::vector<std::string> warnings;
};

/// Observer for LAST(s1@pi) - LAST(s2@pi) in a comparison window.
/// Locations are P({s1,s2,phi}) x {pre, post}; the clocks track the time
/// since the last rise of s1/s2. Initial locations carry the
/// parameter-only invariant "0 in window" (phi chosen) or its complement
/// (phi not chosen); disjunctive complements duplicate the location, and
/// statically false copies are dropped. Rise edges re-evaluate the window
/// with freshly reset clocks substituted by zero.
ObserverResult observer_last(const LastAtom& atom, const std::string& fresh_prop);

/// Observer for a non-negative COUNT combination compared with d
/// (counters saturate at d+1). Clockless and parameterless.
ObserverResult observer_count_ge0(const CountGe0Atom& atom, const std::string& fresh_prop);

/// Observer for a COUNT combination mod N compared with d (counters wrap
/// at N). Clockless and parameterless.
ObserverResult observer_count_mod(const CountModAtom& atom, const std::string& fresh_prop);

struct ObserverProduct {
    Pta product;  // synchronized product of the observers; unit when none
    std::vector<Pta> observers;
    std::vector<std::pair<std::string, std::string>> legend;  // fresh prop -> predicate
    std::vector<std::string> warnings;
    TopPtr stripped;  // extended predicates replaced by their fresh props
    bool has_ext() const { return !observers.empty(); }
};

/// Collects the distinct extended predicates of a single-path formula (set
/// semantics, first occurrence order), builds one observer per predicate
/// with fresh propositions __ext0, __ext1, ..., and replaces each
/// predicate by its proposition. Throws IdentifierError when more than one
/// path variable is used.
ObserverProduct build_observer_product(const TopPtr& formula);

/// Synchronized product of the system with the observers. The system's
/// alphabet is first extended with every monitored proposition, so an
/// observer never free-runs on a proposition the system does not declare
/// (such propositions are simply false everywhere).
Pta attach_observers(const Pta& system, const ObserverProduct& obs);

}  // namespace hyptctl
