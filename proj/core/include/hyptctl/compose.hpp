#pragma once

#include <map>
#include <string>
#include <vector>

#include "hyptctl/model.hpp"

namespace hyptctl {

/// Per-copy renaming used by self-composition: proposition s becomes s^i,
/// clock c becomes c^i. Inverses are kept for projecting paths back.
struct RenamingScheme {
    int index = 1;
    std::map<std::string, std::string> prop_map;   // s   -> s^i
    std::map<std::string, std::string> clock_map;  // c   -> c^i
    std::map<std::string, std::string> prop_inv;   // s^i -> s
    std::map<std::string, std::string> clock_inv;

    static RenamingScheme for_copy(const Pta& a, int index);
};

/// Applies a renaming scheme to an automaton (labels, clocks, guards).
Pta rename_pta(const Pta& a, const RenamingScheme& r);

/// Interleaving parallel composition. Requires disjoint clocks and
/// propositions (shared clocks or propositions raise IdentifierError);
/// parameters are shared. Edges are the left-only, right-only and joint
/// families over the full location product.
Pta parallel(const Pta& a1, const Pta& a2);

/// Synchronized product: initial pairs must agree on shared propositions
/// and every edge must keep the target labels consistent on the shared
/// alphabet. Requires disjoint clocks. The location set is restricted to
/// the pairs discretely reachable from the initial ones, which leaves the
/// behaviour unchanged and keeps n-ary observer products tractable.
Pta sync_product(const Pta& a1, const Pta& a2);

/// Left fold of sync_product over several automata.
Pta sync_product_all(const std::vector<Pta>& parts);

struct SelfComposition {
    Pta pta;
    std::vector<RenamingScheme> renamings;
};

/// n-fold parallel composition of renamed copies. Unguarded no-reset
/// self-loops are stripped afterwards; they cannot change the semantics.
SelfComposition self_compose(const Pta& a, int n);

/// One-location automaton with no clocks, propositions or edges; the
/// neutral element of sync_product.
Pta unit_pta();

}  // namespace hyptctl
