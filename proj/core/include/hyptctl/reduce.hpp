#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hyptctl/backend.hpp"
#include "hyptctl/compose.hpp"
#include "hyptctl/formula.hpp"
#include "hyptctl/observers.hpp"
#include "hyptctl/polyhedra.hpp"

namespace hyptctl {

/// Rewrites a temporal node over path variables pi_1..pi_n into a
/// single-path formula over the composed alphabet: s@pi_i becomes s^i@pi,
/// LAST and COUNT terms are re-indexed the same way and the binder list
/// collapses to [pi]. Throws IdentifierError on unbound path variables.
TemporalFormula reduce_n(const TemporalFormula& node);

/// Everything the pipeline produces for one temporal node: the composed
/// system with its observers, the stripped single-path formula, and the
/// per-location operand truth sets the backend consumes.
struct ReductionArtifacts {
    Pta self_composition;  // A^n
    Pta product;           // A^n x O(psi')
    TemporalFormula reduced;   // reduce^n(node), still with extended predicates
    TemporalFormula stripped;  // extended predicates replaced by fresh props
    std::vector<RenamingScheme> renamings;
    std::vector<std::pair<std::string, std::string>> ext_legend;
    std::vector<std::string> warnings;
    std::set<int> phi1_locs, phi2_locs;
};

ReductionArtifacts build_reduction(const Pta& a, const TemporalFormula& node);

/// Raised when the built-in backend cannot synthesize an operator (a
/// genuine forall-until after desugaring); such formulas go through the
/// export path instead.
struct BackendUnsupported {
    std::string message;
};

/// How a computed set relates to the exact answer once truncation happens
/// somewhere in the recursion: complements flip the direction.
enum class Approx { Exact, Under, Over, Unknown };

struct ReduceOutcome {
    ParamSet result;
    Approx approx = Approx::Exact;
    bool truncated = false;
    std::vector<std::string> warnings;
};

/// The inductive synthesis driver over the top-level structure: the full
/// domain for truth, the empty set for bare Boolean atoms, complement and
/// union for the connectives, half-spaces for parameter comparisons,
/// existential projection for parameter quantifiers and backend synthesis
/// on the reduced product for temporal nodes.
ReduceOutcome reduce_synth(const Pta& a, const TopPtr& psi, const SynthOptions& opts);

struct CheckOutcome {
    enum class Verdict { Sat, Unsat, Unknown };
    Verdict verdict = Verdict::Unknown;
    std::optional<ParamValuation> witness;
    bool truncated = false;
    std::vector<std::string> warnings;
};

/// Emptiness / universality checking on top of reduce_synth. A nonempty
/// under-approximation is a sound Sat; an empty over-approximation is a
/// sound Unsat; anything else under truncation reports Unknown.
CheckOutcome model_check(const Pta& a, const TopPtr& psi, const SynthOptions& opts,
                         bool universality = false);

}  // namespace hyptctl
