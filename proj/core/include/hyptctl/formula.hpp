#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hyptctl/model.hpp"

namespace hyptctl {

// ---------------------------------------------------------------------------
// Boolean level
// ---------------------------------------------------------------------------

struct PropAtom {
    std::string prop;
    std::string path;
    bool operator==(const PropAtom&) const = default;
};

/// Comparison window for LAST(s1@p1) - LAST(s2@p2). Besides the plain
/// relations, interval membership is kept as a single atom so it compiles
/// into a single observer (the complement splits its guards instead).
struct LastWindow {
    enum class Kind { Rel, In, NotIn };
    Kind kind = Kind::Rel;
    Rel rel = Rel::Le;      // Kind::Rel
    LinearTerm bound;       // Kind::Rel
    Rel lo_rel = Rel::Ge;   // In/NotIn: diff lo_rel lo (Ge for '[', Gt for '(')
    LinearTerm lo;
    Rel hi_rel = Rel::Le;   // In/NotIn: diff hi_rel hi (Le for ']', Lt for ')')
    LinearTerm hi;
    bool operator==(const LastWindow&) const = default;
};

struct LastAtom {
    std::string prop1, path1;
    std::string prop2, path2;
    LastWindow window;
    bool operator==(const LastAtom&) const = default;
};

struct CountTermEntry {
    long long coeff = 1;
    std::string prop;
    std::string path;
    bool operator==(const CountTermEntry&) const = default;
};

/// cnt_{>=0} REL d with natural coefficients.
struct CountGe0Atom {
    std::vector<CountTermEntry> terms;  // sorted by (prop, path)
    Rel rel = Rel::Le;
    long long bound = 0;
    bool operator==(const CountGe0Atom&) const = default;
};

/// (cnt mod N) REL d with integer coefficients, N >= 1.
struct CountModAtom {
    std::vector<CountTermEntry> terms;
    long long modulus = 1;
    Rel rel = Rel::Eq;
    long long bound = 0;
    bool operator==(const CountModAtom&) const = default;
};

struct BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
    enum class Kind { True, Prop, Last, CountGe0, CountMod, Not, Or, And, Implies, Equiv, Nequiv };
    Kind kind = Kind::True;
    PropAtom prop;
    LastAtom last;
    CountGe0Atom count_ge0;
    CountModAtom count_mod;
    BoolPtr a, b;

    static BoolPtr mk_true();
    static BoolPtr mk_prop(std::string prop, std::string path);
    static BoolPtr mk_last(LastAtom atom);
    static BoolPtr mk_count_ge0(CountGe0Atom atom);
    static BoolPtr mk_count_mod(CountModAtom atom);
    static BoolPtr mk_not(BoolPtr a);
    static BoolPtr mk_bin(Kind k, BoolPtr a, BoolPtr b);
};

bool bool_equal(const BoolPtr& x, const BoolPtr& y);
std::string bool_to_string(const BoolPtr& e);

// ---------------------------------------------------------------------------
// Temporal level (nest-free: operands are Boolean only)
// ---------------------------------------------------------------------------

/// gamma in Param or N.
struct TemporalBound {
    Rel rel = Rel::Le;
    std::optional<std::string> param;
    long long nat = 0;
    bool operator==(const TemporalBound&) const = default;
    std::string to_string() const;
};

struct TemporalFormula {
    enum class Kind { Until, Release, WeakUntil, Diamond, Box };
    bool exists = true;
    std::vector<std::string> path_vars;
    std::optional<TemporalBound> bound;
    Kind kind = Kind::Until;
    BoolPtr lhs;  // null for Diamond/Box
    BoolPtr rhs;
    bool operator==(const TemporalFormula& o) const;
};

// ---------------------------------------------------------------------------
// Top level
// ---------------------------------------------------------------------------

struct TopExpr;
using TopPtr = std::shared_ptr<const TopExpr>;

struct TopExpr {
    enum class Kind { BoolAtom, Temporal, ParamCmp, Not, Or, And, Implies, ExistsParam, ForallParam };
    Kind kind = Kind::BoolAtom;
    BoolPtr atom;                // BoolAtom: a Boolean-level formula at top level
    TemporalFormula temporal;    // Temporal
    std::string param;           // ParamCmp lhs / quantifier binder
    Rel rel = Rel::Le;           // ParamCmp
    LinearTerm lt;               // ParamCmp rhs (non-negative linear term)
    TopPtr a, b;

    static TopPtr mk_atom(BoolPtr atom);
    static TopPtr mk_temporal(TemporalFormula t);
    static TopPtr mk_param_cmp(std::string param, Rel rel, LinearTerm lt);
    static TopPtr mk_not(TopPtr a);
    static TopPtr mk_bin(Kind k, TopPtr a, TopPtr b);
    static TopPtr mk_quant(Kind k, std::string param, TopPtr a);
};

bool top_equal(const TopPtr& x, const TopPtr& y);
std::string top_to_string(const TopPtr& e);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Expands every piece of syntax sugar verbatim: conjunction, implication,
/// (in)equivalence, release via negated until of negations, weak-until via
/// release, diamond via until-of-true, box via release-of-false, and
/// forall-parameter via negated existential. The result uses only the core
/// constructors and desugar is idempotent on it.
TopPtr desugar(const TopPtr& e);
BoolPtr desugar_bool(const BoolPtr& e);

/// Path variables in order of first occurrence (binders first).
std::vector<std::string> free_path_vars(const TopPtr& e);

/// Every parameter mentioned: comparison sides, LAST windows, temporal
/// bounds and quantifier binders.
std::set<std::string> collect_formula_params(const TopPtr& e);

/// Props referenced by the Boolean level, per path variable.
void collect_prop_atoms(const BoolPtr& e, std::vector<PropAtom>& out);

/// True when the desugared formula contains a quantifier or operator the
/// built-in backend cannot synthesize (a genuine forall-until node).
bool contains_forall_until(const TopPtr& desugared);

}  // namespace hyptctl
