#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hyptctl/rational.hpp"

namespace hyptctl {

enum class Rel { Lt, Le, Eq, Ge, Gt };

const char* rel_text(Rel r);
Rel rel_flip(Rel r);  // swaps the two sides: a R b  <->  b flip(R) a

/// Linear term over parameters: sum coeffs[p]*p + constant.
/// Model and formula syntax only admits integer coefficients and
/// constants (the parsers enforce that); valuation may leave an exact
/// rational constant behind, which is why the constant is a Rational.
/// The "non-negative linear term" check of the grammar is nonnegative().
struct LinearTerm {
    std::map<std::string, long long> coeffs;
    Rational constant = 0;

    static LinearTerm from_constant(long long c);
    static LinearTerm from_param(const std::string& p, long long coeff = 1);

    bool is_constant() const;
    bool nonnegative() const;  // all coefficients and the constant >= 0
    LinearTerm negated() const;
    Rational evaluate(const std::map<std::string, Rational>& v) const;
    void collect_params(std::set<std::string>& out) const;
    bool operator==(const LinearTerm& o) const = default;
    std::string to_string() const;
};

/// One conjunct of a clock guard / invariant.
/// lhs is a clock, a clock difference c1 - c2, or the constant 0 (the
/// difference and zero forms only arise inside observers).
struct AtomicConstraint {
    enum class Lhs { Clock, Diff, Zero };
    Lhs lhs = Lhs::Clock;
    std::string clock1;  // unused for Zero
    std::string clock2;  // only for Diff
    Rel rel = Rel::Le;
    LinearTerm rhs;

    bool operator==(const AtomicConstraint& o) const = default;
    std::string to_string() const;
};

/// Conjunction of atomic constraints; the empty conjunction is true.
struct Guard {
    std::vector<AtomicConstraint> atoms;

    static Guard top() { return Guard{}; }
    bool is_top() const { return atoms.empty(); }
    Guard conjoin(const Guard& other) const;
    void collect_clocks(std::set<std::string>& out) const;
    void collect_params(std::set<std::string>& out) const;
    bool operator==(const Guard& o) const = default;
    std::string to_string() const;
};

struct Location {
    std::string name;
    std::set<std::string> labels;
    Guard invariant;
};

struct Edge {
    int source = 0;
    Guard guard;
    std::set<std::string> resets;
    int target = 0;
};

/// Parametric timed automaton. Locations and edges are identified by
/// index; clock, parameter and proposition identities are their names.
struct Pta {
    std::string name;
    std::set<std::string> props;
    std::vector<Location> locations;
    std::set<int> initial;
    std::set<std::string> clocks;
    std::set<std::string> params;
    std::vector<Edge> edges;

    int location_index(const std::string& name) const;  // -1 when absent
    std::vector<int> edges_from(int loc) const;
};

using ClockValuation = std::map<std::string, Rational>;
using ParamValuation = std::map<std::string, Rational>;

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity;
    std::string message;
};

struct IdentifierError {
    std::string identifier;
    std::string message;
};

/// Substitutes mu/v into the atom and compares exactly.
/// Throws IdentifierError when an identifier is not covered.
bool eval_atom(const AtomicConstraint& a, const ClockValuation& mu, const ParamValuation& v);
bool eval_guard(const Guard& g, const ClockValuation& mu, const ParamValuation& v);

struct ValuatedPta {
    Pta pta;                 // parameter set is empty
    Rational scale = 1;      // 1 unless rescaling was requested
};

/// Replaces every parameter occurrence by v. With rescale, multiplies all
/// constants by the lcm of their denominators so the result is an
/// integer-valued TA; the applied factor is recorded in `scale`.
/// Throws IdentifierError when v misses one of A's parameters.
ValuatedPta valuate_pta(const Pta& a, const ParamValuation& v, bool rescale = false);

/// Structural well-formedness report: dangling ids, undeclared clocks,
/// parameters or propositions, and self-loops with no guard and no reset
/// (warning). An empty result means every operation accepts the model.
std::vector<Diagnostic> validate_pta(const Pta& a);

/// Largest absolute integer constant appearing in guards and invariants
/// once v is substituted; used for clock capping in the discrete oracle.
Integer max_guard_constant(const Pta& a, const ParamValuation& v);

}  // namespace hyptctl
