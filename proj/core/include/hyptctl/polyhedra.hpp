#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hyptctl/model.hpp"
#include "hyptctl/rational.hpp"

namespace hyptctl {

/// sum coeffs[x]*x + constant  REL  0, with REL in {<, <=, =}.
/// >= and > are normalized away by negation on construction. Stored with
/// integer coefficients, gcd-reduced; the represented set over the
/// rationals is unchanged by the normalization.
struct LinIneq {
    enum class R { Lt, Le, Eq };
    std::map<std::string, Integer> coeffs;
    Integer constant = 0;
    R rel = R::Le;

    static LinIneq make(const std::map<std::string, Rational>& coeffs, const Rational& constant,
                        Rel rel);
    /// clock-guard atom -> one inequality (clock treated as a variable).
    static LinIneq of_atom(const AtomicConstraint& atom);

    void gcd_normalize();
    LinIneq negated_le() const;  // complement: < -> >=-as-<=-form etc. (not for Eq)
    bool is_constant() const;
    bool constant_truth() const;  // only valid when is_constant()
    bool same_lhs(const LinIneq& o) const { return coeffs == o.coeffs; }
    bool evaluate(const std::map<std::string, Rational>& point) const;
    std::string to_string() const;  // readable: positive terms left, rest right
    bool operator==(const LinIneq& o) const;
    bool operator<(const LinIneq& o) const;  // arbitrary total order for dedup
};

/// Conjunction of LinIneq; the empty conjunction is the whole space.
class ConvexPoly {
public:
    ConvexPoly() = default;
    explicit ConvexPoly(std::vector<LinIneq> cons);

    const std::vector<LinIneq>& constraints() const { return cons_; }
    bool trivially_empty() const { return contradictory_; }

    void add(LinIneq c);
    void add_atom(const AtomicConstraint& atom);
    ConvexPoly meet(const ConvexPoly& other) const;

    /// Exact emptiness over the rationals (strict bounds respected).
    bool is_empty() const;

    /// Exact existential projection of one variable (Fourier-Motzkin;
    /// equalities are expanded into two inequalities internally).
    ConvexPoly eliminate(const std::string& var) const;
    ConvexPoly eliminate_all(const std::set<std::string>& vars) const;

    /// Does this polyhedron entail the constraint?
    bool entails(const LinIneq& c) const;
    /// this included in other (as sets of rational points).
    bool included_in(const ConvexPoly& other) const;

    /// Drops constraints implied by the remaining ones. Quadratic in the
    /// number of constraints; used on stored symbolic states.
    void reduce_strong();

    bool evaluate(const std::map<std::string, Rational>& point) const;
    void collect_vars(std::set<std::string>& out) const;

    /// A rational point satisfying the constraints; nullopt when empty.
    std::optional<std::map<std::string, Rational>> sample_point() const;

    /// Deterministic ordering/merging of constraints (adjacent <=-pairs
    /// become equalities). Cheap; does not run reduce_strong.
    void canonicalize();

    std::string to_string() const;

private:
    void dominance_prune();

    std::vector<LinIneq> cons_;
    bool contradictory_ = false;
    mutable std::optional<bool> empty_cache_;
};

/// Finite union of convex polyhedra over the parameters, or the full
/// domain (Q>=0)^P kept intensionally so complements stay exact. All set
/// operations implicitly restrict to the non-negative orthant.
class ParamSet {
public:
    ParamSet() = default;
    static ParamSet empty(std::vector<std::string> params);
    static ParamSet full(std::vector<std::string> params);
    static ParamSet of_polys(std::vector<std::string> params, std::vector<ConvexPoly> polys);

    const std::vector<std::string>& params() const { return params_; }
    bool is_universe() const { return universe_; }
    const std::vector<ConvexPoly>& polys() const { return polys_; }

    bool is_empty() const;
    bool member(const ParamValuation& v) const;

    ParamSet unite(const ParamSet& other) const;
    ParamSet intersect(const ParamSet& other) const;
    /// Complement within the non-negative orthant.
    ParamSet complement() const;
    /// other subseteq this, decided exactly.
    bool includes(const ParamSet& other) const;
    bool sem_equal(const ParamSet& other) const;

    /// Existential projection of one parameter: the result contains v iff
    /// some v' differing only at p is in this set. p stays in the
    /// parameter universe, unconstrained beyond p >= 0.
    ParamSet project_out(const std::string& p) const;

    /// Some valuation inside the set (all-zero for the universe); nullopt
    /// when empty.
    std::optional<ParamValuation> witness() const;

    /// Sorted, deduplicated, empty members dropped.
    ParamSet canonical() const;

    std::string to_text() const;  // UNION { ... & ... , ... } / UNIVERSE / EMPTY
    std::string to_json() const;  // exact fractions as strings

private:
    ConvexPoly orthant() const;
    std::vector<ConvexPoly> as_polys() const;  // universe expanded to orthant

    std::vector<std::string> params_;
    bool universe_ = false;
    std::vector<ConvexPoly> polys_;
};

/// d minus s as a finite union of disjoint convex pieces.
std::vector<ConvexPoly> poly_subtract(const ConvexPoly& d, const ConvexPoly& s);

}  // namespace hyptctl
