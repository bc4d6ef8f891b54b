#include "hyptctl/fragment.hpp"

#include <map>
#include <sstream>

namespace hyptctl {

namespace {

struct ParamUse {
    bool lower = false;
    bool upper = false;
};

/// Scans one guard atom for parameter-bound usage. Plain "clock rel p"
/// atoms classify p as a lower or upper bound; anything else involving
/// parameters is outside the plain guard grammar.
void scan_atom(const AtomicConstraint& atom, std::map<std::string, ParamUse>& uses,
               bool& nonstandard, std::set<std::string>& parametric_clocks) {
    std::set<std::string> params;
    atom.rhs.collect_params(params);
    if (atom.lhs != AtomicConstraint::Lhs::Clock) {
        if (!params.empty() || atom.lhs == AtomicConstraint::Lhs::Diff) nonstandard = true;
        for (auto& p : params) {
            uses[p].lower = true;
            uses[p].upper = true;
        }
        return;
    }
    if (params.empty()) return;
    parametric_clocks.insert(atom.clock1);
    bool plain = params.size() == 1 && atom.rhs.constant == 0 &&
                 atom.rhs.coeffs.begin()->second == 1;
    if (!plain) {
        nonstandard = true;
        for (auto& p : params) {
            uses[p].lower = true;
            uses[p].upper = true;
        }
        return;
    }
    const std::string& p = *params.begin();
    switch (atom.rel) {
        case Rel::Lt:
        case Rel::Le: uses[p].upper = true; break;
        case Rel::Gt:
        case Rel::Ge: uses[p].lower = true; break;
        case Rel::Eq:
            uses[p].lower = true;
            uses[p].upper = true;
            break;
    }
}

void walk_temporal_flags(const TopPtr& e, bool& only_exists_diamond, int& max_path_vars) {
    if (!e) return;
    if (e->kind == TopExpr::Kind::Temporal) {
        const TemporalFormula& t = e->temporal;
        max_path_vars = std::max(max_path_vars, static_cast<int>(t.path_vars.size()));
        bool diamond_shape =
            t.kind == TemporalFormula::Kind::Diamond ||
            (t.kind == TemporalFormula::Kind::Until && t.lhs && t.lhs->kind == BoolExpr::Kind::True);
        if (!(t.exists && diamond_shape)) only_exists_diamond = false;
        return;
    }
    walk_temporal_flags(e->a, only_exists_diamond, max_path_vars);
    walk_temporal_flags(e->b, only_exists_diamond, max_path_vars);
}

void walk_ext_params(const BoolPtr& e, bool& params_in_ext) {
    if (!e) return;
    if (e->kind == BoolExpr::Kind::Last) {
        std::set<std::string> ps;
        e->last.window.bound.collect_params(ps);
        e->last.window.lo.collect_params(ps);
        e->last.window.hi.collect_params(ps);
        if (!ps.empty()) params_in_ext = true;
        return;
    }
    walk_ext_params(e->a, params_in_ext);
    walk_ext_params(e->b, params_in_ext);
}

void walk_ext_params_top(const TopPtr& e, bool& params_in_ext) {
    if (!e) return;
    if (e->kind == TopExpr::Kind::BoolAtom) {
        walk_ext_params(e->atom, params_in_ext);
        return;
    }
    if (e->kind == TopExpr::Kind::Temporal) {
        walk_ext_params(e->temporal.lhs, params_in_ext);
        walk_ext_params(e->temporal.rhs, params_in_ext);
        return;
    }
    walk_ext_params_top(e->a, params_in_ext);
    walk_ext_params_top(e->b, params_in_ext);
}

bool quantifier_free(const TopPtr& e) {
    if (!e) return true;
    if (e->kind == TopExpr::Kind::ExistsParam || e->kind == TopExpr::Kind::ForallParam)
        return false;
    return quantifier_free(e->a) && quantifier_free(e->b);
}

bool exists_prefix_form(const TopPtr& e) {
    TopPtr cur = e;
    while (cur && cur->kind == TopExpr::Kind::ExistsParam) cur = cur->a;
    return quantifier_free(cur);
}

}  // namespace

FragmentReport classify_fragment(const Pta& a, const TopPtr& psi, bool discrete_time) {
    FragmentReport r;

    std::map<std::string, ParamUse> uses;
    std::set<std::string> parametric_clocks;
    for (auto& loc : a.locations) {
        if (!loc.invariant.is_top()) r.model_has_invariants = true;
        for (auto& atom : loc.invariant.atoms)
            scan_atom(atom, uses, r.model_nonstandard_guards, parametric_clocks);
    }
    for (auto& e : a.edges)
        for (auto& atom : e.guard.atoms)
            scan_atom(atom, uses, r.model_nonstandard_guards, parametric_clocks);

    r.parametric_clocks = static_cast<int>(parametric_clocks.size());
    bool any_param_used = false;
    r.model_is_lu = true;
    for (auto& [p, use] : uses) {
        if (!use.lower && !use.upper) continue;
        any_param_used = true;
        if (use.lower && use.upper) {
            r.model_is_lu = false;
        } else if (use.lower) {
            r.lower_bound_params.push_back(p);
        } else {
            r.upper_bound_params.push_back(p);
        }
    }
    r.model_nonparametric = !any_param_used;
    if (r.model_nonparametric) r.model_is_lu = false;  // the partition is vacuous

    auto formula_params = collect_formula_params(psi);
    r.formula_nonparametric = formula_params.empty();
    walk_ext_params_top(psi, r.formula_params_in_ext);
    r.formula_only_exists_diamond = true;
    walk_temporal_flags(psi, r.formula_only_exists_diamond, r.max_path_vars);
    r.alternation_free_param_quantifiers = exists_prefix_form(psi);

    if (r.model_nonparametric && !r.formula_params_in_ext && !r.model_nonstandard_guards) {
        r.verdict = DecidabilityClass::NonparametricModelRestrictedFormula;
        r.verdict_assumes_integer_params = true;
    } else if (r.model_is_lu && !r.model_nonstandard_guards && r.formula_nonparametric &&
               r.formula_only_exists_diamond) {
        r.verdict = DecidabilityClass::LUModelReachability;
    } else if (r.model_is_lu && !r.model_nonstandard_guards && !r.model_has_invariants &&
               r.formula_nonparametric) {
        r.verdict = DecidabilityClass::LUModelNoInvariants;
        r.verdict_assumes_integer_params = true;
    } else if (discrete_time && r.parametric_clocks <= 1 && uses.size() <= 1 &&
               !r.model_nonstandard_guards && r.formula_nonparametric &&
               r.formula_only_exists_diamond && r.max_path_vars <= 2) {
        r.verdict = DecidabilityClass::SingleParametricClockDiscrete;
    } else {
        r.verdict = DecidabilityClass::SemiAlgorithmOnly;
    }
    return r;
}

std::string FragmentReport::verdict_text() const {
    switch (verdict) {
        case DecidabilityClass::NonparametricModelRestrictedFormula:
            return "decidable: non-parametric model, parameters kept out of LAST/COUNT";
        case DecidabilityClass::LUModelReachability:
            return "decidable: L/U model, non-parametric exists-diamond formula";
        case DecidabilityClass::LUModelNoInvariants:
            return "decidable: L/U model without invariants, non-parametric formula";
        case DecidabilityClass::SingleParametricClockDiscrete:
            return "decidable: single parametric clock and parameter over discrete time";
        case DecidabilityClass::SemiAlgorithmOnly: return "semi-algorithm only";
    }
    return "?";
}

std::string FragmentReport::to_text() const {
    std::ostringstream os;
    auto flag = [&](const char* name, bool v) { os << "  " << name << ": " << (v ? "yes" : "no") << "\n"; };
    os << "model:\n";
    flag("L/U", model_is_lu);
    if (model_is_lu) {
        os << "    lower-bound parameters:";
        for (auto& p : lower_bound_params) os << " " << p;
        os << "\n    upper-bound parameters:";
        for (auto& p : upper_bound_params) os << " " << p;
        os << "\n";
    }
    flag("non-parametric", model_nonparametric);
    flag("has invariants", model_has_invariants);
    flag("non-standard guards", model_nonstandard_guards);
    os << "  parametric clocks: " << parametric_clocks << "\n";
    os << "formula:\n";
    flag("parameters in LAST/COUNT", formula_params_in_ext);
    flag("non-parametric", formula_nonparametric);
    flag("only exists-diamond", formula_only_exists_diamond);
    flag("alternation-free parameter quantifiers", alternation_free_param_quantifiers);
    os << "  path variables: " << max_path_vars << "\n";
    if (verdict_assumes_integer_params)
        os << "verdict (assuming integer-valued parameters): " << verdict_text() << "\n";
    else
        os << "verdict: " << verdict_text() << "\n";
    return os.str();
}

}  // namespace hyptctl
