#include "hyptctl/reduce.hpp"

#include <algorithm>

namespace hyptctl {

namespace {

const std::string kSinglePath = "pi";

std::string renamed(const std::string& prop, int copy) {
    return prop + "^" + std::to_string(copy);
}

BoolPtr reduce_bool(const BoolPtr& e, const std::map<std::string, int>& index_of) {
    if (!e) return e;
    using K = BoolExpr::Kind;
    auto copy_of = [&](const std::string& path) {
        auto it = index_of.find(path);
        if (it == index_of.end())
            throw IdentifierError{path, "path variable '" + path + "' is not bound"};
        return it->second;
    };
    switch (e->kind) {
        case K::True: return e;
        case K::Prop:
            return BoolExpr::mk_prop(renamed(e->prop.prop, copy_of(e->prop.path)), kSinglePath);
        case K::Last: {
            LastAtom at = e->last;
            at.prop1 = renamed(at.prop1, copy_of(at.path1));
            at.prop2 = renamed(at.prop2, copy_of(at.path2));
            at.path1 = at.path2 = kSinglePath;
            return BoolExpr::mk_last(std::move(at));
        }
        case K::CountGe0: {
            CountGe0Atom at = e->count_ge0;
            for (auto& t : at.terms) {
                t.prop = renamed(t.prop, copy_of(t.path));
                t.path = kSinglePath;
            }
            return BoolExpr::mk_count_ge0(std::move(at));
        }
        case K::CountMod: {
            CountModAtom at = e->count_mod;
            for (auto& t : at.terms) {
                t.prop = renamed(t.prop, copy_of(t.path));
                t.path = kSinglePath;
            }
            return BoolExpr::mk_count_mod(std::move(at));
        }
        case K::Not: return BoolExpr::mk_not(reduce_bool(e->a, index_of));
        default:
            return BoolExpr::mk_bin(e->kind, reduce_bool(e->a, index_of),
                                    reduce_bool(e->b, index_of));
    }
}

}  // namespace

TemporalFormula reduce_n(const TemporalFormula& node) {
    std::map<std::string, int> index_of;
    for (size_t i = 0; i < node.path_vars.size(); ++i)
        index_of[node.path_vars[i]] = static_cast<int>(i) + 1;
    TemporalFormula out = node;
    out.path_vars = {kSinglePath};
    out.lhs = reduce_bool(node.lhs, index_of);
    out.rhs = reduce_bool(node.rhs, index_of);
    return out;
}

ReductionArtifacts build_reduction(const Pta& a, const TemporalFormula& node) {
    ReductionArtifacts art;
    int n = static_cast<int>(node.path_vars.size());
    SelfComposition sc = self_compose(a, n);
    art.self_composition = sc.pta;
    art.renamings = std::move(sc.renamings);
    art.reduced = reduce_n(node);

    ObserverProduct obs = build_observer_product(TopExpr::mk_temporal(art.reduced));
    if (obs.stripped->kind != TopExpr::Kind::Temporal)
        throw IdentifierError{"", "observer stripping changed the formula shape"};
    art.stripped = obs.stripped->temporal;
    art.product = attach_observers(art.self_composition, obs);
    art.ext_legend = std::move(obs.legend);
    art.warnings = std::move(obs.warnings);
    art.phi1_locs = locations_satisfying(art.product, art.stripped.lhs);
    art.phi2_locs = locations_satisfying(art.product, art.stripped.rhs);
    return art;
}

namespace {

Approx combine_union(Approx a, Approx b) {
    if (a == Approx::Exact) return b;
    if (b == Approx::Exact) return a;
    if (a == b) return a;
    return Approx::Unknown;
}

Approx flip(Approx a) {
    switch (a) {
        case Approx::Under: return Approx::Over;
        case Approx::Over: return Approx::Under;
        default: return a;
    }
}

struct SynthDriver {
    const Pta& a;
    const SynthOptions& opts;
    std::vector<std::string> universe;
    ReduceOutcome* out;

    ParamSet rec(const TopPtr& psi, Approx& approx) {
        using K = TopExpr::Kind;
        switch (psi->kind) {
            case K::BoolAtom: {
                // Truth of a Boolean-level formula under the empty path
                // assignment is independent of the model and valuation.
                std::function<bool(const BoolPtr&)> empty_eval = [&](const BoolPtr& e) -> bool {
                    using B = BoolExpr::Kind;
                    switch (e->kind) {
                        case B::True: return true;
                        case B::Not: return !empty_eval(e->a);
                        case B::Or: return empty_eval(e->a) || empty_eval(e->b);
                        case B::And: return empty_eval(e->a) && empty_eval(e->b);
                        case B::Implies: return !empty_eval(e->a) || empty_eval(e->b);
                        case B::Equiv: return empty_eval(e->a) == empty_eval(e->b);
                        case B::Nequiv: return empty_eval(e->a) != empty_eval(e->b);
                        default: return false;  // props and extended predicates
                    }
                };
                return empty_eval(psi->atom) ? ParamSet::full(universe)
                                             : ParamSet::empty(universe);
            }
            case K::ParamCmp: {
                std::map<std::string, Rational> coeffs;
                coeffs[psi->param] += 1;
                for (auto& [p, c] : psi->lt.coeffs) coeffs[p] -= rational_of(c);
                ConvexPoly half;
                half.add(LinIneq::make(coeffs, -psi->lt.constant, psi->rel));
                return ParamSet::of_polys(universe, {std::move(half)});
            }
            case K::Not: {
                ParamSet inner = rec(psi->a, approx);
                approx = flip(approx);
                return inner.complement();
            }
            case K::Or: {
                Approx a1 = Approx::Exact, a2 = Approx::Exact;
                ParamSet left = rec(psi->a, a1);
                ParamSet right = rec(psi->b, a2);
                approx = combine_union(combine_union(approx, a1), a2);
                return left.unite(right);
            }
            case K::And: {
                Approx a1 = Approx::Exact, a2 = Approx::Exact;
                ParamSet left = rec(psi->a, a1);
                ParamSet right = rec(psi->b, a2);
                approx = combine_union(combine_union(approx, a1), a2);
                return left.intersect(right);
            }
            case K::Implies: {
                Approx a1 = Approx::Exact, a2 = Approx::Exact;
                ParamSet left = rec(psi->a, a1);
                ParamSet right = rec(psi->b, a2);
                approx = combine_union(combine_union(approx, flip(a1)), a2);
                return left.complement().unite(right);
            }
            case K::ExistsParam: {
                ParamSet inner = rec(psi->a, approx);
                return inner.project_out(psi->param);
            }
            case K::ForallParam: {
                // unreachable after desugaring; kept for direct library use.
                // complement-project-complement keeps the approximation side.
                ParamSet inner = rec(psi->a, approx);
                return inner.complement().project_out(psi->param).complement();
            }
            case K::Temporal: {
                const TemporalFormula& t = psi->temporal;
                if (t.kind != TemporalFormula::Kind::Until)
                    throw BackendUnsupported{
                        "temporal operator is not in until form; desugar first"};
                if (!t.exists)
                    throw BackendUnsupported{
                        "the built-in backend does not synthesize universal until; "
                        "use the export path (reduce) and an external PTCTL solver"};
                ReductionArtifacts art = build_reduction(a, t);
                for (auto& w : art.warnings) out->warnings.push_back(w);
                SynthOutcome synth =
                    eu_synth(art.product, art.phi1_locs, art.phi2_locs, t.bound, opts);
                for (auto& w : synth.warnings) out->warnings.push_back(w);
                if (synth.truncated) {
                    out->truncated = true;
                    approx = Approx::Under;
                }
                // embed into the full parameter universe
                return ParamSet::of_polys(universe, synth.result.polys());
            }
        }
        return ParamSet::empty(universe);
    }
};

std::vector<std::string> parameter_universe(const Pta& a, const TopPtr& psi) {
    std::set<std::string> all = a.params;
    auto more = collect_formula_params(psi);
    all.insert(more.begin(), more.end());
    return {all.begin(), all.end()};
}

}  // namespace

ReduceOutcome reduce_synth(const Pta& a, const TopPtr& psi, const SynthOptions& opts) {
    ReduceOutcome out;
    TopPtr core = desugar(psi);
    SynthDriver driver{a, opts, parameter_universe(a, core), &out};
    Approx approx = Approx::Exact;
    out.result = driver.rec(core, approx).canonical();
    out.approx = approx;
    return out;
}

CheckOutcome model_check(const Pta& a, const TopPtr& psi, const SynthOptions& opts,
                         bool universality) {
    CheckOutcome out;
    TopPtr query = psi;
    if (universality) {
        // universal over parameters:  not (exists p1..pk. not psi)
        TopPtr negated = TopExpr::mk_not(psi);
        auto params = parameter_universe(a, desugar(psi));
        for (auto it = params.rbegin(); it != params.rend(); ++it)
            negated = TopExpr::mk_quant(TopExpr::Kind::ExistsParam, *it, negated);
        query = TopExpr::mk_not(negated);
    }
    ReduceOutcome synth = reduce_synth(a, query, opts);
    out.truncated = synth.truncated;
    out.warnings = synth.warnings;
    bool empty = synth.result.is_empty();
    if (!empty && (synth.approx == Approx::Exact || synth.approx == Approx::Under)) {
        out.verdict = CheckOutcome::Verdict::Sat;
        out.witness = synth.result.witness();
        if (out.witness && opts.time_domain == SynthOptions::TimeDomain::Discrete) {
            // prefer an integer witness when one exists nearby
            std::vector<std::string> frac;
            for (auto& [p, q] : *out.witness)
                if (!is_integral(q)) frac.push_back(p);
            if (!frac.empty() && frac.size() <= 10) {
                for (int mask = 0; mask < (1 << frac.size()); ++mask) {
                    ParamValuation cand = *out.witness;
                    for (size_t i = 0; i < frac.size(); ++i) {
                        Rational q = cand[frac[i]];
                        Integer r;
                        if (mask & (1 << i))
                            mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(),
                                       q.get_den().get_mpz_t());
                        else
                            mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(),
                                       q.get_den().get_mpz_t());
                        if (r < 0) r = 0;
                        cand[frac[i]] = Rational(r);
                    }
                    if (synth.result.member(cand)) {
                        out.witness = cand;
                        break;
                    }
                }
            }
        }
    } else if (empty && (synth.approx == Approx::Exact || synth.approx == Approx::Over)) {
        out.verdict = CheckOutcome::Verdict::Unsat;
    } else {
        out.verdict = CheckOutcome::Verdict::Unknown;
    }
    return out;
}

}  // namespace hyptctl
