#include "hyptctl/observers.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace hyptctl {

namespace {

// ---------------------------------------------------------------------------
// LAST observers (Def.-7-style construction)
// ---------------------------------------------------------------------------

/// The clock expression compared against the window after substituting 0
/// for freshly reset clocks.
enum class LhsForm { Diff, Clock1, NegClock2, Zero };

AtomicConstraint window_atom(LhsForm form, const std::string& c1, const std::string& c2, Rel rel,
                             const LinearTerm& lt) {
    AtomicConstraint a;
    switch (form) {
        case LhsForm::Diff:
            a.lhs = AtomicConstraint::Lhs::Diff;
            a.clock1 = c1;
            a.clock2 = c2;
            a.rel = rel;
            a.rhs = lt;
            break;
        case LhsForm::Clock1:
            a.lhs = AtomicConstraint::Lhs::Clock;
            a.clock1 = c1;
            a.rel = rel;
            a.rhs = lt;
            break;
        case LhsForm::NegClock2:
            // -c2 rel lt  <=>  c2 flip(rel) -lt
            a.lhs = AtomicConstraint::Lhs::Clock;
            a.clock1 = c2;
            a.rel = rel_flip(rel);
            a.rhs = lt.negated();
            break;
        case LhsForm::Zero:
            a.lhs = AtomicConstraint::Lhs::Zero;
            a.rel = rel;
            a.rhs = lt;
            break;
    }
    return a;
}

Rel negate_rel(Rel r) {
    switch (r) {
        case Rel::Lt: return Rel::Ge;
        case Rel::Le: return Rel::Gt;
        case Rel::Ge: return Rel::Lt;
        case Rel::Gt: return Rel::Le;
        case Rel::Eq: return Rel::Eq;  // handled separately (two disjuncts)
    }
    return r;
}

/// "expr in window" as a disjunction of conjunctive guards.
std::vector<Guard> window_holds(const LastWindow& w, LhsForm form, const std::string& c1,
                                const std::string& c2) {
    switch (w.kind) {
        case LastWindow::Kind::Rel:
            return {Guard{{window_atom(form, c1, c2, w.rel, w.bound)}}};
        case LastWindow::Kind::In:
            return {Guard{{window_atom(form, c1, c2, w.lo_rel, w.lo),
                           window_atom(form, c1, c2, w.hi_rel, w.hi)}}};
        case LastWindow::Kind::NotIn:
            return {Guard{{window_atom(form, c1, c2, negate_rel(w.lo_rel), w.lo)}},
                    Guard{{window_atom(form, c1, c2, negate_rel(w.hi_rel), w.hi)}}};
    }
    return {};
}

/// "expr not in window"; equality splits into two strict constraints.
std::vector<Guard> window_fails(const LastWindow& w, LhsForm form, const std::string& c1,
                                const std::string& c2) {
    switch (w.kind) {
        case LastWindow::Kind::Rel:
            if (w.rel == Rel::Eq)
                return {Guard{{window_atom(form, c1, c2, Rel::Lt, w.bound)}},
                        Guard{{window_atom(form, c1, c2, Rel::Gt, w.bound)}}};
            return {Guard{{window_atom(form, c1, c2, negate_rel(w.rel), w.bound)}}};
        case LastWindow::Kind::In:
            return {Guard{{window_atom(form, c1, c2, negate_rel(w.lo_rel), w.lo)}},
                    Guard{{window_atom(form, c1, c2, negate_rel(w.hi_rel), w.hi)}}};
        case LastWindow::Kind::NotIn:
            return {Guard{{window_atom(form, c1, c2, w.lo_rel, w.lo),
                           window_atom(form, c1, c2, w.hi_rel, w.hi)}}};
    }
    return {};
}

/// A guard without clocks whose atoms are all statically decidable and
/// false (e.g. 0 < 0) can be dropped at construction time.
bool statically_false(const Guard& g) {
    for (auto& a : g.atoms) {
        if (a.lhs != AtomicConstraint::Lhs::Zero) continue;
        if (!a.rhs.is_constant()) continue;
        Rational c = a.rhs.constant;
        bool holds = false;
        switch (a.rel) {
            case Rel::Lt: holds = 0 < c; break;
            case Rel::Le: holds = 0 <= c; break;
            case Rel::Eq: holds = 0 == c; break;
            case Rel::Ge: holds = 0 >= c; break;
            case Rel::Gt: holds = 0 > c; break;
        }
        if (!holds) return true;
    }
    return false;
}

std::string pr_name(const std::set<std::string>& pr) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto& s : pr) {
        if (!first) os << ".";
        os << s;
        first = false;
    }
    os << "}";
    return os.str();
}

}  // namespace

ObserverResult observer_last(const LastAtom& atom, const std::string& fresh_prop) {
    ObserverResult out;
    if (atom.path1 != atom.path2)
        throw IdentifierError{atom.path2, "LAST observer requires a single path variable"};
    const bool aliased = atom.prop1 == atom.prop2;
    if (aliased)
        out.warnings.push_back("LAST compares '" + atom.prop1 +
                               "' with itself; the difference is constantly 0");

    std::vector<std::string> monitored = aliased
                                             ? std::vector<std::string>{atom.prop1}
                                             : std::vector<std::string>{atom.prop1, atom.prop2};
    // clock names carry the fresh proposition so several LAST observers
    // can meet in one synchronized product
    std::string c1 = "__" + fresh_prop + "_" + atom.prop1;
    std::string c2 = aliased ? c1 : "__" + fresh_prop + "_" + atom.prop2;

    Pta& o = out.observer;
    o.name = "obs_" + fresh_prop;
    out.fresh_prop = fresh_prop;
    for (auto& s : monitored) o.props.insert(s);
    o.props.insert(fresh_prop);
    o.clocks.insert(c1);
    o.clocks.insert(c2);
    atom.window.bound.collect_params(o.params);
    atom.window.lo.collect_params(o.params);
    atom.window.hi.collect_params(o.params);

    // All subsets of monitored + phi, each with the pre/post flag.
    std::vector<std::set<std::string>> prs;
    int m = static_cast<int>(monitored.size());
    for (int mask = 0; mask < (1 << (m + 1)); ++mask) {
        std::set<std::string> pr;
        for (int i = 0; i < m; ++i)
            if (mask & (1 << i)) pr.insert(monitored[i]);
        if (mask & (1 << m)) pr.insert(fresh_prop);
        prs.push_back(std::move(pr));
    }

    struct Key {
        std::set<std::string> pr;
        bool post;
    };
    // Initial locations may need several copies (one per invariant
    // disjunct); edges target the post copies which are unique.
    std::map<std::pair<std::string, bool>, int> post_index;
    std::vector<std::pair<Key, int>> sources;  // every concrete location

    auto add_location = [&](const std::set<std::string>& pr, bool post, const Guard& inv,
                            bool initial, int copy) {
        Location loc;
        loc.name = "(" + pr_name(pr) + "|" + (post ? "post" : "pre") +
                   (copy ? "#" + std::to_string(copy) : "") + ")";
        loc.labels = pr;
        loc.invariant = inv;
        int id = static_cast<int>(o.locations.size());
        o.locations.push_back(std::move(loc));
        if (initial) o.initial.insert(id);
        if (post) post_index[{pr_name(pr), true}] = id;
        sources.push_back({{pr, post}, id});
        return id;
    };

    for (auto& pr : prs) {
        // pre copies: initial, invariant selects phi by the window at 0
        bool has_phi = pr.count(fresh_prop) > 0;
        std::vector<Guard> invs = has_phi ? window_holds(atom.window, LhsForm::Zero, c1, c2)
                                          : window_fails(atom.window, LhsForm::Zero, c1, c2);
        int copy = 0;
        for (auto& inv : invs) {
            if (statically_false(inv)) {
                out.warnings.push_back("dropped initial observer location " + pr_name(pr) +
                                       " with unsatisfiable invariant " + inv.to_string());
                continue;
            }
            add_location(pr, false, inv, true, copy++);
        }
        add_location(pr, true, Guard::top(), false, 0);
    }

    auto post_id = [&](const std::set<std::string>& pr) { return post_index.at({pr_name(pr), true}); };

    // Edge families, from every concrete location.
    for (auto& [key, src] : sources) {
        const auto& pr = key.pr;
        bool phi_in = pr.count(fresh_prop) > 0;
        // no-rise: monitored props may only fall, phi unchanged
        for (auto& target_pr : prs) {
            if (target_pr == pr) continue;
            bool subset = std::includes(pr.begin(), pr.end(), target_pr.begin(), target_pr.end());
            if (!subset) continue;
            bool phi_tgt = target_pr.count(fresh_prop) > 0;
            if (phi_in != phi_tgt) continue;
            o.edges.push_back({src, Guard::top(), {}, post_id(target_pr)});
        }
        // rises: target monitored set pr' with pr' minus pr nonempty
        for (int mask = 0; mask < (1 << m); ++mask) {
            std::set<std::string> target_mon;
            std::set<std::string> rises;
            for (int i = 0; i < m; ++i)
                if (mask & (1 << i)) target_mon.insert(monitored[i]);
            for (auto& s : target_mon)
                if (!pr.count(s)) rises.insert(s);
            if (rises.empty()) continue;
            std::set<std::string> resets;
            LhsForm form;
            if (aliased) {
                form = LhsForm::Zero;
                resets.insert(c1);
            } else if (rises.size() == 2) {
                form = LhsForm::Zero;
                resets.insert(c1);
                resets.insert(c2);
            } else if (rises.count(atom.prop1)) {
                form = LhsForm::NegClock2;
                resets.insert(c1);
            } else {
                form = LhsForm::Clock1;
                resets.insert(c2);
            }
            std::set<std::string> tgt_true = target_mon;
            tgt_true.insert(fresh_prop);
            for (auto& g : window_holds(atom.window, form, c1, c2))
                if (!statically_false(g)) o.edges.push_back({src, g, resets, post_id(tgt_true)});
            for (auto& g : window_fails(atom.window, form, c1, c2))
                if (!statically_false(g)) o.edges.push_back({src, g, resets, post_id(target_mon)});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// COUNT observers (Def.-8/9-style constructions)
// ---------------------------------------------------------------------------

namespace {

struct CounterSpace {
    std::vector<std::string> monitored;  // sorted props with nonzero coefficient
    std::vector<long long> coeffs;       // aligned with monitored
    long long limit = 0;                 // values range over 0..limit
};

CounterSpace counter_space(const std::vector<CountTermEntry>& terms, long long limit) {
    CounterSpace cs;
    cs.limit = limit;
    std::map<std::string, long long> merged;
    for (auto& t : terms) merged[t.prop] += t.coeff;
    for (auto& [p, c] : merged) {
        if (c == 0) continue;
        cs.monitored.push_back(p);
        cs.coeffs.push_back(c);
    }
    if (cs.monitored.size() > 6)
        throw IdentifierError{cs.monitored[6],
                              "COUNT observer would track more than 6 propositions"};
    double states = 1;
    for (size_t i = 0; i < cs.monitored.size(); ++i) states *= double(limit + 1) * 2;
    if (states > 2e5)
        throw IdentifierError{cs.monitored[0], "COUNT observer state space exceeds the cap"};
    return cs;
}

bool compare_ll(long long a, Rel r, long long b) {
    switch (r) {
        case Rel::Lt: return a < b;
        case Rel::Le: return a <= b;
        case Rel::Eq: return a == b;
        case Rel::Ge: return a >= b;
        case Rel::Gt: return a > b;
    }
    return false;
}

long long math_mod(long long x, long long n) {
    long long r = x % n;
    return r < 0 ? r + n : r;
}

/// Shared skeleton of the two counting observers: locations are
/// (pr, counter vector), every label change has an edge, and `bump`
/// defines the per-rise counter update.
Pta build_count_observer(const CounterSpace& cs, const std::string& fresh_prop,
                         const std::string& name,
                         const std::function<long long(long long)>& bump,
                         const std::function<bool(const std::vector<long long>&)>& labeled) {
    Pta o;
    o.name = name;
    for (auto& s : cs.monitored) o.props.insert(s);
    o.props.insert(fresh_prop);

    int m = static_cast<int>(cs.monitored.size());
    std::vector<std::vector<long long>> counter_vectors;
    std::vector<long long> cur(m, 0);
    std::function<void(int)> gen = [&](int i) {
        if (i == m) {
            counter_vectors.push_back(cur);
            return;
        }
        for (long long v = 0; v <= cs.limit; ++v) {
            cur[i] = v;
            gen(i + 1);
        }
    };
    gen(0);

    std::map<std::pair<int, std::vector<long long>>, int> index;
    for (int mask = 0; mask < (1 << m); ++mask) {
        for (auto& eta : counter_vectors) {
            Location loc;
            std::set<std::string> pr;
            for (int i = 0; i < m; ++i)
                if (mask & (1 << i)) pr.insert(cs.monitored[i]);
            std::ostringstream nm;
            nm << "(" << pr_name(pr);
            for (auto v : eta) nm << "," << v;
            nm << ")";
            loc.name = nm.str();
            loc.labels = pr;
            if (labeled(eta)) loc.labels.insert(fresh_prop);
            int id = static_cast<int>(o.locations.size());
            index[{mask, eta}] = id;
            o.locations.push_back(std::move(loc));
            bool all_zero = std::all_of(eta.begin(), eta.end(), [](long long v) { return v == 0; });
            if (all_zero) o.initial.insert(id);
        }
    }

    for (auto& [key, src] : index) {
        auto [mask, eta] = key;
        for (int mask2 = 0; mask2 < (1 << m); ++mask2) {
            if (mask2 == mask) continue;  // nothing changes; the loop is dropped
            std::vector<long long> eta2 = eta;
            for (int i = 0; i < m; ++i)
                if ((mask2 & (1 << i)) && !(mask & (1 << i))) eta2[i] = bump(eta[i]);
            o.edges.push_back({src, Guard::top(), {}, index.at({mask2, eta2})});
        }
    }
    return o;
}

}  // namespace

ObserverResult observer_count_ge0(const CountGe0Atom& atom, const std::string& fresh_prop) {
    for (auto& t : atom.terms)
        if (t.coeff < 0)
            throw IdentifierError{t.prop, "cnt>=0 observer requires non-negative coefficients"};
    ObserverResult out;
    out.fresh_prop = fresh_prop;
    long long d = atom.bound;
    CounterSpace cs = counter_space(atom.terms, d + 1);
    out.observer = build_count_observer(
        cs, fresh_prop, "obs_" + fresh_prop,
        [d](long long v) { return v < d ? v + 1 : d + 1; },
        [&](const std::vector<long long>& eta) {
            long long sum = 0;
            for (size_t i = 0; i < eta.size(); ++i) sum += cs.coeffs[i] * eta[i];
            return compare_ll(sum, atom.rel, d);
        });
    return out;
}

ObserverResult observer_count_mod(const CountModAtom& atom, const std::string& fresh_prop) {
    if (atom.modulus < 1)
        throw IdentifierError{fresh_prop, "modulus must be at least 1"};
    ObserverResult out;
    out.fresh_prop = fresh_prop;
    long long n = atom.modulus;
    CounterSpace cs = counter_space(atom.terms, n - 1);
    out.observer = build_count_observer(
        cs, fresh_prop, "obs_" + fresh_prop,
        [n](long long v) { return v < n - 1 ? v + 1 : 0; },
        [&](const std::vector<long long>& eta) {
            long long sum = 0;
            for (size_t i = 0; i < eta.size(); ++i) sum += cs.coeffs[i] * eta[i];
            return compare_ll(math_mod(sum, n), atom.rel, atom.bound);
        });
    return out;
}

// ---------------------------------------------------------------------------
// product over ext(psi)
// ---------------------------------------------------------------------------

namespace {

void collect_ext_atoms(const BoolPtr& e, std::vector<BoolPtr>& out) {
    if (!e) return;
    switch (e->kind) {
        case BoolExpr::Kind::Last:
        case BoolExpr::Kind::CountGe0:
        case BoolExpr::Kind::CountMod: {
            for (auto& have : out)
                if (bool_equal(have, e)) return;
            out.push_back(e);
            return;
        }
        default:
            collect_ext_atoms(e->a, out);
            collect_ext_atoms(e->b, out);
    }
}

void collect_ext_top(const TopPtr& e, std::vector<BoolPtr>& out) {
    if (!e) return;
    switch (e->kind) {
        case TopExpr::Kind::BoolAtom: collect_ext_atoms(e->atom, out); break;
        case TopExpr::Kind::Temporal:
            collect_ext_atoms(e->temporal.lhs, out);
            collect_ext_atoms(e->temporal.rhs, out);
            break;
        default:
            collect_ext_top(e->a, out);
            collect_ext_top(e->b, out);
    }
}

BoolPtr strip_bool(const BoolPtr& e, const std::vector<BoolPtr>& atoms,
                   const std::vector<std::string>& fresh, const std::string& path) {
    if (!e) return e;
    switch (e->kind) {
        case BoolExpr::Kind::Last:
        case BoolExpr::Kind::CountGe0:
        case BoolExpr::Kind::CountMod:
            for (size_t i = 0; i < atoms.size(); ++i)
                if (bool_equal(atoms[i], e)) return BoolExpr::mk_prop(fresh[i], path);
            return e;
        case BoolExpr::Kind::True:
        case BoolExpr::Kind::Prop: return e;
        case BoolExpr::Kind::Not: return BoolExpr::mk_not(strip_bool(e->a, atoms, fresh, path));
        default:
            return BoolExpr::mk_bin(e->kind, strip_bool(e->a, atoms, fresh, path),
                                    strip_bool(e->b, atoms, fresh, path));
    }
}

TopPtr strip_top(const TopPtr& e, const std::vector<BoolPtr>& atoms,
                 const std::vector<std::string>& fresh, const std::string& path) {
    if (!e) return e;
    switch (e->kind) {
        case TopExpr::Kind::BoolAtom:
            return TopExpr::mk_atom(strip_bool(e->atom, atoms, fresh, path));
        case TopExpr::Kind::Temporal: {
            TemporalFormula t = e->temporal;
            t.lhs = strip_bool(t.lhs, atoms, fresh, path);
            t.rhs = strip_bool(t.rhs, atoms, fresh, path);
            return TopExpr::mk_temporal(std::move(t));
        }
        case TopExpr::Kind::ParamCmp: return e;
        case TopExpr::Kind::Not: return TopExpr::mk_not(strip_top(e->a, atoms, fresh, path));
        case TopExpr::Kind::ExistsParam:
        case TopExpr::Kind::ForallParam:
            return TopExpr::mk_quant(e->kind, e->param, strip_top(e->a, atoms, fresh, path));
        default:
            return TopExpr::mk_bin(e->kind, strip_top(e->a, atoms, fresh, path),
                                   strip_top(e->b, atoms, fresh, path));
    }
}

}  // namespace

Pta attach_observers(const Pta& system, const ObserverProduct& obs) {
    if (!obs.has_ext()) return system;
    Pta sys = system;
    std::set<std::string> fresh;
    for (auto& [prop, pred] : obs.legend) fresh.insert(prop);
    for (auto& o : obs.observers)
        for (auto& p : o.props)
            if (!fresh.count(p)) sys.props.insert(p);
    return sync_product(sys, obs.product);
}

ObserverProduct build_observer_product(const TopPtr& formula) {
    auto vars = free_path_vars(formula);
    if (vars.size() > 1)
        throw IdentifierError{vars[1], "observer compilation requires a single path variable"};
    std::string path = vars.empty() ? "pi" : vars[0];

    std::vector<BoolPtr> atoms;
    collect_ext_top(formula, atoms);

    ObserverProduct out;
    std::vector<std::string> fresh;
    for (size_t i = 0; i < atoms.size(); ++i) {
        std::string prop = "__ext" + std::to_string(i);
        fresh.push_back(prop);
        ObserverResult obs;
        switch (atoms[i]->kind) {
            case BoolExpr::Kind::Last: obs = observer_last(atoms[i]->last, prop); break;
            case BoolExpr::Kind::CountGe0: obs = observer_count_ge0(atoms[i]->count_ge0, prop); break;
            case BoolExpr::Kind::CountMod: obs = observer_count_mod(atoms[i]->count_mod, prop); break;
            default: continue;
        }
        out.legend.emplace_back(prop, bool_to_string(atoms[i]));
        out.warnings.insert(out.warnings.end(), obs.warnings.begin(), obs.warnings.end());
        out.observers.push_back(std::move(obs.observer));
    }
    out.product = out.observers.empty() ? unit_pta() : sync_product_all(out.observers);
    out.stripped = strip_top(formula, atoms, fresh, path);
    return out;
}

}  // namespace hyptctl
