#include "hyptctl/formula.hpp"

#include <algorithm>
#include <sstream>

namespace hyptctl {

// ---------------------------------------------------------------------------
// constructors
// ---------------------------------------------------------------------------

BoolPtr BoolExpr::mk_true() {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::True;
    return e;
}

BoolPtr BoolExpr::mk_prop(std::string prop, std::string path) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::Prop;
    e->prop = {std::move(prop), std::move(path)};
    return e;
}

BoolPtr BoolExpr::mk_last(LastAtom atom) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::Last;
    e->last = std::move(atom);
    return e;
}

BoolPtr BoolExpr::mk_count_ge0(CountGe0Atom atom) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::CountGe0;
    std::sort(atom.terms.begin(), atom.terms.end(), [](const auto& x, const auto& y) {
        return std::tie(x.prop, x.path) < std::tie(y.prop, y.path);
    });
    e->count_ge0 = std::move(atom);
    return e;
}

BoolPtr BoolExpr::mk_count_mod(CountModAtom atom) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::CountMod;
    std::sort(atom.terms.begin(), atom.terms.end(), [](const auto& x, const auto& y) {
        return std::tie(x.prop, x.path) < std::tie(y.prop, y.path);
    });
    e->count_mod = std::move(atom);
    return e;
}

BoolPtr BoolExpr::mk_not(BoolPtr a) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = Kind::Not;
    e->a = std::move(a);
    return e;
}

BoolPtr BoolExpr::mk_bin(Kind k, BoolPtr a, BoolPtr b) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

bool TemporalFormula::operator==(const TemporalFormula& o) const {
    return exists == o.exists && path_vars == o.path_vars && bound == o.bound && kind == o.kind &&
           bool_equal(lhs, o.lhs) && bool_equal(rhs, o.rhs);
}

TopPtr TopExpr::mk_atom(BoolPtr atom) {
    auto e = std::make_shared<TopExpr>();
    e->kind = Kind::BoolAtom;
    e->atom = std::move(atom);
    return e;
}

TopPtr TopExpr::mk_temporal(TemporalFormula t) {
    auto e = std::make_shared<TopExpr>();
    e->kind = Kind::Temporal;
    e->temporal = std::move(t);
    return e;
}

TopPtr TopExpr::mk_param_cmp(std::string param, Rel rel, LinearTerm lt) {
    auto e = std::make_shared<TopExpr>();
    e->kind = Kind::ParamCmp;
    e->param = std::move(param);
    e->rel = rel;
    e->lt = std::move(lt);
    return e;
}

TopPtr TopExpr::mk_not(TopPtr a) {
    auto e = std::make_shared<TopExpr>();
    e->kind = Kind::Not;
    e->a = std::move(a);
    return e;
}

TopPtr TopExpr::mk_bin(Kind k, TopPtr a, TopPtr b) {
    auto e = std::make_shared<TopExpr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

TopPtr TopExpr::mk_quant(Kind k, std::string param, TopPtr a) {
    auto e = std::make_shared<TopExpr>();
    e->kind = k;
    e->param = std::move(param);
    e->a = std::move(a);
    return e;
}

// ---------------------------------------------------------------------------
// equality
// ---------------------------------------------------------------------------

bool bool_equal(const BoolPtr& x, const BoolPtr& y) {
    if (!x || !y) return !x && !y;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case BoolExpr::Kind::True: return true;
        case BoolExpr::Kind::Prop: return x->prop == y->prop;
        case BoolExpr::Kind::Last: return x->last == y->last;
        case BoolExpr::Kind::CountGe0: return x->count_ge0 == y->count_ge0;
        case BoolExpr::Kind::CountMod: return x->count_mod == y->count_mod;
        case BoolExpr::Kind::Not: return bool_equal(x->a, y->a);
        default: return bool_equal(x->a, y->a) && bool_equal(x->b, y->b);
    }
}

bool top_equal(const TopPtr& x, const TopPtr& y) {
    if (!x || !y) return !x && !y;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case TopExpr::Kind::BoolAtom: return bool_equal(x->atom, y->atom);
        case TopExpr::Kind::Temporal: return x->temporal == y->temporal;
        case TopExpr::Kind::ParamCmp:
            return x->param == y->param && x->rel == y->rel && x->lt == y->lt;
        case TopExpr::Kind::Not: return top_equal(x->a, y->a);
        case TopExpr::Kind::ExistsParam:
        case TopExpr::Kind::ForallParam: return x->param == y->param && top_equal(x->a, y->a);
        default: return top_equal(x->a, y->a) && top_equal(x->b, y->b);
    }
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace {

std::string count_terms_to_string(const std::vector<CountTermEntry>& terms) {
    std::ostringstream os;
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        long long c = t.coeff;
        if (i == 0) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        if (c != 1) os << c << "*";
        os << "COUNT(" << t.prop << "@" << t.path << ")";
    }
    return os.str();
}

std::string window_to_string(const LastWindow& w) {
    std::ostringstream os;
    switch (w.kind) {
        case LastWindow::Kind::Rel:
            os << " " << rel_text(w.rel) << " " << w.bound.to_string();
            break;
        case LastWindow::Kind::In:
        case LastWindow::Kind::NotIn:
            os << (w.kind == LastWindow::Kind::In ? " in " : " not in ");
            os << (w.lo_rel == Rel::Ge ? "[" : "(");
            os << w.lo.to_string() << ", " << w.hi.to_string();
            os << (w.hi_rel == Rel::Le ? "]" : ")");
            break;
    }
    return os.str();
}

}  // namespace

std::string bool_to_string(const BoolPtr& e) {
    if (!e) return "<null>";
    using K = BoolExpr::Kind;
    switch (e->kind) {
        case K::True: return "true";
        case K::Prop: return e->prop.prop + "@" + e->prop.path;
        case K::Last: {
            std::ostringstream os;
            os << "LAST(" << e->last.prop1 << "@" << e->last.path1 << ") - LAST("
               << e->last.prop2 << "@" << e->last.path2 << ")" << window_to_string(e->last.window);
            return os.str();
        }
        case K::CountGe0: {
            std::ostringstream os;
            os << count_terms_to_string(e->count_ge0.terms) << " " << rel_text(e->count_ge0.rel)
               << " " << e->count_ge0.bound;
            return os.str();
        }
        case K::CountMod: {
            std::ostringstream os;
            os << "(" << count_terms_to_string(e->count_mod.terms) << ") mod "
               << e->count_mod.modulus << " " << rel_text(e->count_mod.rel) << " "
               << e->count_mod.bound;
            return os.str();
        }
        case K::Not: return "~(" + bool_to_string(e->a) + ")";
        case K::Or: return "(" + bool_to_string(e->a) + " | " + bool_to_string(e->b) + ")";
        case K::And: return "(" + bool_to_string(e->a) + " & " + bool_to_string(e->b) + ")";
        case K::Implies: return "(" + bool_to_string(e->a) + " -> " + bool_to_string(e->b) + ")";
        case K::Equiv: return "(" + bool_to_string(e->a) + " = " + bool_to_string(e->b) + ")";
        case K::Nequiv: return "(" + bool_to_string(e->a) + " != " + bool_to_string(e->b) + ")";
    }
    return "?";
}

std::string TemporalBound::to_string() const {
    std::ostringstream os;
    os << "{" << rel_text(rel) << " " << (param ? *param : std::to_string(nat)) << "}";
    return os.str();
}

namespace {

std::string temporal_to_string(const TemporalFormula& t) {
    std::ostringstream os;
    os << (t.exists ? "E" : "A");
    using K = TemporalFormula::Kind;
    if (t.kind == K::Diamond) os << "<>";
    if (t.kind == K::Box) os << "[]";
    if ((t.kind == K::Diamond || t.kind == K::Box) && t.bound) os << t.bound->to_string();
    os << " [";
    for (size_t i = 0; i < t.path_vars.size(); ++i) {
        if (i) os << ",";
        os << t.path_vars[i];
    }
    os << "] (";
    if (t.kind == K::Diamond || t.kind == K::Box) {
        os << bool_to_string(t.rhs);
    } else {
        const char* op = t.kind == K::Until ? "U" : t.kind == K::Release ? "R" : "W";
        os << "(" << bool_to_string(t.lhs) << ") " << op;
        if (t.bound) os << t.bound->to_string();
        os << " (" << bool_to_string(t.rhs) << ")";
    }
    os << ")";
    return os.str();
}

}  // namespace

std::string top_to_string(const TopPtr& e) {
    if (!e) return "<null>";
    using K = TopExpr::Kind;
    switch (e->kind) {
        case K::BoolAtom: return bool_to_string(e->atom);
        case K::Temporal: return temporal_to_string(e->temporal);
        case K::ParamCmp:
            return e->param + " " + rel_text(e->rel) + " " + e->lt.to_string();
        case K::Not: return "~(" + top_to_string(e->a) + ")";
        case K::Or: return "(" + top_to_string(e->a) + " | " + top_to_string(e->b) + ")";
        case K::And: return "(" + top_to_string(e->a) + " & " + top_to_string(e->b) + ")";
        case K::Implies: return "(" + top_to_string(e->a) + " -> " + top_to_string(e->b) + ")";
        case K::ExistsParam: return "exists " + e->param + ". (" + top_to_string(e->a) + ")";
        case K::ForallParam: return "forall " + e->param + ". (" + top_to_string(e->a) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// desugaring
// ---------------------------------------------------------------------------

BoolPtr desugar_bool(const BoolPtr& e) {
    using K = BoolExpr::Kind;
    switch (e->kind) {
        case K::True:
        case K::Prop:
        case K::Last:
        case K::CountGe0:
        case K::CountMod: return e;
        case K::Not: return BoolExpr::mk_not(desugar_bool(e->a));
        case K::Or: return BoolExpr::mk_bin(K::Or, desugar_bool(e->a), desugar_bool(e->b));
        case K::And: {
            // a & b  ==  ~(~a | ~b)
            auto a = desugar_bool(e->a);
            auto b = desugar_bool(e->b);
            return BoolExpr::mk_not(
                BoolExpr::mk_bin(K::Or, BoolExpr::mk_not(a), BoolExpr::mk_not(b)));
        }
        case K::Implies: {
            // a -> b  ==  ~a | b
            return BoolExpr::mk_bin(K::Or, BoolExpr::mk_not(desugar_bool(e->a)),
                                    desugar_bool(e->b));
        }
        case K::Equiv: {
            // a = b  ==  (a & b) | (~a & ~b)
            auto both = BoolExpr::mk_bin(K::And, e->a, e->b);
            auto neither =
                BoolExpr::mk_bin(K::And, BoolExpr::mk_not(e->a), BoolExpr::mk_not(e->b));
            return desugar_bool(BoolExpr::mk_bin(K::Or, both, neither));
        }
        case K::Nequiv:
            // a != b  ==  ~(a = b)
            return desugar_bool(BoolExpr::mk_not(BoolExpr::mk_bin(K::Equiv, e->a, e->b)));
    }
    return e;
}

namespace {

BoolPtr bool_false() { return BoolExpr::mk_not(BoolExpr::mk_true()); }

/// Rewrites a temporal formula into (possibly negated) until form; the
/// result is a TopExpr because release introduces a top-level negation.
TopPtr desugar_temporal(const TemporalFormula& t) {
    using K = TemporalFormula::Kind;
    switch (t.kind) {
        case K::Until: {
            TemporalFormula u = t;
            u.lhs = desugar_bool(t.lhs);
            u.rhs = desugar_bool(t.rhs);
            return TopExpr::mk_temporal(std::move(u));
        }
        case K::Release: {
            // E R(a,b) == ~A U(~a,~b);  A R(a,b) == ~E U(~a,~b)
            TemporalFormula u;
            u.exists = !t.exists;
            u.path_vars = t.path_vars;
            u.bound = t.bound;
            u.kind = K::Until;
            u.lhs = BoolExpr::mk_not(t.lhs);
            u.rhs = BoolExpr::mk_not(t.rhs);
            return TopExpr::mk_not(desugar_temporal(u));
        }
        case K::WeakUntil: {
            // Q W(a,b) == Q R(b, a | b)
            TemporalFormula r = t;
            r.kind = K::Release;
            r.lhs = t.rhs;
            r.rhs = BoolExpr::mk_bin(BoolExpr::Kind::Or, t.lhs, t.rhs);
            return desugar_temporal(r);
        }
        case K::Diamond: {
            // Q <> b == Q U(true, b)
            TemporalFormula u = t;
            u.kind = K::Until;
            u.lhs = BoolExpr::mk_true();
            u.rhs = t.rhs;
            return desugar_temporal(u);
        }
        case K::Box: {
            // Q [] b == Q R(false, b)
            TemporalFormula r = t;
            r.kind = K::Release;
            r.lhs = bool_false();
            r.rhs = t.rhs;
            return desugar_temporal(r);
        }
    }
    return TopExpr::mk_temporal(t);
}

}  // namespace

TopPtr desugar(const TopPtr& e) {
    using K = TopExpr::Kind;
    switch (e->kind) {
        case K::BoolAtom: return TopExpr::mk_atom(desugar_bool(e->atom));
        case K::Temporal: return desugar_temporal(e->temporal);
        case K::ParamCmp: return e;
        case K::Not: return TopExpr::mk_not(desugar(e->a));
        case K::Or: return TopExpr::mk_bin(K::Or, desugar(e->a), desugar(e->b));
        case K::And:
            return TopExpr::mk_not(TopExpr::mk_bin(K::Or, TopExpr::mk_not(desugar(e->a)),
                                                   TopExpr::mk_not(desugar(e->b))));
        case K::Implies:
            return TopExpr::mk_bin(K::Or, TopExpr::mk_not(desugar(e->a)), desugar(e->b));
        case K::ExistsParam:
            return TopExpr::mk_quant(K::ExistsParam, e->param, desugar(e->a));
        case K::ForallParam:
            // forall p. x == ~ exists p. ~x
            return TopExpr::mk_not(TopExpr::mk_quant(K::ExistsParam, e->param,
                                                     TopExpr::mk_not(desugar(e->a))));
    }
    return e;
}

// ---------------------------------------------------------------------------
// traversals
// ---------------------------------------------------------------------------

namespace {

void insert_ordered(std::vector<std::string>& out, const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

void bool_path_vars(const BoolPtr& e, std::vector<std::string>& out) {
    if (!e) return;
    switch (e->kind) {
        case BoolExpr::Kind::Prop: insert_ordered(out, e->prop.path); break;
        case BoolExpr::Kind::Last:
            insert_ordered(out, e->last.path1);
            insert_ordered(out, e->last.path2);
            break;
        case BoolExpr::Kind::CountGe0:
            for (auto& t : e->count_ge0.terms) insert_ordered(out, t.path);
            break;
        case BoolExpr::Kind::CountMod:
            for (auto& t : e->count_mod.terms) insert_ordered(out, t.path);
            break;
        default:
            bool_path_vars(e->a, out);
            bool_path_vars(e->b, out);
    }
}

void top_path_vars(const TopPtr& e, std::vector<std::string>& out) {
    if (!e) return;
    switch (e->kind) {
        case TopExpr::Kind::BoolAtom: bool_path_vars(e->atom, out); break;
        case TopExpr::Kind::Temporal:
            for (auto& v : e->temporal.path_vars) insert_ordered(out, v);
            bool_path_vars(e->temporal.lhs, out);
            bool_path_vars(e->temporal.rhs, out);
            break;
        default:
            top_path_vars(e->a, out);
            top_path_vars(e->b, out);
    }
}

void bool_params(const BoolPtr& e, std::set<std::string>& out) {
    if (!e) return;
    switch (e->kind) {
        case BoolExpr::Kind::Last:
            e->last.window.bound.collect_params(out);
            e->last.window.lo.collect_params(out);
            e->last.window.hi.collect_params(out);
            break;
        default:
            bool_params(e->a, out);
            bool_params(e->b, out);
    }
}

}  // namespace

std::vector<std::string> free_path_vars(const TopPtr& e) {
    std::vector<std::string> out;
    top_path_vars(e, out);
    return out;
}

std::set<std::string> collect_formula_params(const TopPtr& e) {
    std::set<std::string> out;
    if (!e) return out;
    switch (e->kind) {
        case TopExpr::Kind::BoolAtom: bool_params(e->atom, out); break;
        case TopExpr::Kind::Temporal:
            if (e->temporal.bound && e->temporal.bound->param)
                out.insert(*e->temporal.bound->param);
            bool_params(e->temporal.lhs, out);
            bool_params(e->temporal.rhs, out);
            break;
        case TopExpr::Kind::ParamCmp: {
            out.insert(e->param);
            e->lt.collect_params(out);
            break;
        }
        case TopExpr::Kind::ExistsParam:
        case TopExpr::Kind::ForallParam: {
            out = collect_formula_params(e->a);
            out.insert(e->param);
            break;
        }
        default: {
            out = collect_formula_params(e->a);
            auto more = collect_formula_params(e->b);
            out.insert(more.begin(), more.end());
        }
    }
    return out;
}

void collect_prop_atoms(const BoolPtr& e, std::vector<PropAtom>& out) {
    if (!e) return;
    if (e->kind == BoolExpr::Kind::Prop) {
        out.push_back(e->prop);
        return;
    }
    collect_prop_atoms(e->a, out);
    collect_prop_atoms(e->b, out);
}

bool contains_forall_until(const TopPtr& e) {
    if (!e) return false;
    if (e->kind == TopExpr::Kind::Temporal)
        return !e->temporal.exists && e->temporal.kind == TemporalFormula::Kind::Until;
    return contains_forall_until(e->a) || contains_forall_until(e->b);
}

}  // namespace hyptctl
