#include "hyptctl/polyhedra.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hyptctl {

// ---------------------------------------------------------------------------
// LinIneq
// ---------------------------------------------------------------------------

LinIneq LinIneq::make(const std::map<std::string, Rational>& coeffs, const Rational& constant,
                      Rel rel) {
    // Scale to integers by the lcm of all denominators.
    Integer lcm = constant.get_den();
    for (auto& [x, q] : coeffs) {
        Integer d = q.get_den();
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
    }
    auto scaled = [&](const Rational& q) -> Integer {
        Rational r = q * Rational(lcm);
        return r.get_num();
    };
    LinIneq c;
    bool negate = (rel == Rel::Ge || rel == Rel::Gt);
    for (auto& [x, q] : coeffs) {
        Integer a = scaled(q);
        if (a != 0) c.coeffs[x] = negate ? Integer(-a) : a;
    }
    Integer k = scaled(constant);
    c.constant = negate ? Integer(-k) : k;
    switch (rel) {
        case Rel::Lt: c.rel = R::Lt; break;
        case Rel::Le: c.rel = R::Le; break;
        case Rel::Eq: c.rel = R::Eq; break;
        case Rel::Ge: c.rel = R::Le; break;
        case Rel::Gt: c.rel = R::Lt; break;
    }
    c.gcd_normalize();
    return c;
}

LinIneq LinIneq::of_atom(const AtomicConstraint& atom) {
    std::map<std::string, Rational> coeffs;
    switch (atom.lhs) {
        case AtomicConstraint::Lhs::Clock: coeffs[atom.clock1] += 1; break;
        case AtomicConstraint::Lhs::Diff:
            coeffs[atom.clock1] += 1;
            coeffs[atom.clock2] -= 1;
            break;
        case AtomicConstraint::Lhs::Zero: break;
    }
    // clockpart REL rhs  <=>  clockpart - rhs REL 0
    for (auto& [p, a] : atom.rhs.coeffs) coeffs[p] -= rational_of(a);
    return make(coeffs, -atom.rhs.constant, atom.rel);
}

void LinIneq::gcd_normalize() {
    for (auto it = coeffs.begin(); it != coeffs.end();)
        it = (it->second == 0) ? coeffs.erase(it) : std::next(it);
    Integer g = 0;
    for (auto& [x, a] : coeffs) {
        Integer abs_a;
        mpz_abs(abs_a.get_mpz_t(), a.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), abs_a.get_mpz_t());
    }
    Integer abs_c;
    mpz_abs(abs_c.get_mpz_t(), constant.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), abs_c.get_mpz_t());
    if (g > 1) {
        for (auto& [x, a] : coeffs) a /= g;
        constant /= g;
    }
    if (rel == R::Eq && !coeffs.empty() && coeffs.begin()->second < 0) {
        for (auto& [x, a] : coeffs) a = -a;
        constant = -constant;
    }
}

LinIneq LinIneq::negated_le() const {
    // not(t < 0)  is  -t <= 0 ; not(t <= 0)  is  -t < 0. Equalities must be
    // split by the caller.
    LinIneq c;
    for (auto& [x, a] : coeffs) c.coeffs[x] = -a;
    c.constant = -constant;
    c.rel = (rel == R::Lt) ? R::Le : R::Lt;
    return c;
}

bool LinIneq::is_constant() const { return coeffs.empty(); }

bool LinIneq::constant_truth() const {
    switch (rel) {
        case R::Lt: return constant < 0;
        case R::Le: return constant <= 0;
        case R::Eq: return constant == 0;
    }
    return false;
}

bool LinIneq::evaluate(const std::map<std::string, Rational>& point) const {
    Rational acc(constant);
    for (auto& [x, a] : coeffs) {
        auto it = point.find(x);
        if (it == point.end()) throw IdentifierError{x, "variable '" + x + "' has no value"};
        acc += Rational(a) * it->second;
    }
    switch (rel) {
        case R::Lt: return acc < 0;
        case R::Le: return acc <= 0;
        case R::Eq: return acc == 0;
    }
    return false;
}

std::string LinIneq::to_string() const {
    // Positive-coefficient terms stay left; negated terms and the constant
    // move right, so "2*p1 - p2 > 0" prints as "2*p1 > p2".
    std::ostringstream lhs, rhs;
    bool lfirst = true, rfirst = true;
    auto emit = [](std::ostringstream& os, bool& first, const Integer& a, const std::string& x) {
        if (!first) os << " + ";
        if (a != 1) os << a.get_str() << "*";
        os << x;
        first = false;
    };
    for (auto& [x, a] : coeffs) {
        if (a > 0)
            emit(lhs, lfirst, a, x);
        else
            emit(rhs, rfirst, -a, x);
    }
    Integer c = -constant;  // sum coeff*x REL -constant
    if (c > 0 || rfirst) {
        if (!rfirst && c != 0) rhs << " + ";
        if (c != 0 || rfirst) rhs << c.get_str();
        rfirst = false;
    } else if (c < 0) {
        Integer mc = -c;
        if (!lfirst)
            lhs << " + " << mc.get_str();
        else
            lhs << mc.get_str();
        lfirst = false;
    }
    if (lfirst) lhs << "0";
    const char* op = rel == R::Lt ? " < " : rel == R::Le ? " <= " : " = ";
    return lhs.str() + op + rhs.str();
}

bool LinIneq::operator==(const LinIneq& o) const {
    return rel == o.rel && constant == o.constant && coeffs == o.coeffs;
}

bool LinIneq::operator<(const LinIneq& o) const {
    if (rel != o.rel) return rel < o.rel;
    if (coeffs.size() != o.coeffs.size()) return coeffs.size() < o.coeffs.size();
    auto it = coeffs.begin();
    auto jt = o.coeffs.begin();
    for (; it != coeffs.end(); ++it, ++jt) {
        if (it->first != jt->first) return it->first < jt->first;
        int c = cmp(it->second, jt->second);
        if (c != 0) return c < 0;
    }
    return cmp(constant, o.constant) < 0;
}

// ---------------------------------------------------------------------------
// ConvexPoly
// ---------------------------------------------------------------------------

ConvexPoly::ConvexPoly(std::vector<LinIneq> cons) {
    for (auto& c : cons) add(std::move(c));
}

void ConvexPoly::add(LinIneq c) {
    if (contradictory_) return;
    empty_cache_.reset();
    c.gcd_normalize();
    if (c.is_constant()) {
        if (!c.constant_truth()) contradictory_ = true;
        return;  // tautologies are dropped either way
    }
    for (auto& have : cons_)
        if (have == c) return;
    cons_.push_back(std::move(c));
}

void ConvexPoly::add_atom(const AtomicConstraint& atom) { add(LinIneq::of_atom(atom)); }

ConvexPoly ConvexPoly::meet(const ConvexPoly& other) const {
    ConvexPoly out = *this;
    if (other.contradictory_) out.contradictory_ = true;
    for (auto& c : other.cons_) out.add(c);
    out.dominance_prune();
    return out;
}

void ConvexPoly::dominance_prune() {
    if (contradictory_) return;
    // Same-lhs constraints: keep the tightest upper bound; equalities
    // absorb matching inequalities when consistent.
    std::vector<LinIneq> kept;
    for (auto& c : cons_) {
        bool dominated = false;
        for (auto& k : kept) {
            if (!k.same_lhs(c)) continue;
            if (k.rel == LinIneq::R::Eq || c.rel == LinIneq::R::Eq) continue;
            // both: t + k1 REL 0 vs t + k2 REL 0  -- larger constant is tighter
            if (k.constant > c.constant ||
                (k.constant == c.constant &&
                 (k.rel == LinIneq::R::Lt || c.rel == LinIneq::R::Le))) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        std::erase_if(kept, [&](const LinIneq& k) {
            return k.same_lhs(c) && k.rel != LinIneq::R::Eq && c.rel != LinIneq::R::Eq &&
                   (c.constant > k.constant ||
                    (c.constant == k.constant && c.rel == LinIneq::R::Lt));
        });
        kept.push_back(c);
    }
    cons_ = std::move(kept);
}

namespace {

/// One Fourier-Motzkin step; equalities must already be expanded.
std::vector<LinIneq> fm_step(const std::vector<LinIneq>& cons, const std::string& var,
                             bool& contradiction) {
    std::vector<const LinIneq*> uppers, lowers;
    std::vector<LinIneq> rest;
    for (auto& c : cons) {
        auto it = c.coeffs.find(var);
        if (it == c.coeffs.end() || it->second == 0) {
            rest.push_back(c);
        } else if (it->second > 0) {
            uppers.push_back(&c);
        } else {
            lowers.push_back(&c);
        }
    }
    for (auto* u : uppers) {
        Integer a = u->coeffs.at(var);
        for (auto* l : lowers) {
            Integer b = -l->coeffs.at(var);  // b > 0
            LinIneq combo;
            combo.rel = (u->rel == LinIneq::R::Lt || l->rel == LinIneq::R::Lt) ? LinIneq::R::Lt
                                                                               : LinIneq::R::Le;
            // b*u + a*l eliminates var exactly.
            for (auto& [x, c] : u->coeffs)
                if (x != var) combo.coeffs[x] += b * c;
            for (auto& [x, c] : l->coeffs)
                if (x != var) combo.coeffs[x] += a * c;
            combo.constant = b * u->constant + a * l->constant;
            combo.gcd_normalize();
            if (combo.is_constant()) {
                if (!combo.constant_truth()) {
                    contradiction = true;
                    return {};
                }
                continue;
            }
            rest.push_back(std::move(combo));
        }
    }
    std::sort(rest.begin(), rest.end());
    rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
    return rest;
}

/// a*c - b*eq (sign-adjusted) cancels `var`; multiplying c by a positive
/// factor keeps its relation.
LinIneq combine_with_equality(const LinIneq& c, const LinIneq& eq, const std::string& var) {
    Integer a = eq.coeffs.at(var);
    Integer b = c.coeffs.at(var);
    Integer fc = a, fe = -b;  // fc*c + fe*eq
    if (a < 0) {
        fc = -a;
        fe = b;
    }
    LinIneq out;
    out.rel = c.rel;
    for (auto& [x, v] : c.coeffs) out.coeffs[x] += fc * v;
    for (auto& [x, v] : eq.coeffs) out.coeffs[x] += fe * v;
    out.constant = fc * c.constant + fe * eq.constant;
    out.gcd_normalize();
    return out;
}

/// Substitutes away equality-bound variables. Sound for emptiness (each
/// dropped equality determines its variable uniquely). Returns true when
/// a constant contradiction surfaced.
bool gauss_for_emptiness(std::vector<LinIneq>& work) {
    for (;;) {
        int eq_idx = -1;
        std::string var;
        for (size_t i = 0; i < work.size(); ++i) {
            if (work[i].rel == LinIneq::R::Eq && !work[i].coeffs.empty()) {
                eq_idx = static_cast<int>(i);
                var = work[i].coeffs.begin()->first;
                break;
            }
        }
        if (eq_idx < 0) return false;
        LinIneq eq = work[eq_idx];
        work.erase(work.begin() + eq_idx);
        std::vector<LinIneq> next;
        next.reserve(work.size());
        for (auto& c : work) {
            auto it = c.coeffs.find(var);
            if (it == c.coeffs.end() || it->second == 0) {
                next.push_back(c);
                continue;
            }
            LinIneq r = combine_with_equality(c, eq, var);
            if (r.is_constant()) {
                if (!r.constant_truth()) return true;
                continue;
            }
            next.push_back(std::move(r));
        }
        work = std::move(next);
    }
}

std::vector<LinIneq> expand_equalities(const std::vector<LinIneq>& cons) {
    std::vector<LinIneq> out;
    out.reserve(cons.size());
    for (auto& c : cons) {
        if (c.rel == LinIneq::R::Eq) {
            LinIneq le = c;
            le.rel = LinIneq::R::Le;
            LinIneq ge;
            for (auto& [x, a] : c.coeffs) ge.coeffs[x] = -a;
            ge.constant = -c.constant;
            ge.rel = LinIneq::R::Le;
            out.push_back(std::move(le));
            out.push_back(std::move(ge));
        } else {
            out.push_back(c);
        }
    }
    return out;
}

void dominance_vec(std::vector<LinIneq>& cons) {
    std::vector<LinIneq> kept;
    for (auto& c : cons) {
        bool dominated = false;
        for (auto& k : kept) {
            if (!k.same_lhs(c)) continue;
            if (k.constant > c.constant ||
                (k.constant == c.constant &&
                 (k.rel == LinIneq::R::Lt || c.rel == LinIneq::R::Le))) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        std::erase_if(kept, [&](const LinIneq& k) {
            return k.same_lhs(c) && (c.constant > k.constant ||
                                     (c.constant == k.constant && c.rel == LinIneq::R::Lt));
        });
        kept.push_back(c);
    }
    cons = std::move(kept);
}

}  // namespace

bool ConvexPoly::is_empty() const {
    if (contradictory_) return true;
    if (empty_cache_) return *empty_cache_;
    auto compute = [&]() -> bool {
        if (cons_.empty()) return false;
        std::vector<LinIneq> work = cons_;
        if (gauss_for_emptiness(work)) return true;
        if (work.empty()) return false;
        dominance_vec(work);
        std::set<std::string> vars;
        for (auto& c : work)
            for (auto& [x, a] : c.coeffs) vars.insert(x);
        bool contradiction = false;
        for (auto& v : vars) {
            work = fm_step(work, v, contradiction);
            if (contradiction) return true;
            dominance_vec(work);
            if (work.empty()) return false;
        }
        return false;
    };
    empty_cache_ = compute();
    return *empty_cache_;
}

ConvexPoly ConvexPoly::eliminate(const std::string& var) const {
    if (contradictory_) return *this;
    bool mentions = false;
    for (auto& c : cons_)
        if (c.coeffs.count(var)) mentions = true;
    if (!mentions) return *this;
    ConvexPoly out;
    // An equality mentioning the variable gives the projection directly by
    // substitution; no Fourier-Motzkin pairs needed.
    for (size_t i = 0; i < cons_.size(); ++i) {
        if (cons_[i].rel != LinIneq::R::Eq) continue;
        auto it = cons_[i].coeffs.find(var);
        if (it == cons_[i].coeffs.end() || it->second == 0) continue;
        const LinIneq& eq = cons_[i];
        for (size_t j = 0; j < cons_.size(); ++j) {
            if (j == i) continue;
            auto jt = cons_[j].coeffs.find(var);
            if (jt == cons_[j].coeffs.end() || jt->second == 0) {
                out.add(cons_[j]);
            } else {
                out.add(combine_with_equality(cons_[j], eq, var));
            }
        }
        return out;
    }
    std::vector<LinIneq> work = expand_equalities(cons_);
    bool contradiction = false;
    work = fm_step(work, var, contradiction);
    if (contradiction) {
        out.contradictory_ = true;
        return out;
    }
    dominance_vec(work);
    for (auto& c : work) out.add(std::move(c));
    return out;
}

ConvexPoly ConvexPoly::eliminate_all(const std::set<std::string>& vars) const {
    ConvexPoly out = *this;
    for (auto& v : vars) out = out.eliminate(v);
    return out;
}

bool ConvexPoly::entails(const LinIneq& c) const {
    if (contradictory_) return true;
    if (c.rel == LinIneq::R::Eq) {
        LinIneq lt = c;
        lt.rel = LinIneq::R::Le;
        LinIneq gt;
        for (auto& [x, a] : c.coeffs) gt.coeffs[x] = -a;
        gt.constant = -c.constant;
        gt.rel = LinIneq::R::Le;
        return entails(lt) && entails(gt);
    }
    // fast path: an identical or single-constraint-dominating member
    for (auto& have : cons_) {
        if (have == c) return true;
        if (have.same_lhs(c) && have.rel != LinIneq::R::Eq &&
            (have.constant > c.constant ||
             (have.constant == c.constant &&
              (have.rel == LinIneq::R::Lt || c.rel == LinIneq::R::Le))))
            return true;
    }
    ConvexPoly test = *this;
    test.add(c.negated_le());
    return test.is_empty();
}

bool ConvexPoly::included_in(const ConvexPoly& other) const {
    if (is_empty()) return true;
    for (auto& c : other.cons_)
        if (!entails(c)) return false;
    return !other.contradictory_;
}

void ConvexPoly::reduce_strong() {
    if (contradictory_ || cons_.size() <= 1) return;
    dominance_prune();
    for (size_t i = 0; i < cons_.size();) {
        LinIneq c = cons_[i];
        std::vector<LinIneq> rest;
        rest.reserve(cons_.size() - 1);
        for (size_t j = 0; j < cons_.size(); ++j)
            if (j != i) rest.push_back(cons_[j]);
        ConvexPoly without;
        without.cons_ = std::move(rest);
        if (without.entails(c)) {
            cons_.erase(cons_.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
}

bool ConvexPoly::evaluate(const std::map<std::string, Rational>& point) const {
    if (contradictory_) return false;
    for (auto& c : cons_)
        if (!c.evaluate(point)) return false;
    return true;
}

void ConvexPoly::collect_vars(std::set<std::string>& out) const {
    for (auto& c : cons_)
        for (auto& [x, a] : c.coeffs) out.insert(x);
}

std::optional<std::map<std::string, Rational>> ConvexPoly::sample_point() const {
    if (is_empty()) return std::nullopt;
    std::set<std::string> vars;
    collect_vars(vars);
    // Record the systems seen while eliminating, then back-substitute.
    std::vector<std::pair<std::string, std::vector<LinIneq>>> stages;
    std::vector<LinIneq> work = expand_equalities(cons_);
    for (auto& v : vars) {
        stages.emplace_back(v, work);
        bool contradiction = false;
        work = fm_step(work, v, contradiction);
        if (contradiction) return std::nullopt;  // unreachable: checked above
        dominance_vec(work);
    }
    std::map<std::string, Rational> point;
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        const std::string& v = it->first;
        std::optional<Rational> lo, hi;
        bool lo_strict = false, hi_strict = false;
        for (auto& c : it->second) {
            auto cf = c.coeffs.find(v);
            if (cf == c.coeffs.end()) continue;
            // a*v + (rest) REL 0 with all other vars known.
            Rational rest(c.constant);
            bool known = true;
            for (auto& [x, a] : c.coeffs) {
                if (x == v) continue;
                auto pv = point.find(x);
                if (pv == point.end()) {
                    known = false;
                    break;
                }
                rest += Rational(a) * pv->second;
            }
            if (!known) continue;
            Rational bound = -rest / Rational(cf->second);
            if (cf->second > 0) {  // v <= bound (or <)
                if (!hi || bound < *hi || (bound == *hi && c.rel == LinIneq::R::Lt)) {
                    hi = bound;
                    hi_strict = c.rel == LinIneq::R::Lt;
                }
            } else {
                if (!lo || bound > *lo || (bound == *lo && c.rel == LinIneq::R::Lt)) {
                    lo = bound;
                    lo_strict = c.rel == LinIneq::R::Lt;
                }
            }
        }
        Rational val;
        if (lo && hi) {
            val = (*lo + *hi) / 2;
            if (!lo_strict && val < *lo) val = *lo;
            if (*lo == *hi) val = *lo;
        } else if (lo) {
            val = lo_strict ? *lo + 1 : *lo;
        } else if (hi) {
            val = hi_strict ? *hi - 1 : *hi;
        } else {
            val = 0;
        }
        point[v] = val;
    }
    return point;
}

void ConvexPoly::canonicalize() {
    if (contradictory_) {
        cons_.clear();
        return;
    }
    dominance_prune();
    // Merge t <= 0 with -t <= 0 into t = 0.
    for (size_t i = 0; i < cons_.size(); ++i) {
        if (cons_[i].rel != LinIneq::R::Le) continue;
        for (size_t j = i + 1; j < cons_.size(); ++j) {
            if (cons_[j].rel != LinIneq::R::Le) continue;
            LinIneq neg = cons_[j].negated_le();
            neg.rel = cons_[i].rel;
            if (neg.coeffs == cons_[i].coeffs && neg.constant == cons_[i].constant) {
                LinIneq eq = cons_[i];
                eq.rel = LinIneq::R::Eq;
                eq.gcd_normalize();
                cons_[i] = eq;
                cons_.erase(cons_.begin() + static_cast<long>(j));
                break;
            }
        }
    }
    std::sort(cons_.begin(), cons_.end());
    cons_.erase(std::unique(cons_.begin(), cons_.end()), cons_.end());
}

std::string ConvexPoly::to_string() const {
    if (contradictory_) return "false";
    if (cons_.empty()) return "true";
    std::ostringstream os;
    for (size_t i = 0; i < cons_.size(); ++i) {
        if (i) os << " & ";
        os << cons_[i].to_string();
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// subtraction
// ---------------------------------------------------------------------------

std::vector<ConvexPoly> poly_subtract(const ConvexPoly& d, const ConvexPoly& s) {
    if (s.trivially_empty()) return {d};
    std::vector<ConvexPoly> out;
    ConvexPoly prefix = d;  // d and the first j-1 constraints of s
    for (auto& c : s.constraints()) {
        std::vector<LinIneq> negs;
        if (c.rel == LinIneq::R::Eq) {
            LinIneq lt = c;  // t < 0
            lt.rel = LinIneq::R::Lt;
            LinIneq gt;
            for (auto& [x, a] : c.coeffs) gt.coeffs[x] = -a;
            gt.constant = -c.constant;
            gt.rel = LinIneq::R::Lt;
            negs = {lt, gt};
        } else {
            negs = {c.negated_le()};
        }
        for (auto& n : negs) {
            ConvexPoly piece = prefix;
            piece.add(n);
            if (!piece.is_empty()) out.push_back(std::move(piece));
        }
        prefix.add(c);
        if (prefix.is_empty()) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// ParamSet
// ---------------------------------------------------------------------------

ParamSet ParamSet::empty(std::vector<std::string> params) {
    ParamSet s;
    s.params_ = std::move(params);
    std::sort(s.params_.begin(), s.params_.end());
    return s;
}

ParamSet ParamSet::full(std::vector<std::string> params) {
    ParamSet s = empty(std::move(params));
    s.universe_ = true;
    return s;
}

ParamSet ParamSet::of_polys(std::vector<std::string> params, std::vector<ConvexPoly> polys) {
    ParamSet s = empty(std::move(params));
    s.polys_ = std::move(polys);
    return s;
}

ConvexPoly ParamSet::orthant() const {
    ConvexPoly p;
    for (auto& x : params_) {
        LinIneq c;
        c.coeffs[x] = -1;  // -x <= 0, i.e. x >= 0
        c.rel = LinIneq::R::Le;
        p.add(std::move(c));
    }
    return p;
}

std::vector<ConvexPoly> ParamSet::as_polys() const {
    if (universe_) return {orthant()};
    return polys_;
}

bool ParamSet::is_empty() const {
    if (universe_) return false;
    ConvexPoly orth = orthant();
    for (auto& p : polys_)
        if (!p.meet(orth).is_empty()) return false;
    return true;
}

bool ParamSet::member(const ParamValuation& v) const {
    for (auto& x : params_) {
        auto it = v.find(x);
        if (it == v.end() || it->second < 0) return false;
    }
    if (universe_) return true;
    for (auto& p : polys_)
        if (p.evaluate(v)) return true;
    return false;
}

ParamSet ParamSet::unite(const ParamSet& other) const {
    if (universe_ || other.universe_) return full(params_);
    ParamSet out = *this;
    out.polys_.insert(out.polys_.end(), other.polys_.begin(), other.polys_.end());
    return out.canonical();
}

ParamSet ParamSet::intersect(const ParamSet& other) const {
    if (universe_) return other;
    if (other.universe_) return *this;
    std::vector<ConvexPoly> out;
    for (auto& a : polys_)
        for (auto& b : other.polys_) {
            ConvexPoly m = a.meet(b);
            if (!m.is_empty()) out.push_back(std::move(m));
        }
    return of_polys(params_, std::move(out)).canonical();
}

ParamSet ParamSet::complement() const {
    if (universe_) return empty(params_);
    std::vector<ConvexPoly> diff = {orthant()};
    for (auto& s : polys_) {
        std::vector<ConvexPoly> next;
        for (auto& d : diff) {
            auto pieces = poly_subtract(d, s);
            next.insert(next.end(), pieces.begin(), pieces.end());
        }
        diff = std::move(next);
        if (diff.empty()) break;
    }
    return of_polys(params_, std::move(diff)).canonical();
}

bool ParamSet::includes(const ParamSet& other) const {
    if (universe_) return true;
    ConvexPoly orth = orthant();
    std::vector<ConvexPoly> pending;
    for (auto& t : other.as_polys()) {
        ConvexPoly start = t.meet(orth);
        if (!start.is_empty()) pending.push_back(std::move(start));
    }
    for (auto& s : polys_) {
        std::vector<ConvexPoly> next;
        for (auto& d : pending) {
            auto pieces = poly_subtract(d, s);
            next.insert(next.end(), pieces.begin(), pieces.end());
        }
        pending = std::move(next);
        if (pending.empty()) return true;
    }
    return pending.empty();
}

bool ParamSet::sem_equal(const ParamSet& other) const {
    return includes(other) && other.includes(*this);
}

ParamSet ParamSet::project_out(const std::string& p) const {
    if (universe_) return *this;
    std::vector<ConvexPoly> out;
    ConvexPoly orth = orthant();
    for (auto& poly : polys_) {
        ConvexPoly bounded = poly.meet(orth);
        if (bounded.is_empty()) continue;
        out.push_back(bounded.eliminate(p));
    }
    return of_polys(params_, std::move(out)).canonical();
}

std::optional<ParamValuation> ParamSet::witness() const {
    ParamValuation v;
    if (universe_) {
        for (auto& x : params_) v[x] = 0;
        return v;
    }
    ConvexPoly orth = orthant();
    for (auto& p : polys_) {
        auto pt = p.meet(orth).sample_point();
        if (!pt) continue;
        for (auto& x : params_)
            if (!pt->count(x)) (*pt)[x] = 0;
        return *pt;
    }
    return std::nullopt;
}

ParamSet ParamSet::canonical() const {
    if (universe_) return *this;
    ParamSet out = empty(params_);
    ConvexPoly orth = orthant();
    std::vector<std::pair<std::string, ConvexPoly>> keyed;
    for (auto& p : polys_) {
        if (p.meet(orth).is_empty()) continue;
        ConvexPoly q = p;
        q.canonicalize();
        keyed.emplace_back(q.to_string(), std::move(q));
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                keyed.end());
    // absorption: a member included in another member is redundant
    std::vector<bool> dropped(keyed.size(), false);
    for (size_t i = 0; i < keyed.size(); ++i) {
        for (size_t j = 0; j < keyed.size() && !dropped[i]; ++j) {
            if (i == j || dropped[j]) continue;
            if (keyed[i].second.meet(orth).included_in(keyed[j].second)) dropped[i] = true;
        }
    }
    for (size_t i = 0; i < keyed.size(); ++i)
        if (!dropped[i]) out.polys_.push_back(std::move(keyed[i].second));
    return out;
}

std::string ParamSet::to_text() const {
    if (universe_) return "UNIVERSE";
    ParamSet c = canonical();
    if (c.polys_.empty()) return "EMPTY";
    std::ostringstream os;
    os << "UNION { ";
    for (size_t i = 0; i < c.polys_.size(); ++i) {
        if (i) os << " , ";
        os << c.polys_[i].to_string();
    }
    os << " }";
    return os.str();
}

std::string ParamSet::to_json() const {
    nlohmann::json j;
    j["params"] = params_;
    j["universe"] = universe_;
    j["polys"] = nlohmann::json::array();
    if (!universe_) {
        ParamSet c = canonical();
        for (auto& p : c.polys_) {
            nlohmann::json jp = nlohmann::json::array();
            for (auto& con : p.constraints()) {
                nlohmann::json jc;
                jc["rel"] = con.rel == LinIneq::R::Lt   ? "<"
                            : con.rel == LinIneq::R::Le ? "<="
                                                        : "=";
                jc["const"] = con.constant.get_str();
                nlohmann::json coeffs = nlohmann::json::object();
                for (auto& [x, a] : con.coeffs) coeffs[x] = a.get_str();
                jc["coeffs"] = coeffs;
                jp.push_back(jc);
            }
            j["polys"].push_back(jp);
        }
    }
    return j.dump(2);
}

}  // namespace hyptctl
