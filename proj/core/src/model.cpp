#include "hyptctl/model.hpp"

#include <algorithm>
#include <sstream>

namespace hyptctl {

const char* rel_text(Rel r) {
    switch (r) {
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Eq: return "=";
        case Rel::Ge: return ">=";
        case Rel::Gt: return ">";
    }
    return "?";
}

Rel rel_flip(Rel r) {
    switch (r) {
        case Rel::Lt: return Rel::Gt;
        case Rel::Le: return Rel::Ge;
        case Rel::Eq: return Rel::Eq;
        case Rel::Ge: return Rel::Le;
        case Rel::Gt: return Rel::Lt;
    }
    return r;
}

LinearTerm LinearTerm::from_constant(long long c) {
    LinearTerm t;
    t.constant = rational_of(c);
    return t;
}

LinearTerm LinearTerm::from_param(const std::string& p, long long coeff) {
    LinearTerm t;
    if (coeff != 0) t.coeffs[p] = coeff;
    return t;
}

bool LinearTerm::is_constant() const {
    for (auto& [p, c] : coeffs)
        if (c != 0) return false;
    return true;
}

bool LinearTerm::nonnegative() const {
    if (constant < 0) return false;
    for (auto& [p, c] : coeffs)
        if (c < 0) return false;
    return true;
}

LinearTerm LinearTerm::negated() const {
    LinearTerm t;
    t.constant = -constant;
    for (auto& [p, c] : coeffs) t.coeffs[p] = -c;
    return t;
}

Rational LinearTerm::evaluate(const std::map<std::string, Rational>& v) const {
    Rational acc = constant;
    for (auto& [p, c] : coeffs) {
        if (c == 0) continue;
        auto it = v.find(p);
        if (it == v.end()) throw IdentifierError{p, "parameter '" + p + "' has no value"};
        acc += rational_of(c) * it->second;
    }
    return acc;
}

void LinearTerm::collect_params(std::set<std::string>& out) const {
    for (auto& [p, c] : coeffs)
        if (c != 0) out.insert(p);
}

std::string LinearTerm::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [p, c] : coeffs) {
        if (c == 0) continue;
        if (first) {
            if (c == -1)
                os << "-";
            else if (c != 1)
                os << c << "*";
        } else {
            os << (c < 0 ? " - " : " + ");
            long long a = c < 0 ? -c : c;
            if (a != 1) os << a << "*";
        }
        os << p;
        first = false;
    }
    if (first) {
        os << rational_to_string(constant);
    } else if (constant != 0) {
        Rational a = constant < 0 ? Rational(-constant) : constant;
        os << (constant < 0 ? " - " : " + ") << rational_to_string(a);
    }
    return os.str();
}

std::string AtomicConstraint::to_string() const {
    std::ostringstream os;
    switch (lhs) {
        case Lhs::Clock: os << clock1; break;
        case Lhs::Diff: os << clock1 << " - " << clock2; break;
        case Lhs::Zero: os << "0"; break;
    }
    os << " " << rel_text(rel) << " " << rhs.to_string();
    return os.str();
}

Guard Guard::conjoin(const Guard& other) const {
    Guard g = *this;
    g.atoms.insert(g.atoms.end(), other.atoms.begin(), other.atoms.end());
    return g;
}

void Guard::collect_clocks(std::set<std::string>& out) const {
    for (auto& a : atoms) {
        if (a.lhs == AtomicConstraint::Lhs::Clock || a.lhs == AtomicConstraint::Lhs::Diff)
            out.insert(a.clock1);
        if (a.lhs == AtomicConstraint::Lhs::Diff) out.insert(a.clock2);
    }
}

void Guard::collect_params(std::set<std::string>& out) const {
    for (auto& a : atoms) a.rhs.collect_params(out);
}

std::string Guard::to_string() const {
    if (atoms.empty()) return "true";
    std::ostringstream os;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) os << " & ";
        os << atoms[i].to_string();
    }
    return os.str();
}

int Pta::location_index(const std::string& nm) const {
    for (size_t i = 0; i < locations.size(); ++i)
        if (locations[i].name == nm) return static_cast<int>(i);
    return -1;
}

std::vector<int> Pta::edges_from(int loc) const {
    std::vector<int> out;
    for (size_t i = 0; i < edges.size(); ++i)
        if (edges[i].source == loc) out.push_back(static_cast<int>(i));
    return out;
}

namespace {

bool compare(const Rational& a, Rel r, const Rational& b) {
    switch (r) {
        case Rel::Lt: return a < b;
        case Rel::Le: return a <= b;
        case Rel::Eq: return a == b;
        case Rel::Ge: return a >= b;
        case Rel::Gt: return a > b;
    }
    return false;
}

Rational clock_value(const std::string& c, const ClockValuation& mu) {
    auto it = mu.find(c);
    if (it == mu.end()) throw IdentifierError{c, "clock '" + c + "' has no value"};
    return it->second;
}

}  // namespace

bool eval_atom(const AtomicConstraint& a, const ClockValuation& mu, const ParamValuation& v) {
    Rational lhs(0);
    switch (a.lhs) {
        case AtomicConstraint::Lhs::Clock: lhs = clock_value(a.clock1, mu); break;
        case AtomicConstraint::Lhs::Diff:
            lhs = clock_value(a.clock1, mu) - clock_value(a.clock2, mu);
            break;
        case AtomicConstraint::Lhs::Zero: break;
    }
    return compare(lhs, a.rel, a.rhs.evaluate(v));
}

bool eval_guard(const Guard& g, const ClockValuation& mu, const ParamValuation& v) {
    for (auto& a : g.atoms)
        if (!eval_atom(a, mu, v)) return false;
    return true;
}

ValuatedPta valuate_pta(const Pta& a, const ParamValuation& v, bool rescale) {
    for (auto& p : a.params)
        if (!v.count(p)) throw IdentifierError{p, "parameter '" + p + "' has no value"};

    // First pass: collect every substituted constant to derive the scale.
    Integer den_lcm = 1;
    auto scan_guard = [&](const Guard& g) {
        for (auto& atom : g.atoms) {
            Integer d = atom.rhs.evaluate(v).get_den();
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
        }
    };
    for (auto& loc : a.locations) scan_guard(loc.invariant);
    for (auto& e : a.edges) scan_guard(e.guard);

    Rational scale = rescale ? Rational(den_lcm) : Rational(1);

    ValuatedPta out;
    out.scale = scale;
    out.pta = a;
    out.pta.params.clear();
    auto rewrite_guard = [&](Guard& g) {
        for (auto& atom : g.atoms) {
            Rational val = atom.rhs.evaluate(v) * scale;
            atom.rhs = LinearTerm{};
            atom.rhs.constant = val;
        }
    };
    for (auto& loc : out.pta.locations) rewrite_guard(loc.invariant);
    for (auto& e : out.pta.edges) rewrite_guard(e.guard);
    return out;
}

std::vector<Diagnostic> validate_pta(const Pta& a) {
    std::vector<Diagnostic> out;
    auto err = [&](const std::string& m) {
        out.push_back({Diagnostic::Severity::Error, m});
    };
    auto warn = [&](const std::string& m) {
        out.push_back({Diagnostic::Severity::Warning, m});
    };

    int n = static_cast<int>(a.locations.size());
    for (int i : a.initial)
        if (i < 0 || i >= n) err("initial location id " + std::to_string(i) + " is out of range");
    for (auto& loc : a.locations)
        for (auto& p : loc.labels)
            if (!a.props.count(p))
                err("location '" + loc.name + "' carries undeclared proposition '" + p + "'");

    auto check_guard = [&](const Guard& g, const std::string& where) {
        for (auto& atom : g.atoms) {
            if (atom.lhs != AtomicConstraint::Lhs::Zero && !a.clocks.count(atom.clock1))
                err(where + " references undeclared clock '" + atom.clock1 + "'");
            if (atom.lhs == AtomicConstraint::Lhs::Diff && !a.clocks.count(atom.clock2))
                err(where + " references undeclared clock '" + atom.clock2 + "'");
            std::set<std::string> ps;
            atom.rhs.collect_params(ps);
            for (auto& p : ps)
                if (!a.params.count(p)) err(where + " references undeclared parameter '" + p + "'");
        }
    };
    for (auto& loc : a.locations) check_guard(loc.invariant, "invariant of '" + loc.name + "'");
    for (size_t i = 0; i < a.edges.size(); ++i) {
        const Edge& e = a.edges[i];
        std::string where = "edge #" + std::to_string(i);
        if (e.source < 0 || e.source >= n) err(where + " has dangling source id");
        if (e.target < 0 || e.target >= n) err(where + " has dangling target id");
        check_guard(e.guard, where);
        for (auto& c : e.resets)
            if (!a.clocks.count(c)) err(where + " resets undeclared clock '" + c + "'");
        if (e.source == e.target && e.guard.is_top() && e.resets.empty())
            warn(where + " is a self-loop with no guard and no reset");
    }
    return out;
}

Integer max_guard_constant(const Pta& a, const ParamValuation& v) {
    Integer best = 0;
    auto scan = [&](const Guard& g) {
        for (auto& atom : g.atoms) {
            Rational val = atom.rhs.evaluate(v);
            Integer num = val.get_num();
            Integer den = val.get_den();
            Integer q;
            mpz_abs(num.get_mpz_t(), num.get_mpz_t());
            mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            if (q > best) best = q;
        }
    };
    for (auto& loc : a.locations) scan(loc.invariant);
    for (auto& e : a.edges) scan(e.guard);
    return best;
}

}  // namespace hyptctl
