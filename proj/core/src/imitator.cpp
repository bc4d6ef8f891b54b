#include "hyptctl/imitator.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace hyptctl {

namespace {

constexpr const char* kDurClock = "__dur";

/// The solver accepts [a-zA-Z][a-zA-Z0-9_]* identifiers; tuple location
/// names and renamed propositions are mangled deterministically.
class Mangler {
public:
    std::string of(const std::string& raw) {
        auto it = map_.find(raw);
        if (it != map_.end()) return it->second;
        std::string m;
        for (char c : raw) {
            if (std::isalnum(static_cast<unsigned char>(c))) {
                m.push_back(c);
            } else if (m.empty() || m.back() != '_') {
                m.push_back('_');
            }
        }
        while (!m.empty() && m.front() == '_') m.erase(m.begin());
        while (!m.empty() && m.back() == '_') m.pop_back();
        if (m.empty() || std::isdigit(static_cast<unsigned char>(m[0]))) m = "x" + m;
        std::string base = m;
        int k = 2;
        while (used_.count(m)) m = base + "_" + std::to_string(k++);
        used_.insert(m);
        map_[raw] = m;
        return m;
    }

private:
    std::map<std::string, std::string> map_;
    std::set<std::string> used_;
};

std::string term_text(const LinearTerm& t, Mangler& names) {
    std::ostringstream os;
    bool first = true;
    for (auto& [p, c] : t.coeffs) {
        if (c == 0) continue;
        if (!first) os << " + ";
        if (c != 1) os << c << " * ";
        os << names.of(p);
        first = false;
    }
    if (first) {
        os << rational_to_string(t.constant);
    } else if (t.constant != 0) {
        os << " + " << rational_to_string(t.constant);
    }
    return os.str();
}

std::string rel_imitator(Rel r) { return rel_text(r); }

std::string guard_text(const Guard& g, Mangler& names) {
    if (g.atoms.empty()) return "True";
    std::ostringstream os;
    for (size_t i = 0; i < g.atoms.size(); ++i) {
        const auto& atom = g.atoms[i];
        if (i) os << " & ";
        switch (atom.lhs) {
            case AtomicConstraint::Lhs::Clock: os << names.of(atom.clock1); break;
            case AtomicConstraint::Lhs::Diff:
                os << names.of(atom.clock1) << " - " << names.of(atom.clock2);
                break;
            case AtomicConstraint::Lhs::Zero: os << "0"; break;
        }
        os << " " << rel_imitator(atom.rel) << " " << term_text(atom.rhs, names);
    }
    return os.str();
}

std::string predicate_text(const Pta& a, const std::set<int>& locs, const std::string& aut,
                           Mangler& names, const std::string& extra) {
    if (locs.empty()) return "False";
    std::ostringstream os;
    bool all = locs.size() == a.locations.size();
    if (all && extra.empty()) return "True";
    os << "(";
    if (all) {
        os << "True";
    } else {
        bool first = true;
        for (int l : locs) {
            if (!first) os << " | ";
            os << "loc[" << aut << "] = " << names.of(a.locations[l].name);
            first = false;
        }
    }
    os << ")";
    if (!extra.empty()) os << " & " << extra;
    return os.str();
}

}  // namespace

ImitatorFiles render_imitator(const ReductionArtifacts& artifacts) {
    const Pta& a = artifacts.product;
    const TemporalFormula& node = artifacts.stripped;
    ImitatorFiles out;
    Mangler names;
    std::string aut = names.of(a.name.empty() ? std::string("product") : a.name);

    bool with_dur = node.bound.has_value();
    std::vector<std::string> clocks;
    for (auto& c : a.clocks) clocks.push_back(names.of(c));
    if (with_dur) clocks.push_back(names.of(kDurClock));
    std::vector<std::string> params;
    for (auto& p : a.params) params.push_back(names.of(p));
    if (with_dur && node.bound->param && !a.params.count(*node.bound->param))
        params.push_back(names.of(*node.bound->param));

    std::ostringstream m;
    m << "(* generated by hyptctl: reduced product *)\n";
    for (auto& [prop, pred] : artifacts.ext_legend) m << "(* " << prop << " = " << pred << " *)\n";
    m << "var\n";
    if (!clocks.empty()) {
        m << "\t";
        for (size_t i = 0; i < clocks.size(); ++i) m << (i ? ", " : "") << clocks[i];
        m << " : clock;\n";
    }
    if (!params.empty()) {
        m << "\t";
        for (size_t i = 0; i < params.size(); ++i) m << (i ? ", " : "") << params[i];
        m << " : parameter;\n";
    }
    m << "\nautomaton " << aut << "\n";
    m << "synclabs: ;\n";

    bool gadget = a.initial.size() > 1;
    std::string entry_name = gadget ? names.of("__init") : "";
    if (gadget) {
        m << "urgent loc " << entry_name << ": invariant True\n";
        for (int init : a.initial)
            m << "\twhen True goto " << names.of(a.locations[init].name) << ";\n";
    }
    for (size_t i = 0; i < a.locations.size(); ++i) {
        const Location& loc = a.locations[i];
        m << "loc " << names.of(loc.name) << ": invariant " << guard_text(loc.invariant, names)
          << "\n";
        for (auto& e : a.edges) {
            if (e.source != static_cast<int>(i)) continue;
            m << "\twhen " << guard_text(e.guard, names);
            if (!e.resets.empty()) {
                m << " do {";
                bool first = true;
                for (auto& c : e.resets) {
                    if (!first) m << ", ";
                    m << names.of(c) << " := 0";
                    first = false;
                }
                m << "}";
            }
            m << " goto " << names.of(a.locations[e.target].name) << ";\n";
        }
    }
    m << "end (* " << aut << " *)\n\n";

    m << "init := {\n";
    m << "\tdiscrete =\n\t\tloc[" << aut << "] := ";
    if (gadget)
        m << entry_name;
    else if (!a.initial.empty())
        m << names.of(a.locations[*a.initial.begin()].name);
    else
        m << names.of(a.locations.empty() ? std::string("missing") : a.locations[0].name);
    m << "\n\t;\n";
    m << "\tcontinuous =\n";
    for (auto& c : clocks) m << "\t\t& " << c << " = 0\n";
    for (auto& p : params) m << "\t\t& " << p << " >= 0\n";
    m << "\t;\n}\n\nend\n";
    out.model_text = m.str();

    // property: EF when the left operand covers every location, EU else;
    // universal operators export as AF/AU with a notice.
    const std::set<int>& phi1 = artifacts.phi1_locs;
    std::string extra;
    if (with_dur) {
        std::ostringstream b;
        b << names.of(kDurClock) << " " << rel_imitator(node.bound->rel) << " ";
        if (node.bound->param)
            b << names.of(*node.bound->param);
        else
            b << node.bound->nat;
        extra = b.str();
    }
    bool ef_shape = phi1.size() == a.locations.size();
    std::string phi2_pred = predicate_text(a, artifacts.phi2_locs, aut, names, extra);
    std::ostringstream p;
    p << "(* generated by hyptctl: synthesis property *)\n";
    if (!node.exists) {
        out.notes.push_back(
            "universal until is exported only; the built-in backend cannot check it");
        p << "(* note: universal property; run the external solver *)\n";
        if (ef_shape)
            p << "property := #synth AF(" << phi2_pred << ");\n";
        else
            p << "property := #synth AU(" << predicate_text(a, phi1, aut, names, "") << ", "
              << phi2_pred << ");\n";
    } else if (ef_shape) {
        p << "property := #synth EF(" << phi2_pred << ");\n";
    } else {
        if (gadget) p << "(* the dispatch location is transparent to the left operand *)\n";
        p << "property := #synth EU(" << predicate_text(a, phi1, aut, names, "") << ", "
          << phi2_pred << ");\n";
    }
    out.property_text = p.str();
    return out;
}

std::pair<std::string, std::string> export_imitator(const ReductionArtifacts& artifacts,
                                                    const std::string& outdir,
                                                    const std::string& base) {
    ImitatorFiles files = render_imitator(artifacts);
    std::filesystem::create_directories(outdir);
    std::string mp = (std::filesystem::path(outdir) / (base + ".imi")).string();
    std::string pp = (std::filesystem::path(outdir) / (base + ".imiprop")).string();
    std::ofstream mf(mp);
    if (!mf) throw std::runtime_error("cannot write " + mp);
    mf << files.model_text;
    std::ofstream pf(pp);
    if (!pf) throw std::runtime_error("cannot write " + pp);
    pf << files.property_text;
    return {mp, pp};
}

// ---------------------------------------------------------------------------
// validators
// ---------------------------------------------------------------------------

namespace {

struct VToken {
    enum class Kind { Ident, Int, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
};

class VLexer {
public:
    explicit VLexer(const std::string& s) { tokenize(s); }
    const VToken& peek(size_t k = 0) const {
        size_t i = pos_ + k;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    VToken take() {
        VToken t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool accept(const std::string& text) {
        if (peek().text == text && peek().kind != VToken::Kind::End) {
            take();
            return true;
        }
        return false;
    }
    bool at_end() const { return peek().kind == VToken::Kind::End; }

private:
    void tokenize(const std::string& s) {
        size_t pos = 0;
        int line = 1;
        while (pos < s.size()) {
            if (s.compare(pos, 2, "(*") == 0) {  // comment
                size_t close = s.find("*)", pos + 2);
                for (size_t i = pos; i < (close == std::string::npos ? s.size() : close); ++i)
                    if (s[i] == '\n') ++line;
                pos = close == std::string::npos ? s.size() : close + 2;
                continue;
            }
            char c = s[pos];
            if (c == '\n') {
                ++line;
                ++pos;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t start = pos;
                while (pos < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                    ++pos;
                toks_.push_back({VToken::Kind::Ident, s.substr(start, pos - start), line});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t start = pos;
                while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                          s[pos] == '.'))
                    ++pos;
                toks_.push_back({VToken::Kind::Int, s.substr(start, pos - start), line});
                continue;
            }
            static const char* two[] = {":=", "<=", ">=", "<>"};
            bool matched = false;
            for (const char* p : two)
                if (s.compare(pos, 2, p) == 0) {
                    toks_.push_back({VToken::Kind::Punct, p, line});
                    pos += 2;
                    matched = true;
                    break;
                }
            if (matched) continue;
            toks_.push_back({VToken::Kind::Punct, std::string(1, c), line});
            ++pos;
        }
        toks_.push_back({VToken::Kind::End, "<eof>", line});
    }
    std::vector<VToken> toks_;
    size_t pos_ = 0;
};

struct Validator {
    VLexer lx;
    std::vector<std::string>* errs;
    std::set<std::string> clocks, params, locations;
    std::string automaton;

    explicit Validator(const std::string& text, std::vector<std::string>* e) : lx(text), errs(e) {}

    void err(const std::string& m) {
        errs->push_back("line " + std::to_string(lx.peek().line) + ": " + m +
                        " (got '" + lx.peek().text + "')");
    }

    bool expect(const std::string& t) {
        if (lx.accept(t)) return true;
        err("expected '" + t + "'");
        return false;
    }

    std::string expect_ident() {
        if (lx.peek().kind == VToken::Kind::Ident) return lx.take().text;
        err("expected identifier");
        return "";
    }

    bool declared(const std::string& id) const {
        return clocks.count(id) || params.count(id) || id == "True" || id == "False";
    }

    // linear expressions over declared variables and integers
    void check_expr_atom() {
        if (lx.accept("(")) {
            check_expr();
            expect(")");
            return;
        }
        lx.accept("-");
        if (lx.peek().kind == VToken::Kind::Int) {
            lx.take();
            if (lx.accept("*")) check_expr_atom();
            return;
        }
        std::string id = expect_ident();
        if (!id.empty() && !declared(id)) err("undeclared variable '" + id + "'");
    }

    void check_arith() {
        check_expr_atom();
        while (lx.accept("+") || lx.accept("-")) check_expr_atom();
    }

    void check_comparison() {
        if (lx.peek().text == "True" || lx.peek().text == "False") {
            lx.take();
            return;
        }
        check_arith();
        if (lx.accept("<=") || lx.accept(">=") || lx.accept("<") || lx.accept(">") ||
            lx.accept("=")) {
            check_arith();
        } else {
            err("expected comparison");
        }
    }

    void check_expr() {
        check_comparison();
        while (lx.accept("&") || lx.accept("|")) check_comparison();
    }

    void run_model() {
        if (!expect("var")) return;
        while (lx.peek().kind == VToken::Kind::Ident && lx.peek().text != "automaton") {
            std::vector<std::string> group;
            group.push_back(expect_ident());
            while (lx.accept(",")) group.push_back(expect_ident());
            expect(":");
            std::string ty = expect_ident();
            if (ty == "clock")
                clocks.insert(group.begin(), group.end());
            else if (ty == "parameter")
                params.insert(group.begin(), group.end());
            else
                err("unknown variable type '" + ty + "'");
            expect(";");
        }
        if (!expect("automaton")) return;
        automaton = expect_ident();
        if (lx.accept("synclabs")) {
            expect(":");
            while (lx.peek().kind == VToken::Kind::Ident) {
                lx.take();
                lx.accept(",");
            }
            expect(";");
        }
        // first pass over locations is sequential: collect, then re-check
        // transition targets at the end
        std::vector<std::string> targets;
        while (lx.peek().text == "loc" || lx.peek().text == "urgent" ||
               lx.peek().text == "accepting") {
            lx.accept("urgent");
            lx.accept("accepting");
            expect("loc");
            std::string name = expect_ident();
            if (!locations.insert(name).second) err("duplicate location '" + name + "'");
            expect(":");
            expect("invariant");
            check_expr();
            while (lx.peek().text == "when") {
                lx.take();
                check_expr();
                if (lx.accept("sync")) expect_ident();
                if (lx.accept("do")) {
                    expect("{");
                    if (!lx.accept("}")) {
                        do {
                            std::string c = expect_ident();
                            if (!clocks.count(c)) err("reset of undeclared clock '" + c + "'");
                            expect(":=");
                            if (lx.peek().kind == VToken::Kind::Int)
                                lx.take();
                            else
                                err("reset value must be a number");
                        } while (lx.accept(","));
                        expect("}");
                    }
                }
                expect("goto");
                targets.push_back(expect_ident());
                expect(";");
            }
        }
        expect("end");
        for (auto& t : targets)
            if (!locations.count(t)) errs->push_back("transition to undeclared location '" + t + "'");
        if (!expect("init")) return;
        expect(":=");
        expect("{");
        expect("discrete");
        expect("=");
        do {
            expect("loc");
            expect("[");
            std::string an = expect_ident();
            if (an != automaton) err("init refers to unknown automaton '" + an + "'");
            expect("]");
            expect(":=");
            std::string ln = expect_ident();
            if (!locations.count(ln)) err("init location '" + ln + "' is not declared");
        } while (lx.accept(","));
        expect(";");
        expect("continuous");
        expect("=");
        while (lx.accept("&")) check_comparison();
        expect(";");
        expect("}");
        expect("end");
        if (!lx.at_end()) err("trailing input");
    }

    void run_property() {
        expect("property");
        expect(":=");
        expect("#");
        std::string kw = expect_ident();
        if (kw != "synth" && kw != "witness") err("expected 'synth'");
        std::string op = expect_ident();
        static const std::set<std::string> ops = {"EF", "EU", "AF", "AU", "AG", "AGnot", "EG"};
        if (!ops.count(op)) err("unknown property operator '" + op + "'");
        expect("(");
        int args = 1;
        check_state_predicate();
        while (lx.accept(",")) {
            ++args;
            check_state_predicate();
        }
        expect(")");
        expect(";");
        if ((op == "EU" || op == "AU") && args != 2) err("until properties take two predicates");
        if ((op == "EF" || op == "AF" || op == "AG" || op == "AGnot" || op == "EG") && args != 1)
            err("unary properties take one predicate");
        if (!lx.at_end()) err("trailing input");
    }

    void check_state_atom() {
        if (lx.accept("(")) {
            check_state_predicate();
            expect(")");
            return;
        }
        if (lx.peek().text == "True" || lx.peek().text == "False") {
            lx.take();
            return;
        }
        if (lx.peek().text == "loc") {
            lx.take();
            expect("[");
            expect_ident();
            expect("]");
            expect("=");
            expect_ident();
            return;
        }
        // linear comparison over clocks/parameters
        check_arith_names_free();
        if (lx.accept("<=") || lx.accept(">=") || lx.accept("<") || lx.accept(">") ||
            lx.accept("="))
            check_arith_names_free();
        else
            err("expected comparison in state predicate");
    }

    void check_arith_names_free() {
        // property files stand alone, so identifiers are not cross-checked
        auto atom = [&]() {
            lx.accept("-");
            if (lx.peek().kind == VToken::Kind::Int) {
                lx.take();
                if (lx.accept("*")) expect_ident();
                return;
            }
            expect_ident();
        };
        atom();
        while (lx.accept("+") || lx.accept("-")) atom();
    }

    void check_state_predicate() {
        check_state_atom();
        while (lx.accept("&") || lx.accept("|")) check_state_atom();
    }
};

}  // namespace

std::vector<std::string> validate_imi(const std::string& text) {
    std::vector<std::string> errs;
    Validator v(text, &errs);
    v.run_model();
    return errs;
}

std::vector<std::string> validate_imiprop(const std::string& text) {
    std::vector<std::string> errs;
    Validator v(text, &errs);
    v.run_property();
    return errs;
}

}  // namespace hyptctl
