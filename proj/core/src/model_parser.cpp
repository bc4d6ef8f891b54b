#include "hyptctl/model_parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace hyptctl {

std::string ParseError::to_string() const {
    std::ostringstream os;
    os << "parse error at " << line << ":" << column << ": " << message;
    return os.str();
}

namespace {

struct Token {
    enum class Kind { Ident, Int, Punct, End };
    Kind kind;
    std::string text;
    long long value = 0;
    int line = 1, column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) { next(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        next();
        return t;
    }
    bool accept_punct(const std::string& p) {
        if (tok_.kind == Token::Kind::Punct && tok_.text == p) {
            next();
            return true;
        }
        return false;
    }
    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) fail("expected '" + p + "'");
    }
    bool accept_ident(const std::string& kw) {
        if (tok_.kind == Token::Kind::Ident && tok_.text == kw) {
            next();
            return true;
        }
        return false;
    }
    std::string expect_ident() {
        if (tok_.kind != Token::Kind::Ident) fail("expected identifier");
        return take().text;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError{tok_.line, tok_.column, msg + " (got '" + tok_.text + "')"};
    }
    bool at_end() const { return tok_.kind == Token::Kind::End; }

private:
    void next() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.column = col_;
        if (pos_ >= s_.size()) {
            tok_ = {Token::Kind::End, "<eof>", 0, line_, col_};
            return;
        }
        char c = s_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                    s_[pos_] == '^' || s_[pos_] == '\''))
                ++pos_;
            tok_ = {Token::Kind::Ident, s_.substr(start, pos_ - start), 0, line_, col_};
            col_ += static_cast<int>(pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            Token t{Token::Kind::Int, s_.substr(start, pos_ - start), 0, line_, col_};
            t.value = std::stoll(t.text);
            tok_ = t;
            col_ += static_cast<int>(pos_ - start);
            return;
        }
        // Multi-char punctuation first.
        static const char* two[] = {"->", "<=", ">=", "!="};
        for (const char* p : two) {
            if (s_.compare(pos_, 2, p) == 0) {
                tok_ = {Token::Kind::Punct, p, 0, line_, col_};
                pos_ += 2;
                col_ += 2;
                return;
            }
        }
        tok_ = {Token::Kind::Punct, std::string(1, c), 0, line_, col_};
        ++pos_;
        ++col_;
    }

    std::string s_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// A linear expression over clocks and parameters, as parsed from one side
// of a comparison.
struct SideExpr {
    std::map<std::string, long long> clock_coeffs;
    LinearTerm param_term;
};

class GuardParser {
public:
    GuardParser(Lexer& lx, const std::set<std::string>& clocks,
                const std::set<std::string>& params)
        : lx_(lx), clocks_(clocks), params_(params) {}

    Guard parse() {
        Guard g;
        if (lx_.accept_ident("true")) {
            // may still be conjoined: true & c <= 1
            while (lx_.accept_punct("&")) parse_atom(g);
            return g;
        }
        parse_atom(g);
        while (lx_.accept_punct("&")) {
            if (lx_.accept_ident("true")) continue;
            parse_atom(g);
        }
        return g;
    }

private:
    void parse_atom(Guard& g) {
        SideExpr lhs = parse_side();
        Rel rel = parse_rel();
        SideExpr rhs = parse_side();
        g.atoms.push_back(normalize(lhs, rel, rhs));
    }

    Rel parse_rel() {
        if (lx_.accept_punct("<=")) return Rel::Le;
        if (lx_.accept_punct(">=")) return Rel::Ge;
        if (lx_.accept_punct("<")) return Rel::Lt;
        if (lx_.accept_punct(">")) return Rel::Gt;
        if (lx_.accept_punct("=")) return Rel::Eq;
        lx_.fail("expected comparison operator");
    }

    SideExpr parse_side() {
        SideExpr e;
        bool neg = false;
        if (lx_.accept_punct("-")) neg = true;
        parse_term(e, neg);
        for (;;) {
            if (lx_.accept_punct("+"))
                parse_term(e, false);
            else if (lx_.accept_punct("-"))
                parse_term(e, true);
            else
                break;
        }
        return e;
    }

    void parse_term(SideExpr& e, bool neg) {
        long long coeff = 1;
        bool have_coeff = false;
        if (lx_.peek().kind == Token::Kind::Int) {
            coeff = lx_.take().value;
            have_coeff = true;
            if (!lx_.accept_punct("*")) {
                e.param_term.constant += rational_of(neg ? -coeff : coeff);
                return;
            }
        }
        if (lx_.peek().kind != Token::Kind::Ident) lx_.fail("expected identifier in guard term");
        Token t = lx_.take();
        long long c = neg ? -coeff : coeff;
        if (clocks_.count(t.text)) {
            if (have_coeff && coeff != 1)
                throw ParseError{t.line, t.column, "clock coefficient must be 1"};
            e.clock_coeffs[t.text] += c;
        } else if (params_.count(t.text)) {
            e.param_term.coeffs[t.text] += c;
        } else {
            throw ParseError{t.line, t.column, "unknown identifier '" + t.text + "' in guard"};
        }
    }

    AtomicConstraint normalize(const SideExpr& lhs, Rel rel, const SideExpr& rhs) {
        // Move clocks left, parameters and constants right.
        std::map<std::string, long long> k;
        for (auto& [c, a] : lhs.clock_coeffs) k[c] += a;
        for (auto& [c, a] : rhs.clock_coeffs) k[c] -= a;
        for (auto it = k.begin(); it != k.end();)
            it = it->second == 0 ? k.erase(it) : std::next(it);

        LinearTerm t = rhs.param_term;
        for (auto& [p, a] : lhs.param_term.coeffs) t.coeffs[p] -= a;
        t.constant -= lhs.param_term.constant;
        for (auto it = t.coeffs.begin(); it != t.coeffs.end();)
            it = it->second == 0 ? t.coeffs.erase(it) : std::next(it);

        AtomicConstraint atom;
        if (k.empty()) {
            atom.lhs = AtomicConstraint::Lhs::Zero;
            atom.rel = rel;
            atom.rhs = t;
            return atom;
        }
        bool flipped = false;
        if (k.size() == 1) {
            auto [c, a] = *k.begin();
            if (a == -1) {
                flipped = true;
            } else if (a != 1) {
                lx_.fail("unsupported clock combination in guard atom");
            }
            atom.lhs = AtomicConstraint::Lhs::Clock;
            atom.clock1 = c;
        } else if (k.size() == 2) {
            auto it = k.begin();
            auto [c1, a1] = *it;
            auto [c2, a2] = *std::next(it);
            if (a1 == 1 && a2 == -1) {
                atom.clock1 = c1;
                atom.clock2 = c2;
            } else if (a1 == -1 && a2 == 1) {
                atom.clock1 = c2;
                atom.clock2 = c1;
                flipped = true;
            } else {
                lx_.fail("unsupported clock combination in guard atom");
            }
            atom.lhs = AtomicConstraint::Lhs::Diff;
            if (flipped) std::swap(atom.clock1, atom.clock2);
        } else {
            lx_.fail("unsupported clock combination in guard atom");
        }
        if (flipped) {
            // -(clockpart) rel t  <=>  clockpart flip(rel) -t
            atom.rel = rel_flip(rel);
            atom.rhs = t.negated();
        } else {
            atom.rel = rel;
            atom.rhs = t;
        }
        return atom;
    }

    Lexer& lx_;
    const std::set<std::string>& clocks_;
    const std::set<std::string>& params_;
};

std::set<std::string> parse_name_list(Lexer& lx) {
    std::set<std::string> out;
    out.insert(lx.expect_ident());
    while (lx.accept_punct(",")) out.insert(lx.expect_ident());
    return out;
}

}  // namespace

Pta parse_pta(const std::string& text) {
    Lexer lx(text);
    Pta a;
    if (!lx.accept_ident("pta")) lx.fail("model must start with 'pta <name>'");
    a.name = lx.expect_ident();

    struct PendingEdge {
        std::string src, dst;
        Guard guard;
        std::set<std::string> resets;
        int line, column;
    };
    std::vector<PendingEdge> pending;

    while (!lx.at_end()) {
        if (lx.accept_ident("clocks")) {
            auto names = parse_name_list(lx);
            a.clocks.insert(names.begin(), names.end());
            lx.expect_punct(";");
        } else if (lx.accept_ident("params")) {
            auto names = parse_name_list(lx);
            a.params.insert(names.begin(), names.end());
            lx.expect_punct(";");
        } else if (lx.accept_ident("props")) {
            auto names = parse_name_list(lx);
            a.props.insert(names.begin(), names.end());
            lx.expect_punct(";");
        } else if (lx.accept_ident("loc")) {
            Location loc;
            loc.name = lx.expect_ident();
            bool initial = lx.accept_ident("initial");
            if (lx.accept_ident("labels")) {
                lx.expect_punct("{");
                if (!lx.accept_punct("}")) {
                    loc.labels = parse_name_list(lx);
                    lx.expect_punct("}");
                }
            }
            if (lx.accept_ident("inv")) {
                GuardParser gp(lx, a.clocks, a.params);
                loc.invariant = gp.parse();
            }
            lx.expect_punct(";");
            if (a.location_index(loc.name) >= 0) lx.fail("duplicate location '" + loc.name + "'");
            a.props.insert(loc.labels.begin(), loc.labels.end());
            a.locations.push_back(loc);
            if (initial) a.initial.insert(static_cast<int>(a.locations.size()) - 1);
        } else if (lx.accept_ident("edge")) {
            PendingEdge e;
            e.line = lx.peek().line;
            e.column = lx.peek().column;
            e.src = lx.expect_ident();
            lx.expect_punct("->");
            e.dst = lx.expect_ident();
            if (lx.accept_ident("when")) {
                GuardParser gp(lx, a.clocks, a.params);
                e.guard = gp.parse();
            }
            if (lx.accept_ident("reset")) {
                lx.expect_punct("{");
                if (!lx.accept_punct("}")) {
                    e.resets = parse_name_list(lx);
                    lx.expect_punct("}");
                }
            }
            lx.expect_punct(";");
            pending.push_back(std::move(e));
        } else {
            lx.fail("expected 'clocks', 'params', 'props', 'loc' or 'edge'");
        }
    }

    for (auto& e : pending) {
        int s = a.location_index(e.src);
        int t = a.location_index(e.dst);
        if (s < 0) throw ParseError{e.line, e.column, "unknown source location '" + e.src + "'"};
        if (t < 0) throw ParseError{e.line, e.column, "unknown target location '" + e.dst + "'"};
        a.edges.push_back({s, e.guard, e.resets, t});
    }
    return a;
}

Pta load_pta_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_pta(ss.str());
}

Guard parse_guard_text(const std::string& text, const std::set<std::string>& clocks,
                       const std::set<std::string>& params) {
    Lexer lx(text);
    GuardParser gp(lx, clocks, params);
    Guard g = gp.parse();
    if (!lx.at_end()) lx.fail("trailing input after guard");
    return g;
}

}  // namespace hyptctl
