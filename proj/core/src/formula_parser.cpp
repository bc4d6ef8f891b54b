#include "hyptctl/formula_parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace hyptctl {

namespace {

struct Token {
    enum class Kind { Ident, Int, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    long long value = 0;
    int line = 1, column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) { tokenize(); }

    struct State {
        size_t index;
    };
    State save() const { return {index_}; }
    void restore(State s) { index_ = s.index; }

    const Token& peek(size_t ahead = 0) const {
        size_t i = index_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    Token take() {
        Token t = peek();
        if (index_ < toks_.size() - 1) ++index_;
        return t;
    }
    bool accept_punct(const std::string& p) {
        if (peek().kind == Token::Kind::Punct && peek().text == p) {
            take();
            return true;
        }
        return false;
    }
    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) fail("expected '" + p + "'");
    }
    bool accept_kw(const std::string& kw) {
        if (peek().kind == Token::Kind::Ident && peek().text == kw) {
            take();
            return true;
        }
        return false;
    }
    bool peek_kw(const std::string& kw, size_t ahead = 0) const {
        return peek(ahead).kind == Token::Kind::Ident && peek(ahead).text == kw;
    }
    bool peek_punct(const std::string& p, size_t ahead = 0) const {
        return peek(ahead).kind == Token::Kind::Punct && peek(ahead).text == p;
    }
    std::string expect_ident() {
        if (peek().kind != Token::Kind::Ident) fail("expected identifier");
        return take().text;
    }
    long long expect_nat() {
        if (peek().kind != Token::Kind::Int) fail("expected natural number");
        return take().value;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError{t.line, t.column, msg + " (got '" + t.text + "')"};
    }
    bool at_end() const { return peek().kind == Token::Kind::End; }

private:
    void tokenize() {
        size_t pos = 0;
        int line = 1, col = 1;
        auto push = [&](Token::Kind k, std::string text, long long v = 0) {
            toks_.push_back({k, std::move(text), v, line, col});
        };
        while (pos < s_.size()) {
            char c = s_[pos];
            if (c == '#') {
                while (pos < s_.size() && s_[pos] != '\n') ++pos;
                continue;
            }
            if (c == '\n') {
                ++line;
                col = 1;
                ++pos;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++col;
                ++pos;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t start = pos;
                while (pos < s_.size() &&
                       (std::isalnum(static_cast<unsigned char>(s_[pos])) || s_[pos] == '_' ||
                        s_[pos] == '^' || s_[pos] == '\''))
                    ++pos;
                push(Token::Kind::Ident, s_.substr(start, pos - start));
                col += static_cast<int>(pos - start);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t start = pos;
                while (pos < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos]))) ++pos;
                std::string text = s_.substr(start, pos - start);
                push(Token::Kind::Int, text, std::stoll(text));
                col += static_cast<int>(pos - start);
                continue;
            }
            static const char* two[] = {"->", "<=", ">=", "!=", "<>", "[]"};
            bool matched = false;
            for (const char* p : two) {
                if (s_.compare(pos, 2, p) == 0) {
                    push(Token::Kind::Punct, p);
                    pos += 2;
                    col += 2;
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            push(Token::Kind::Punct, std::string(1, c));
            ++pos;
            ++col;
        }
        push(Token::Kind::End, "<eof>");
    }

    std::string s_;
    std::vector<Token> toks_;
    size_t index_ = 0;
};

class FormulaParser {
public:
    explicit FormulaParser(const std::string& text) : lx_(text) {}

    TopPtr parse() {
        TopPtr e = parse_top();
        if (!lx_.at_end()) lx_.fail("trailing input after formula");
        return e;
    }

private:
    // -- helpers -----------------------------------------------------------

    Rel parse_rel() {
        if (lx_.accept_punct("<=")) return Rel::Le;
        if (lx_.accept_punct(">=")) return Rel::Ge;
        if (lx_.accept_punct("<")) return Rel::Lt;
        if (lx_.accept_punct(">")) return Rel::Gt;
        if (lx_.accept_punct("=")) return Rel::Eq;
        lx_.fail("expected comparison operator");
    }

    bool peek_rel() const {
        return lx_.peek_punct("<=") || lx_.peek_punct(">=") || lx_.peek_punct("<") ||
               lx_.peek_punct(">") || lx_.peek_punct("=");
    }

    /// Integer linear term over parameters: INT | [INT '*'] IDENT, joined
    /// with '+'/'-'.
    LinearTerm parse_linear_term() {
        LinearTerm t;
        bool neg = lx_.accept_punct("-");
        parse_lt_term(t, neg);
        for (;;) {
            if (lx_.accept_punct("+"))
                parse_lt_term(t, false);
            else if (lx_.accept_punct("-"))
                parse_lt_term(t, true);
            else
                break;
        }
        return t;
    }

    void parse_lt_term(LinearTerm& t, bool neg) {
        long long coeff = 1;
        if (lx_.peek().kind == Token::Kind::Int) {
            coeff = lx_.take().value;
            if (!lx_.accept_punct("*")) {
                t.constant += rational_of(neg ? -coeff : coeff);
                return;
            }
        }
        std::string p = lx_.expect_ident();
        t.coeffs[p] += neg ? -coeff : coeff;
        if (t.coeffs[p] == 0) t.coeffs.erase(p);
    }

    std::optional<TemporalBound> parse_opt_bound() {
        if (!lx_.accept_punct("{")) return std::nullopt;
        TemporalBound b;
        b.rel = parse_rel();
        if (lx_.peek().kind == Token::Kind::Int) {
            b.nat = lx_.take().value;
        } else {
            b.param = lx_.expect_ident();
        }
        lx_.expect_punct("}");
        return b;
    }

    // -- count combinations -------------------------------------------------

    std::vector<CountTermEntry> parse_count_comb() {
        std::vector<CountTermEntry> terms;
        bool neg = lx_.accept_punct("-");
        terms.push_back(parse_count_term(neg));
        for (;;) {
            if (lx_.accept_punct("+"))
                terms.push_back(parse_count_term(false));
            else if (lx_.accept_punct("-"))
                terms.push_back(parse_count_term(true));
            else
                break;
        }
        return terms;
    }

    CountTermEntry parse_count_term(bool neg) {
        long long coeff = 1;
        if (lx_.peek().kind == Token::Kind::Int) {
            coeff = lx_.take().value;
            lx_.expect_punct("*");
        }
        if (!lx_.accept_kw("COUNT")) lx_.fail("expected COUNT");
        lx_.expect_punct("(");
        CountTermEntry t;
        t.coeff = neg ? -coeff : coeff;
        t.prop = lx_.expect_ident();
        lx_.expect_punct("@");
        t.path = lx_.expect_ident();
        lx_.expect_punct(")");
        return t;
    }

    BoolPtr finish_count_atom(std::vector<CountTermEntry> terms, bool parenthesized) {
        (void)parenthesized;
        if (lx_.accept_kw("mod")) {
            long long n = lx_.expect_nat();
            if (n < 1) lx_.fail("modulus must be at least 1");
            bool negated = false;
            if (lx_.peek_kw("not") && lx_.peek_kw("in", 1)) {
                lx_.take();
                lx_.take();
                negated = true;
            }
            if (negated || lx_.accept_kw("in")) {
                // set membership desugars into a disjunction of single atoms
                lx_.expect_punct("{");
                std::vector<long long> values;
                values.push_back(lx_.expect_nat());
                while (lx_.accept_punct(",")) values.push_back(lx_.expect_nat());
                lx_.expect_punct("}");
                BoolPtr acc;
                for (long long d : values) {
                    CountModAtom atom{terms, n, Rel::Eq, d};
                    BoolPtr one = BoolExpr::mk_count_mod(std::move(atom));
                    acc = acc ? BoolExpr::mk_bin(BoolExpr::Kind::Or, acc, one) : one;
                }
                return negated ? BoolExpr::mk_not(acc) : acc;
            }
            Rel rel = parse_rel();
            long long d = lx_.expect_nat();
            return BoolExpr::mk_count_mod({std::move(terms), n, rel, d});
        }
        Rel rel = parse_rel();
        long long d = lx_.expect_nat();
        for (auto& t : terms)
            if (t.coeff < 0)
                lx_.fail("negative COUNT coefficients are only allowed under 'mod'");
        return BoolExpr::mk_count_ge0({std::move(terms), rel, d});
    }

    // -- LAST atoms ----------------------------------------------------------

    BoolPtr parse_last_atom() {
        LastAtom atom;
        lx_.expect_punct("(");
        atom.prop1 = lx_.expect_ident();
        lx_.expect_punct("@");
        atom.path1 = lx_.expect_ident();
        lx_.expect_punct(")");
        lx_.expect_punct("-");
        if (!lx_.accept_kw("LAST")) lx_.fail("expected second LAST term");
        lx_.expect_punct("(");
        atom.prop2 = lx_.expect_ident();
        lx_.expect_punct("@");
        atom.path2 = lx_.expect_ident();
        lx_.expect_punct(")");

        bool negated = false;
        if (lx_.peek_kw("not") && lx_.peek_kw("in", 1)) {
            lx_.take();
            lx_.take();
            negated = true;
        } else if (lx_.accept_kw("in")) {
            // fallthrough handled below
        } else {
            atom.window.kind = LastWindow::Kind::Rel;
            atom.window.rel = parse_rel();
            atom.window.bound = parse_linear_term();
            return BoolExpr::mk_last(std::move(atom));
        }
        atom.window.kind = negated ? LastWindow::Kind::NotIn : LastWindow::Kind::In;
        if (lx_.accept_punct("["))
            atom.window.lo_rel = Rel::Ge;
        else if (lx_.accept_punct("("))
            atom.window.lo_rel = Rel::Gt;
        else
            lx_.fail("expected '[' or '(' after 'in'");
        atom.window.lo = parse_linear_term();
        lx_.expect_punct(",");
        atom.window.hi = parse_linear_term();
        if (lx_.accept_punct("]"))
            atom.window.hi_rel = Rel::Le;
        else if (lx_.accept_punct(")"))
            atom.window.hi_rel = Rel::Lt;
        else
            lx_.fail("expected ']' or ')' closing the interval");
        return BoolExpr::mk_last(std::move(atom));
    }

    // -- Boolean level -------------------------------------------------------

    BoolPtr parse_bool() { return parse_bool_implies(); }

    BoolPtr parse_bool_implies() {
        BoolPtr a = parse_bool_or();
        if (lx_.accept_punct("->"))
            return BoolExpr::mk_bin(BoolExpr::Kind::Implies, a, parse_bool_implies());
        return a;
    }

    BoolPtr parse_bool_or() {
        BoolPtr a = parse_bool_and();
        while (lx_.accept_punct("|")) a = BoolExpr::mk_bin(BoolExpr::Kind::Or, a, parse_bool_and());
        return a;
    }

    BoolPtr parse_bool_and() {
        BoolPtr a = parse_bool_eq();
        while (lx_.accept_punct("&")) a = BoolExpr::mk_bin(BoolExpr::Kind::And, a, parse_bool_eq());
        return a;
    }

    BoolPtr parse_bool_eq() {
        BoolPtr a = parse_bool_unary();
        if (lx_.accept_punct("=")) return BoolExpr::mk_bin(BoolExpr::Kind::Equiv, a, parse_bool_unary());
        if (lx_.accept_punct("!=")) return BoolExpr::mk_bin(BoolExpr::Kind::Nequiv, a, parse_bool_unary());
        return a;
    }

    BoolPtr parse_bool_unary() {
        if (lx_.accept_punct("~")) return BoolExpr::mk_not(parse_bool_unary());
        return parse_bool_primary();
    }

    BoolPtr parse_bool_primary() {
        if (lx_.accept_kw("true")) return BoolExpr::mk_true();
        if (lx_.accept_kw("false")) return BoolExpr::mk_not(BoolExpr::mk_true());
        if (lx_.peek_kw("E") || lx_.peek_kw("A"))
            lx_.fail("nested temporal operators are not supported (nest-free fragment only)");
        if (lx_.accept_kw("LAST")) return parse_last_atom();
        if (lx_.peek_kw("COUNT") ||
            (lx_.peek().kind == Token::Kind::Int && lx_.peek_punct("*", 1) &&
             lx_.peek_kw("COUNT", 2)))
            return finish_count_atom(parse_count_comb(), false);
        if (lx_.accept_punct("(")) {
            // Either a parenthesized Boolean formula or '(comb) mod ...'.
            // Tentatively read a count combination; commit once 'mod' shows
            // up so that errors after it surface instead of backtracking.
            auto mark = lx_.save();
            bool looks_like_comb =
                lx_.peek_kw("COUNT") || lx_.peek_punct("-") ||
                (lx_.peek().kind == Token::Kind::Int && lx_.peek_punct("*", 1));
            if (looks_like_comb) {
                bool committed = false;
                std::vector<CountTermEntry> terms;
                try {
                    terms = parse_count_comb();
                    committed = lx_.accept_punct(")") && lx_.peek_kw("mod");
                } catch (const ParseError&) {
                }
                if (committed) return finish_count_atom(std::move(terms), true);
                lx_.restore(mark);
            }
            BoolPtr inner = parse_bool();
            lx_.expect_punct(")");
            return inner;
        }
        if (lx_.peek().kind == Token::Kind::Ident && lx_.peek_punct("@", 1)) {
            std::string prop = lx_.expect_ident();
            lx_.expect_punct("@");
            std::string path = lx_.expect_ident();
            return BoolExpr::mk_prop(std::move(prop), std::move(path));
        }
        lx_.fail("expected Boolean formula");
    }

    // -- temporal ------------------------------------------------------------

    TopPtr parse_temporal(bool exists) {
        TemporalFormula t;
        t.exists = exists;
        if (lx_.accept_punct("<>"))
            t.kind = TemporalFormula::Kind::Diamond;
        else if (lx_.accept_punct("[]"))
            t.kind = TemporalFormula::Kind::Box;
        else
            t.kind = TemporalFormula::Kind::Until;  // binary; operator read below
        bool unary = t.kind != TemporalFormula::Kind::Until;
        if (unary) t.bound = parse_opt_bound();

        lx_.expect_punct("[");
        t.path_vars.push_back(lx_.expect_ident());
        while (lx_.accept_punct(",")) t.path_vars.push_back(lx_.expect_ident());
        lx_.expect_punct("]");
        for (size_t i = 0; i < t.path_vars.size(); ++i)
            for (size_t j = i + 1; j < t.path_vars.size(); ++j)
                if (t.path_vars[i] == t.path_vars[j])
                    lx_.fail("path variable '" + t.path_vars[i] + "' bound twice");

        lx_.expect_punct("(");
        if (unary) {
            t.rhs = parse_bool();
        } else {
            t.lhs = parse_bool();
            if (lx_.accept_kw("U"))
                t.kind = TemporalFormula::Kind::Until;
            else if (lx_.accept_kw("R"))
                t.kind = TemporalFormula::Kind::Release;
            else if (lx_.accept_kw("W"))
                t.kind = TemporalFormula::Kind::WeakUntil;
            else
                lx_.fail("expected 'U', 'R' or 'W'");
            t.bound = parse_opt_bound();
            t.rhs = parse_bool();
        }
        lx_.expect_punct(")");
        return TopExpr::mk_temporal(std::move(t));
    }

    // -- top level -----------------------------------------------------------

    TopPtr parse_top() { return parse_top_implies(); }

    TopPtr parse_top_implies() {
        TopPtr a = parse_top_or();
        if (lx_.accept_punct("->"))
            return TopExpr::mk_bin(TopExpr::Kind::Implies, a, parse_top_implies());
        return a;
    }

    TopPtr parse_top_or() {
        TopPtr a = parse_top_and();
        while (lx_.accept_punct("|")) a = TopExpr::mk_bin(TopExpr::Kind::Or, a, parse_top_and());
        return a;
    }

    TopPtr parse_top_and() {
        TopPtr a = parse_top_unary();
        while (lx_.accept_punct("&")) a = TopExpr::mk_bin(TopExpr::Kind::And, a, parse_top_unary());
        return a;
    }

    TopPtr parse_top_unary() {
        if (lx_.accept_punct("~")) return TopExpr::mk_not(parse_top_unary());
        if (lx_.accept_kw("exists")) {
            std::string p = lx_.expect_ident();
            lx_.expect_punct(".");
            return TopExpr::mk_quant(TopExpr::Kind::ExistsParam, std::move(p), parse_top_unary());
        }
        if (lx_.accept_kw("forall")) {
            std::string p = lx_.expect_ident();
            lx_.expect_punct(".");
            return TopExpr::mk_quant(TopExpr::Kind::ForallParam, std::move(p), parse_top_unary());
        }
        if (lx_.peek_kw("E") && !lx_.peek_punct("@", 1)) {
            lx_.take();
            return parse_temporal(true);
        }
        if (lx_.peek_kw("A") && !lx_.peek_punct("@", 1)) {
            lx_.take();
            return parse_temporal(false);
        }
        if (lx_.accept_punct("(")) {
            // Like the Boolean level, '(comb) mod' needs a tentative parse.
            auto mark = lx_.save();
            bool looks_like_comb =
                lx_.peek_kw("COUNT") || lx_.peek_punct("-") ||
                (lx_.peek().kind == Token::Kind::Int && lx_.peek_punct("*", 1));
            if (looks_like_comb) {
                bool committed = false;
                std::vector<CountTermEntry> terms;
                try {
                    terms = parse_count_comb();
                    committed = lx_.accept_punct(")") && lx_.peek_kw("mod");
                } catch (const ParseError&) {
                }
                if (committed) return TopExpr::mk_atom(finish_count_atom(std::move(terms), true));
                lx_.restore(mark);
            }
            TopPtr inner = parse_top();
            lx_.expect_punct(")");
            return inner;
        }
        if (lx_.accept_kw("true")) return TopExpr::mk_atom(BoolExpr::mk_true());
        if (lx_.accept_kw("false"))
            return TopExpr::mk_atom(BoolExpr::mk_not(BoolExpr::mk_true()));
        if (lx_.peek_kw("LAST") || lx_.peek_kw("COUNT") ||
            (lx_.peek().kind == Token::Kind::Int && lx_.peek_punct("*", 1)))
            return TopExpr::mk_atom(parse_bool_unary());
        if (lx_.peek().kind == Token::Kind::Ident) {
            if (lx_.peek_punct("@", 1)) return TopExpr::mk_atom(parse_bool_unary());
            // parameter comparison: p rel lt (lt must be a non-negative term)
            std::string p = lx_.expect_ident();
            if (!peek_rel()) lx_.fail("expected comparison after parameter '" + p + "'");
            Rel rel = parse_rel();
            LinearTerm lt = parse_linear_term();
            if (!lt.nonnegative())
                lx_.fail("right-hand side of a parameter comparison must be a non-negative "
                         "linear term");
            return TopExpr::mk_param_cmp(std::move(p), rel, std::move(lt));
        }
        lx_.fail("expected formula");
    }

    Lexer lx_;
};

}  // namespace

TopPtr parse_formula(const std::string& text) { return FormulaParser(text).parse(); }

TopPtr load_formula_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open formula file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_formula(ss.str());
}

}  // namespace hyptctl
