#include <cctype>
#include <optional>
#include <sstream>

#include "lgre/formula.hpp"

namespace lgre {

// Rendering mirrors the AST exactly so that parsing a rendering yields the
// same node. `&` is left-associative, so a right conjunct that is itself a
// conjunction gets parentheses; a quantifier reaches as far right as
// possible, so a left conjunct ending in a quantifier gets parentheses. A
// quantifier body that is a conjunction is parenthesized for readability.

namespace {

template <class F>
bool is_conjunction(const F& phi);
template <>
bool is_conjunction(const DlFormula& phi) { return phi.kind() == DlKind::conjunction; }
template <>
bool is_conjunction(const FoFormula& phi) { return phi.kind() == FoKind::conjunction; }

bool ends_open(const DlFormula& phi) {
    if (phi.kind() == DlKind::exists) return true;
    if (phi.kind() == DlKind::conjunction) return ends_open(phi.right());
    return false;
}

bool ends_open(const FoFormula& phi) {
    if (phi.kind() == FoKind::exists) return true;
    if (phi.kind() == FoKind::conjunction) return ends_open(phi.right());
    return false;
}

bool is_atomic(const DlFormula& phi) {
    return phi.kind() == DlKind::top || phi.kind() == DlKind::atom || phi.kind() == DlKind::negation;
}

bool is_atomic(const FoFormula& phi) {
    return phi.kind() == FoKind::top || phi.kind() == FoKind::relation ||
           phi.kind() == FoKind::inequality || phi.kind() == FoKind::negation;
}

std::string var(int i) { return "x" + std::to_string(i); }

void write(std::ostream& out, const DlFormula& phi);
void write(std::ostream& out, const FoFormula& phi);

template <class F>
void write_conjunction(std::ostream& out, const F& phi) {
    const F left = phi.left();
    const F right = phi.right();
    if (ends_open(left)) {
        out << '(';
        write(out, left);
        out << ')';
    } else {
        write(out, left);
    }
    out << " & ";
    if (is_conjunction(right)) {
        out << '(';
        write(out, right);
        out << ')';
    } else {
        write(out, right);
    }
}

template <class F>
void write_body(std::ostream& out, const F& body) {
    if (is_conjunction(body)) {
        out << '(';
        write(out, body);
        out << ')';
    } else {
        write(out, body);
    }
}

template <class F>
void write_negated(std::ostream& out, const F& child) {
    out << '!';
    if (is_atomic(child)) {
        write(out, child);
    } else {
        out << '(';
        write(out, child);
        out << ')';
    }
}

void write(std::ostream& out, const DlFormula& phi) {
    switch (phi.kind()) {
        case DlKind::top:
            out << 'T';
            return;
        case DlKind::atom:
            out << phi.name();
            return;
        case DlKind::negation:
            write_negated(out, phi.left());
            return;
        case DlKind::conjunction:
            write_conjunction(out, phi);
            return;
        case DlKind::exists:
            out << "some " << phi.name() << " . ";
            write_body(out, phi.left());
            return;
    }
}

void write(std::ostream& out, const FoFormula& phi) {
    switch (phi.kind()) {
        case FoKind::top:
            out << 'T';
            return;
        case FoKind::inequality:
            out << var(phi.variables()[0]) << " != " << var(phi.variables()[1]);
            return;
        case FoKind::relation: {
            out << phi.name() << '(';
            const auto& vars = phi.variables();
            for (std::size_t i = 0; i < vars.size(); ++i) {
                if (i > 0) out << ',';
                out << var(vars[i]);
            }
            out << ')';
            return;
        }
        case FoKind::negation:
            write_negated(out, phi.left());
            return;
        case FoKind::conjunction:
            write_conjunction(out, phi);
            return;
        case FoKind::exists:
            out << "ex " << var(phi.variables().front()) << " . ";
            write_body(out, phi.left());
            return;
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

enum class Tok { ident, amp, bang, neq, lparen, rparen, dot, comma, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t line = 1, column = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string s) {
        out.push_back({k, std::move(s), line, column});
    };
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == '\n') {
            ++line;
            column = 1;
            ++i;
            continue;
        }
        if (std::isspace(c)) {
            ++column;
            ++i;
            continue;
        }
        if (std::isalnum(c) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
                ++j;
            }
            push(Tok::ident, text.substr(i, j - i));
            column += j - i;
            i = j;
            continue;
        }
        if (c == '!' && i + 1 < text.size() && text[i + 1] == '=') {
            push(Tok::neq, "!=");
            column += 2;
            i += 2;
            continue;
        }
        Tok k;
        switch (c) {
            case '&': k = Tok::amp; break;
            case '!': k = Tok::bang; break;
            case '(': k = Tok::lparen; break;
            case ')': k = Tok::rparen; break;
            case '.': k = Tok::dot; break;
            case ',': k = Tok::comma; break;
            default:
                throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'",
                                 line, column);
        }
        push(k, std::string(1, static_cast<char>(c)));
        ++column;
        ++i;
    }
    out.push_back({Tok::end, "end of input", line, column});
    return out;
}

bool is_relation_ident(const std::string& s) {
    return !s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_') &&
           s != "T" && s != "some" && s != "ex";
}

std::optional<int> as_variable(const std::string& s) {
    if (s.size() < 2 || s[0] != 'x') return std::nullopt;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    }
    if (s[1] == '0') return std::nullopt;
    return std::stoi(s.substr(1));
}

class Parser {
public:
    explicit Parser(const std::string& text) : tokens_(lex(text)) {}

    DlFormula dl() {
        DlFormula f = dl_conj();
        expect_end();
        return f;
    }

    FoFormula fo() {
        FoFormula f = fo_conj();
        expect_end();
        return f;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& what, const Token& at) const {
        throw ParseError(what + ", found '" + at.text + "'", at.line, at.column);
    }

    void expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what, peek());
        take();
    }

    void expect_end() {
        if (peek().kind != Tok::end) fail("expected end of formula", peek());
    }

    const Token& relation_name() {
        const Token& t = peek();
        if (t.kind != Tok::ident || !is_relation_ident(t.text)) fail("expected relation name", t);
        return take();
    }

    int variable() {
        const Token& t = peek();
        auto v = t.kind == Tok::ident ? as_variable(t.text) : std::nullopt;
        if (!v) fail("expected variable x1, x2, ...", t);
        take();
        return *v;
    }

    DlFormula dl_conj() {
        DlFormula f = dl_unary();
        while (peek().kind == Tok::amp) {
            take();
            f = DlFormula::conjunction(f, dl_unary());
        }
        return f;
    }

    DlFormula dl_unary() {
        const Token& t = peek();
        if (t.kind == Tok::bang) {
            take();
            return DlFormula::negation(dl_unary());
        }
        if (t.kind == Tok::lparen) {
            take();
            DlFormula f = dl_conj();
            expect(Tok::rparen, "')'");
            return f;
        }
        if (t.kind == Tok::ident && t.text == "T") {
            take();
            return DlFormula::top();
        }
        if (t.kind == Tok::ident && t.text == "some") {
            take();
            const std::string r = relation_name().text;
            expect(Tok::dot, "'.'");
            return DlFormula::exists(r, dl_conj());
        }
        return DlFormula::atom(relation_name().text);
    }

    FoFormula fo_conj() {
        FoFormula f = fo_unary();
        while (peek().kind == Tok::amp) {
            take();
            f = FoFormula::conjunction(f, fo_unary());
        }
        return f;
    }

    FoFormula fo_unary() {
        const Token& t = peek();
        if (t.kind == Tok::bang) {
            take();
            return FoFormula::negation(fo_unary());
        }
        if (t.kind == Tok::lparen) {
            take();
            FoFormula f = fo_conj();
            expect(Tok::rparen, "')'");
            return f;
        }
        if (t.kind == Tok::ident && t.text == "T") {
            take();
            return FoFormula::top();
        }
        if (t.kind == Tok::ident && t.text == "ex") {
            take();
            const int v = variable();
            expect(Tok::dot, "'.'");
            return FoFormula::exists(v, fo_conj());
        }
        if (t.kind == Tok::ident && as_variable(t.text) && tokens_[pos_ + 1].kind == Tok::neq) {
            const int i = variable();
            take();
            const int j = variable();
            return FoFormula::inequality(i, j);
        }
        const std::string r = relation_name().text;
        expect(Tok::lparen, "'('");
        std::vector<int> vars{variable()};
        while (peek().kind == Tok::comma) {
            take();
            vars.push_back(variable());
        }
        expect(Tok::rparen, "')'");
        return FoFormula::relation(r, std::move(vars));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string render(const DlFormula& phi) {
    std::ostringstream out;
    write(out, phi);
    return out.str();
}

std::string render(const FoFormula& phi) {
    std::ostringstream out;
    write(out, phi);
    return out.str();
}

std::string render(const Formula& phi) {
    return std::visit([](const auto& f) { return render(f); }, phi);
}

DlFormula parse_dl(const std::string& text) { return Parser(text).dl(); }

FoFormula parse_fo(const std::string& text) { return Parser(text).fo(); }

Formula parse_formula(const std::string& text, Layer layer) {
    if (layer == Layer::dl) return parse_dl(text);
    return parse_fo(text);
}

}  // namespace lgre
