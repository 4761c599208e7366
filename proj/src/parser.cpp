#include "ctlmc/parser.hpp"

#include "ctlmc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ctlmc {

namespace {

enum class Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Colon,
    Dot,
    Cmp,    // = != <= < >= >
    Ident,
    Int,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    Lexer(const std::string& text, int first_line) : text_(text), line_(first_line) {}

    std::vector<Token> all() {
        std::vector<Token> out;
        for (;;) {
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::End) return out;
        }
    }

private:
    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            advance();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Tok::End, "", line, col};

        char c = text_[pos_];
        auto take = [&](Tok kind, std::size_t n) {
            std::string s = text_.substr(pos_, n);
            for (std::size_t i = 0; i < n; ++i) advance();
            return Token{kind, s, line, col};
        };

        switch (c) {
            case '(': return take(Tok::LParen, 1);
            case ')': return take(Tok::RParen, 1);
            case '[': return take(Tok::LBracket, 1);
            case ']': return take(Tok::RBracket, 1);
            case '&': return take(Tok::Amp, 1);
            case '|': return take(Tok::Pipe, 1);
            case ':': return take(Tok::Colon, 1);
            case '.': return take(Tok::Dot, 1);
            case '=': return take(Tok::Cmp, 1);
            case '!':
                if (peek(1) == '=') return take(Tok::Cmp, 2);
                return take(Tok::Bang, 1);
            case '<':
            case '>':
                if (peek(1) == '=') return take(Tok::Cmp, 2);
                return take(Tok::Cmp, 1);
            case '-':
                if (peek(1) == '>') return take(Tok::Arrow, 2);
                throw SyntaxError("stray '-' (did you mean '->'?)", line, col);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t n = 0;
            while (pos_ + n < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_ + n])))
                ++n;
            return take(Tok::Int, n);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t n = 0;
            while (pos_ + n < text_.size()) {
                char d = text_[pos_ + n];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') ++n;
                else break;
            }
            return take(Tok::Ident, n);
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }

    char peek(std::size_t ahead) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_;
    int col_ = 1;
};

class Parser {
public:
    Parser(const std::string& text, int first_line)
        : tokens_(Lexer(text, first_line).all()) {}

    FormulaPtr parse() {
        FormulaPtr formula = implication();
        expect(Tok::End, "end of formula");
        return formula;
    }

private:
    const Token& cur() const { return tokens_[pos_]; }
    const Token& ahead(std::size_t n) const {
        return tokens_[std::min(pos_ + n, tokens_.size() - 1)];
    }
    Token eat() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = cur();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError("expected " + expected + ", got " + got, t.line, t.column);
    }

    Token expect(Tok kind, const std::string& what) {
        if (cur().kind != kind) fail(what);
        return eat();
    }

    bool is_ident(const char* word) const {
        return cur().kind == Tok::Ident && cur().text == word;
    }

    FormulaPtr implication() {
        FormulaPtr lhs = disjunction();
        if (cur().kind == Tok::Arrow) {
            eat();
            return f::implication(std::move(lhs), implication());  // right-associative
        }
        return lhs;
    }

    FormulaPtr disjunction() {
        FormulaPtr lhs = conjunction();
        while (cur().kind == Tok::Pipe) {
            eat();
            lhs = f::disjunction(std::move(lhs), conjunction());
        }
        return lhs;
    }

    FormulaPtr conjunction() {
        FormulaPtr lhs = unary();
        while (cur().kind == Tok::Amp) {
            eat();
            lhs = f::conjunction(std::move(lhs), unary());
        }
        return lhs;
    }

    FormulaPtr unary() {
        switch (cur().kind) {
            case Tok::Bang:
                eat();
                return f::negation(unary());
            case Tok::LParen: {
                eat();
                FormulaPtr inner = implication();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Ident: break;
            default:
                fail("a formula: '!', '(', 'A [', 'E [', AX/EX/AF/EF/AG/EG, "
                     "'true', 'false' or an identifier");
        }

        const std::string& word = cur().text;
        if (word == "AX") { eat(); return f::ax(unary()); }
        if (word == "EX") { eat(); return f::ex(unary()); }
        if (word == "AF") { eat(); return f::af(unary()); }
        if (word == "EF") { eat(); return f::ef(unary()); }
        if (word == "AG") { eat(); return f::ag(unary()); }
        if (word == "EG") { eat(); return f::eg(unary()); }
        if ((word == "A" || word == "E") && ahead(1).kind == Tok::LBracket) {
            bool universal = word == "A";
            eat();
            eat();
            FormulaPtr lhs = implication();
            if (!is_ident("U")) fail("'U'");
            eat();
            FormulaPtr rhs = implication();
            expect(Tok::RBracket, "']'");
            return universal ? f::au(std::move(lhs), std::move(rhs))
                             : f::eu(std::move(lhs), std::move(rhs));
        }
        if (word == "true") { eat(); return f::constant(true); }
        if (word == "false") { eat(); return f::constant(false); }
        return atom();
    }

    // atom := ident ("." ident)* (cmp value)?  -- folded into one canonical name
    FormulaPtr atom() {
        std::string name = expect(Tok::Ident, "an identifier").text;
        while (cur().kind == Tok::Dot) {
            eat();
            name += "." + expect(Tok::Ident, "an identifier after '.'").text;
        }
        if (cur().kind == Tok::Cmp) {
            name += eat().text;
            if (cur().kind == Tok::Ident || cur().kind == Tok::Int) name += eat().text;
            else fail("a value (identifier or integer)");
        }
        return f::atom(std::move(name));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text, 1).parse(); }

std::vector<SpecEntry> parse_spec_file(const std::string& text) {
    std::vector<SpecEntry> entries;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::size_t comment = line.find("--");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.rfind("SPEC", 0) != 0 ||
            (line.size() > 4 && !std::isspace(static_cast<unsigned char>(line[4]))))
            throw SyntaxError("expected a SPEC line or a '--' comment", line_no, 1);

        std::string body = trim(line.substr(4));
        SpecEntry entry;
        // Optional `name :` label before the formula.
        std::size_t colon = body.find(':');
        if (colon != std::string::npos) {
            std::string label = trim(body.substr(0, colon));
            bool plain = !label.empty();
            for (char c : label)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') plain = false;
            if (plain) {
                entry.name = label;
                body = trim(body.substr(colon + 1));
            }
        }
        if (body.empty()) throw SyntaxError("SPEC line has no formula", line_no, 1);
        entry.source_text = body;
        entry.formula = Parser(body, line_no).parse();
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace ctlmc
