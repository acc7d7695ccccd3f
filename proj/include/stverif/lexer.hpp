#pragma once

// Tokenizer for the SCL subset. Keywords are case-insensitive, identifiers
// case-sensitive; quoted identifiers ("name") lex as ordinary identifiers.
// Comments are dropped except //# pragma comments, which become Pragma tokens
// attached to the position of the token that follows them.

#include <cctype>
#include <deque>
#include <string>
#include <vector>

#include "stverif/diag.hpp"

namespace stverif {

enum class Tok {
    Ident,
    IntLit,
    TimeLit,
    BoolLit,
    Assign, // :=
    Colon,
    Semi,
    Comma,
    Dot,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Implies, // -->
    KwFunctionBlock,
    KwEndFunctionBlock,
    KwDataBlock,
    KwEndDataBlock,
    KwVar,
    KwVarInput,
    KwVarOutput,
    KwEndVar,
    KwBegin,
    KwIf,
    KwThen,
    KwElsif,
    KwElse,
    KwEndIf,
    KwNot,
    KwAnd,
    KwOr,
    KwXor,
    KwBool,
    KwInt,
    KwTime,
    KwTon,
    KwCtud,
    Pragma,
    Eof,
};

enum class PragmaKind { Assert, Assume, Range };

struct Token {
    Tok kind = Tok::Eof;
    std::string text; // identifier spelling (quotes stripped)
    long long value = 0; // IntLit value, TimeLit milliseconds, BoolLit 0/1
    int line = 1;
    int col = 1;
    // Pragma payload
    PragmaKind pragma_kind = PragmaKind::Assert;
    std::string pragma_body; // text between the parentheses
    std::string pragma_name; // after the ':', may be empty for RANGE
    int body_line = 0;
    int body_col = 0;
};

namespace detail {

inline std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

struct Keyword {
    const char* word;
    Tok tok;
};

inline const Keyword kKeywords[] = {
    {"FUNCTION_BLOCK", Tok::KwFunctionBlock},
    {"END_FUNCTION_BLOCK", Tok::KwEndFunctionBlock},
    {"DATA_BLOCK", Tok::KwDataBlock},
    {"END_DATA_BLOCK", Tok::KwEndDataBlock},
    {"VAR_INPUT", Tok::KwVarInput},
    {"VAR_OUTPUT", Tok::KwVarOutput},
    {"VAR", Tok::KwVar},
    {"END_VAR", Tok::KwEndVar},
    {"BEGIN", Tok::KwBegin},
    {"IF", Tok::KwIf},
    {"THEN", Tok::KwThen},
    {"ELSIF", Tok::KwElsif},
    {"ELSE", Tok::KwElse},
    {"END_IF", Tok::KwEndIf},
    {"NOT", Tok::KwNot},
    {"AND", Tok::KwAnd},
    {"OR", Tok::KwOr},
    {"XOR", Tok::KwXor},
    {"BOOL", Tok::KwBool},
    {"INT", Tok::KwInt},
    {"TIME", Tok::KwTime},
    {"TON", Tok::KwTon},
    {"CTUD", Tok::KwCtud},
};

} // namespace detail

class Lexer {
  public:
    Lexer(std::string text, std::string path = "")
        : text_(std::move(text)), path_(std::move(path)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            Token t = next();
            bool done = t.kind == Tok::Eof;
            out.push_back(std::move(t));
            if (done) break;
        }
        return out;
    }

  private:
    char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char peek(size_t n = 1) const {
        return pos_ + n < text_.size() ? text_[pos_ + n] : '\0';
    }
    void advance() {
        if (cur() == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    [[noreturn]] void error(const std::string& code, const std::string& msg, int l, int c) {
        fail(path_, l, c, code, msg);
    }

    Token next() {
        skip_trivia();
        if (!pending_pragmas_.empty()) {
            Token t = pending_pragmas_.front();
            pending_pragmas_.pop_front();
            return t;
        }
        Token t;
        t.line = line_;
        t.col = col_;
        char c = cur();
        if (c == '\0') {
            t.kind = Tok::Eof;
            return t;
        }
        if ((c == 'T' || c == 't') && peek() == '#') return lex_time();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_word();
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_int();
        if (c == '"') return lex_quoted_ident();
        switch (c) {
        case ':':
            advance();
            if (cur() == '=') {
                advance();
                t.kind = Tok::Assign;
            } else {
                t.kind = Tok::Colon;
            }
            return t;
        case ';': advance(); t.kind = Tok::Semi; return t;
        case ',': advance(); t.kind = Tok::Comma; return t;
        case '.': advance(); t.kind = Tok::Dot; return t;
        case '(': advance(); t.kind = Tok::LParen; return t;
        case ')': advance(); t.kind = Tok::RParen; return t;
        case '+': advance(); t.kind = Tok::Plus; return t;
        case '*': advance(); t.kind = Tok::Star; return t;
        case '/': advance(); t.kind = Tok::Slash; return t;
        case '-':
            if (peek() == '-' && peek(2) == '>') {
                advance();
                advance();
                advance();
                t.kind = Tok::Implies;
            } else {
                advance();
                t.kind = Tok::Minus;
            }
            return t;
        case '=': advance(); t.kind = Tok::Eq; return t;
        case '<':
            advance();
            if (cur() == '>') {
                advance();
                t.kind = Tok::Ne;
            } else if (cur() == '=') {
                advance();
                t.kind = Tok::Le;
            } else {
                t.kind = Tok::Lt;
            }
            return t;
        case '>':
            advance();
            if (cur() == '=') {
                advance();
                t.kind = Tok::Ge;
            } else {
                t.kind = Tok::Gt;
            }
            return t;
        default:
            error("UnknownCharacter", std::string("unexpected character '") + c + "'", t.line,
                  t.col);
        }
    }

    // Whitespace and comments. A //# comment is parsed into a pragma token and
    // held until the scanner reaches the next real token, so the pragma's
    // reported position is that of the token following it.
    void skip_trivia() {
        for (;;) {
            char c = cur();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
                continue;
            }
            if (c == '/' && peek() == '/') {
                if (peek(2) == '#') {
                    lex_pragma_comment();
                } else {
                    while (cur() != '\0' && cur() != '\n') advance();
                }
                continue;
            }
            if (c == '(' && peek() == '*') {
                int l = line_, cl = col_;
                advance();
                advance();
                for (;;) {
                    if (cur() == '\0')
                        error("UnterminatedComment", "comment opened here is never closed", l, cl);
                    if (cur() == '*' && peek() == ')') {
                        advance();
                        advance();
                        break;
                    }
                    advance();
                }
                continue;
            }
            break;
        }
        for (Token& p : pending_pragmas_) {
            p.line = line_;
            p.col = col_;
        }
    }

    // //#KIND(body) [: name] [;]  -- single line
    void lex_pragma_comment() {
        int start_line = line_, start_col = col_;
        advance(); // /
        advance(); // /
        advance(); // #
        while (cur() == ' ' || cur() == '\t') advance();
        std::string word;
        while (std::isalpha(static_cast<unsigned char>(cur())))
            word += static_cast<char>(std::toupper(static_cast<unsigned char>(cur()))), advance();
        Token t;
        t.kind = Tok::Pragma;
        if (word == "ASSERT")
            t.pragma_kind = PragmaKind::Assert;
        else if (word == "ASSUME")
            t.pragma_kind = PragmaKind::Assume;
        else if (word == "RANGE")
            t.pragma_kind = PragmaKind::Range;
        else
            error("SyntaxError", "unknown pragma '//#" + word + "'", start_line, start_col);
        while (cur() == ' ' || cur() == '\t') advance();
        if (cur() != '(')
            error("SyntaxError", "expected '(' after pragma keyword", line_, col_);
        advance();
        t.body_line = line_;
        t.body_col = col_;
        int depth = 1;
        std::string body;
        while (depth > 0) {
            char c = cur();
            if (c == '\0' || c == '\n')
                error("SyntaxError", "unterminated pragma body", start_line, start_col);
            if (c == '(') ++depth;
            if (c == ')') {
                --depth;
                if (depth == 0) {
                    advance();
                    break;
                }
            }
            body += c;
            advance();
        }
        t.pragma_body = body;
        while (cur() == ' ' || cur() == '\t') advance();
        if (cur() == ':') {
            advance();
            while (cur() == ' ' || cur() == '\t') advance();
            if (!std::isalpha(static_cast<unsigned char>(cur())) && cur() != '_')
                error("SyntaxError", "expected pragma name after ':'", line_, col_);
            std::string name;
            while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_')
                name += cur(), advance();
            t.pragma_name = name;
        }
        while (cur() == ' ' || cur() == '\t') advance();
        if (cur() == ';') advance();
        while (cur() == ' ' || cur() == '\t' || cur() == '\r') advance();
        if (cur() != '\0' && cur() != '\n')
            error("SyntaxError", "trailing text after pragma", line_, col_);
        // Position is attached later, at the next non-trivia character.
        pending_pragmas_.push_back(t);
    }

    Token lex_word() {
        Token t;
        t.line = line_;
        t.col = col_;
        std::string w;
        while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_')
            w += cur(), advance();
        std::string up = detail::upper(w);
        if (up == "TRUE" || up == "FALSE") {
            t.kind = Tok::BoolLit;
            t.value = up == "TRUE" ? 1 : 0;
            return t;
        }
        for (const auto& k : detail::kKeywords) {
            if (up == k.word) {
                t.kind = k.tok;
                return t;
            }
        }
        t.kind = Tok::Ident;
        t.text = w;
        return t;
    }

    Token lex_int() {
        Token t;
        t.line = line_;
        t.col = col_;
        t.kind = Tok::IntLit;
        long long v = 0;
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
            v = v * 10 + (cur() - '0');
            advance();
        }
        t.value = v;
        return t;
    }

    // T#<digits><unit>, unit in {ms, s}
    Token lex_time() {
        Token t;
        t.line = line_;
        t.col = col_;
        t.kind = Tok::TimeLit;
        advance(); // T
        advance(); // #
        if (!std::isdigit(static_cast<unsigned char>(cur())))
            error("UnknownCharacter", "expected digits in TIME literal", line_, col_);
        long long v = 0;
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
            v = v * 10 + (cur() - '0');
            advance();
        }
        std::string unit;
        while (std::isalpha(static_cast<unsigned char>(cur()))) unit += cur(), advance();
        unit = detail::upper(unit);
        if (unit == "MS")
            t.value = v;
        else if (unit == "S")
            t.value = v * 1000;
        else
            error("UnknownCharacter", "unknown TIME unit '" + unit + "'", t.line, t.col);
        return t;
    }

    Token lex_quoted_ident() {
        Token t;
        t.line = line_;
        t.col = col_;
        t.kind = Tok::Ident;
        advance(); // opening quote
        std::string w;
        while (cur() != '"') {
            if (cur() == '\0' || cur() == '\n')
                error("UnknownCharacter", "unterminated quoted identifier", t.line, t.col);
            w += cur();
            advance();
        }
        advance(); // closing quote
        t.text = w;
        return t;
    }

    std::string text_;
    std::string path_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::deque<Token> pending_pragmas_;
};

inline std::vector<Token> lex(const std::string& text, const std::string& path = "") {
    return Lexer(text, path).run();
}

} // namespace stverif
