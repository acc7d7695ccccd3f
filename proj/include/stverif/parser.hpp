#pragma once

// Recursive-descent parser for the SCL subset: FUNCTION_BLOCK / DATA_BLOCK
// declarations, IF/ELSIF/ELSE, assignments, FB calls with named arguments,
// and //# pragmas between statements. Anything outside the subset is a
// SyntaxError.

#include <string>
#include <vector>

#include "stverif/ast.hpp"

namespace stverif {

class Parser {
  public:
    Parser(std::vector<Token> tokens, std::string path)
        : toks_(std::move(tokens)), path_(std::move(path)) {}

    SourceUnit run(std::string text) {
        SourceUnit unit;
        unit.path = path_;
        unit.text = std::move(text);
        while (!at(Tok::Eof)) {
            if (at(Tok::KwFunctionBlock))
                unit.blocks.push_back(function_block());
            else if (at(Tok::KwDataBlock))
                unit.instances.push_back(data_block());
            else
                expected("FUNCTION_BLOCK or DATA_BLOCK");
        }
        if (!unit.blocks.empty() && !unit.instances.empty())
            unit.kind = UnitKind::Mixed;
        else if (!unit.instances.empty())
            unit.kind = UnitKind::DataBlock;
        else
            unit.kind = UnitKind::FunctionBlock;
        return unit;
    }

    // Parses a standalone expression (pragma bodies, requirement guards).
    ExprPtr expression_only() {
        ExprPtr e = expr();
        if (!at(Tok::Eof)) expected("end of expression");
        return e;
    }

  private:
    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }
    Token take() { return toks_[pos_++]; }
    Token expect(Tok k, const char* what) {
        if (!at(k)) expected(what);
        return take();
    }
    [[noreturn]] void expected(const std::string& what) {
        fail(path_, cur().line, cur().col, "SyntaxError", "expected " + what);
    }

    FunctionBlockDecl function_block() {
        FunctionBlockDecl fb;
        Token kw = take();
        fb.line = kw.line;
        fb.col = kw.col;
        fb.name = expect(Tok::Ident, "function block name").text;
        while (at(Tok::KwVar) || at(Tok::KwVarInput) || at(Tok::KwVarOutput)) var_section(fb);
        expect(Tok::KwBegin, "BEGIN");
        fb.body = statements(fb, /*stop=*/Tok::KwEndFunctionBlock);
        expect(Tok::KwEndFunctionBlock, "END_FUNCTION_BLOCK");
        return fb;
    }

    void var_section(FunctionBlockDecl& fb) {
        Token kw = take();
        VarSection section = kw.kind == Tok::KwVarInput    ? VarSection::Input
                             : kw.kind == Tok::KwVarOutput ? VarSection::Output
                                                           : VarSection::Local;
        while (!at(Tok::KwEndVar)) {
            VarDecl v;
            Token name = expect(Tok::Ident, "variable name");
            v.name = name.text;
            v.line = name.line;
            v.col = name.col;
            v.section = section;
            expect(Tok::Colon, "':'");
            if (at(Tok::KwBool))
                v.type = Ty::Bool;
            else if (at(Tok::KwInt))
                v.type = Ty::Int;
            else if (at(Tok::KwTime))
                v.type = Ty::Time;
            else if (at(Tok::KwTon))
                v.type = Ty::Ton;
            else if (at(Tok::KwCtud))
                v.type = Ty::Ctud;
            else
                expected("type (BOOL, INT, TIME, TON, CTUD)");
            take();
            if (at(Tok::Assign)) {
                take();
                v.init = literal_value(v.type);
            }
            expect(Tok::Semi, "';'");
            fb.vars.push_back(std::move(v));
        }
        take(); // END_VAR
    }

    long long literal_value(Ty declared) {
        bool neg = false;
        if (at(Tok::Minus)) {
            take();
            neg = true;
        }
        if (at(Tok::BoolLit)) {
            if (declared != Ty::Bool || neg) expected("literal matching the declared type");
            return take().value;
        }
        if (at(Tok::IntLit)) {
            if (declared != Ty::Int && declared != Ty::Time)
                expected("literal matching the declared type");
            long long v = take().value;
            return neg ? -v : v;
        }
        if (at(Tok::TimeLit)) {
            if (declared != Ty::Time || neg) expected("literal matching the declared type");
            return take().value;
        }
        expected("initializer literal");
    }

    DataBlockDecl data_block() {
        DataBlockDecl db;
        Token kw = take();
        db.line = kw.line;
        db.col = kw.col;
        db.instance = expect(Tok::Ident, "instance name").text;
        db.block = expect(Tok::Ident, "function block name").text;
        expect(Tok::KwBegin, "BEGIN");
        expect(Tok::KwEndDataBlock, "END_DATA_BLOCK");
        return db;
    }

    // Statement list. Pragmas record the index of the statement they precede.
    std::vector<Stmt> statements(FunctionBlockDecl& fb, Tok stop, bool top_level = true) {
        std::vector<Stmt> body;
        for (;;) {
            while (at(Tok::Pragma)) {
                if (!top_level)
                    fail(path_, cur().line, cur().col, "SyntaxError",
                         "pragmas are only allowed between top-level statements of a block");
                fb.pragmas.push_back(pragma(static_cast<int>(body.size())));
            }
            if (at(stop) || at(Tok::KwElsif) || at(Tok::KwElse) || at(Tok::KwEndIf) ||
                at(Tok::Eof))
                return body;
            body.push_back(statement(fb));
        }
    }

    Pragma pragma(int location) {
        Token t = take();
        Pragma p;
        p.kind = t.pragma_kind;
        p.name = t.pragma_name;
        p.location = location;
        p.line = t.line;
        p.col = t.col;
        if (p.kind == PragmaKind::Range) {
            Parser sub(lex(t.pragma_body, path_), path_);
            sub.parse_range_body(p);
        } else {
            if (p.name.empty())
                fail(path_, t.line, t.col, "SyntaxError", "pragma requires a ': name' suffix");
            Parser sub(lex(t.pragma_body, path_), path_);
            p.expr = sub.expression_only();
        }
        return p;
    }

    void parse_range_body(Pragma& p) {
        p.range_var = expect(Tok::Ident, "variable name").text;
        expect(Tok::Comma, "','");
        p.range_lo = signed_int();
        expect(Tok::Comma, "','");
        p.range_hi = signed_int();
        if (!at(Tok::Eof)) expected("end of RANGE pragma");
    }

    long long signed_int() {
        bool neg = false;
        if (at(Tok::Minus)) {
            take();
            neg = true;
        }
        long long v = expect(Tok::IntLit, "integer").value;
        return neg ? -v : v;
    }

    Stmt statement(FunctionBlockDecl& fb) {
        if (at(Tok::KwIf)) return if_statement(fb);
        if (at(Tok::Ident)) return assign_or_call();
        expected("statement");
    }

    Stmt if_statement(FunctionBlockDecl& fb) {
        Stmt s;
        Token kw = take();
        s.line = kw.line;
        s.col = kw.col;
        Stmt::If node;
        for (;;) {
            Stmt::Branch br;
            br.cond = expr();
            expect(Tok::KwThen, "THEN");
            br.body = statements(fb, Tok::KwEndIf, /*top_level=*/false);
            node.branches.push_back(std::move(br));
            if (at(Tok::KwElsif)) {
                take();
                continue;
            }
            break;
        }
        if (at(Tok::KwElse)) {
            take();
            node.else_body = statements(fb, Tok::KwEndIf, /*top_level=*/false);
        }
        expect(Tok::KwEndIf, "END_IF");
        expect(Tok::Semi, "';'");
        s.node = std::move(node);
        return s;
    }

    std::vector<std::string> dotted_path() {
        std::vector<std::string> path;
        path.push_back(expect(Tok::Ident, "identifier").text);
        while (at(Tok::Dot)) {
            take();
            path.push_back(expect(Tok::Ident, "identifier").text);
        }
        return path;
    }

    Stmt assign_or_call() {
        Stmt s;
        s.line = cur().line;
        s.col = cur().col;
        std::vector<std::string> path = dotted_path();
        if (at(Tok::LParen)) {
            take();
            Stmt::Call call;
            call.path = std::move(path);
            if (!at(Tok::RParen)) {
                for (;;) {
                    Stmt::NamedArg arg;
                    arg.name = expect(Tok::Ident, "argument name").text;
                    expect(Tok::Assign, "':='");
                    arg.value = expr();
                    call.args.push_back(std::move(arg));
                    if (at(Tok::Comma)) {
                        take();
                        continue;
                    }
                    break;
                }
            }
            expect(Tok::RParen, "')'");
            expect(Tok::Semi, "';'");
            s.node = std::move(call);
            return s;
        }
        expect(Tok::Assign, "':=' or '('");
        Stmt::Assign asg;
        asg.path = std::move(path);
        asg.value = expr();
        expect(Tok::Semi, "';'");
        s.node = std::move(asg);
        return s;
    }

    // Precedence, loosest first: -->  OR  XOR  AND  comparisons  +/-  */   unary.
    ExprPtr expr() { return implies(); }

    ExprPtr implies() {
        ExprPtr lhs = disjunction();
        if (at(Tok::Implies)) {
            Token op = take();
            ExprPtr rhs = implies(); // right associative
            return make_expr(Expr::Binary{BinOp::Implies, lhs, rhs}, op.line, op.col);
        }
        return lhs;
    }

    ExprPtr disjunction() {
        ExprPtr lhs = exclusive();
        while (at(Tok::KwOr)) {
            Token op = take();
            lhs = make_expr(Expr::Binary{BinOp::Or, lhs, exclusive()}, op.line, op.col);
        }
        return lhs;
    }

    ExprPtr exclusive() {
        ExprPtr lhs = conjunction();
        while (at(Tok::KwXor)) {
            Token op = take();
            lhs = make_expr(Expr::Binary{BinOp::Xor, lhs, conjunction()}, op.line, op.col);
        }
        return lhs;
    }

    ExprPtr conjunction() {
        ExprPtr lhs = comparison();
        while (at(Tok::KwAnd)) {
            Token op = take();
            lhs = make_expr(Expr::Binary{BinOp::And, lhs, comparison()}, op.line, op.col);
        }
        return lhs;
    }

    ExprPtr comparison() {
        ExprPtr lhs = additive();
        BinOp op;
        switch (cur().kind) {
        case Tok::Eq: op = BinOp::Eq; break;
        case Tok::Ne: op = BinOp::Ne; break;
        case Tok::Lt: op = BinOp::Lt; break;
        case Tok::Le: op = BinOp::Le; break;
        case Tok::Gt: op = BinOp::Gt; break;
        case Tok::Ge: op = BinOp::Ge; break;
        default: return lhs;
        }
        Token t = take();
        return make_expr(Expr::Binary{op, lhs, additive()}, t.line, t.col);
    }

    ExprPtr additive() {
        ExprPtr lhs = multiplicative();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            Token op = take();
            BinOp b = op.kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
            lhs = make_expr(Expr::Binary{b, lhs, multiplicative()}, op.line, op.col);
        }
        return lhs;
    }

    ExprPtr multiplicative() {
        ExprPtr lhs = unary();
        while (at(Tok::Star) || at(Tok::Slash)) {
            Token op = take();
            BinOp b = op.kind == Tok::Star ? BinOp::Mul : BinOp::Div;
            lhs = make_expr(Expr::Binary{b, lhs, unary()}, op.line, op.col);
        }
        return lhs;
    }

    ExprPtr unary() {
        if (at(Tok::KwNot)) {
            Token op = take();
            return make_expr(Expr::Unary{UnOp::Not, unary()}, op.line, op.col);
        }
        if (at(Tok::Minus)) {
            Token op = take();
            return make_expr(Expr::Unary{UnOp::Neg, unary()}, op.line, op.col);
        }
        return primary();
    }

    ExprPtr primary() {
        Token t = cur();
        switch (t.kind) {
        case Tok::BoolLit:
            take();
            return make_expr(Expr::BoolLit{t.value != 0}, t.line, t.col);
        case Tok::IntLit:
            take();
            return make_expr(Expr::IntLit{t.value}, t.line, t.col);
        case Tok::TimeLit:
            take();
            return make_expr(Expr::TimeLit{t.value}, t.line, t.col);
        case Tok::Ident:
            return make_expr(Expr::VarRef{dotted_path()}, t.line, t.col);
        case Tok::LParen: {
            take();
            ExprPtr e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        default: expected("expression");
        }
    }

    std::vector<Token> toks_;
    std::string path_;
    size_t pos_ = 0;
};

inline SourceUnit parse(const std::string& text, const std::string& path = "") {
    return Parser(lex(text, path), path).run(text);
}

inline ExprPtr parse_expression(const std::string& text, const std::string& path = "") {
    return Parser(lex(text, path), path).expression_only();
}

} // namespace stverif
