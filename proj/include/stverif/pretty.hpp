#pragma once

// Canonical printer. print(parse(text)) must reparse to a structurally
// identical unit; generated sources (harnesses, monitors) use the expression
// printer so they always round-trip through the front end.

#include <sstream>
#include <string>

#include "stverif/ast.hpp"

namespace stverif {

namespace detail {

inline int precedence(BinOp op) {
    switch (op) {
    case BinOp::Implies: return 0;
    case BinOp::Or: return 1;
    case BinOp::Xor: return 2;
    case BinOp::And: return 3;
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 4;
    case BinOp::Add:
    case BinOp::Sub: return 5;
    case BinOp::Mul:
    case BinOp::Div: return 6;
    }
    return 0;
}

inline const char* op_text(BinOp op) {
    switch (op) {
    case BinOp::And: return "AND";
    case BinOp::Or: return "OR";
    case BinOp::Xor: return "XOR";
    case BinOp::Implies: return "-->";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "<>";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    }
    return "?";
}

inline void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::BoolLit>) {
                os << (n.value ? "TRUE" : "FALSE");
            } else if constexpr (std::is_same_v<T, Expr::IntLit>) {
                os << n.value;
            } else if constexpr (std::is_same_v<T, Expr::TimeLit>) {
                os << "T#" << n.ms << "ms";
            } else if constexpr (std::is_same_v<T, Expr::VarRef>) {
                for (size_t i = 0; i < n.path.size(); ++i) {
                    if (i) os << '.';
                    os << n.path[i];
                }
            } else if constexpr (std::is_same_v<T, Expr::Unary>) {
                bool paren = parent_prec > 7;
                if (paren) os << '(';
                os << (n.op == UnOp::Not ? "NOT " : "-");
                print_expr(os, *n.operand, 7);
                if (paren) os << ')';
            } else {
                int prec = precedence(n.op);
                bool paren = prec < parent_prec;
                if (paren) os << '(';
                // Comparisons and --> are non-associative to the left; force
                // parentheses on same-precedence children so the tree shape
                // survives reparsing.
                print_expr(os, *n.lhs, prec == 0 || prec == 4 ? prec + 1 : prec);
                os << ' ' << op_text(n.op) << ' ';
                print_expr(os, *n.rhs, prec == 0 ? prec : prec + 1);
                if (paren) os << ')';
            }
        },
        e.node);
}

} // namespace detail

inline std::string print_expr(const Expr& e) {
    std::ostringstream os;
    detail::print_expr(os, e, 0);
    return os.str();
}

inline std::string print_expr(const ExprPtr& e) { return print_expr(*e); }

namespace detail {

inline void print_stmts(std::ostream& os, const std::vector<Stmt>& body,
                        const std::vector<Pragma>* pragmas, int indent);

inline void print_pragma(std::ostream& os, const Pragma& p, int indent) {
    os << std::string(indent, ' ') << "//#";
    switch (p.kind) {
    case PragmaKind::Assert: os << "ASSERT"; break;
    case PragmaKind::Assume: os << "ASSUME"; break;
    case PragmaKind::Range: os << "RANGE"; break;
    }
    os << '(';
    if (p.kind == PragmaKind::Range)
        os << p.range_var << ", " << p.range_lo << ", " << p.range_hi;
    else
        print_expr(os, *p.expr, 0);
    os << ')';
    if (!p.name.empty()) os << " : " << p.name;
    os << ";\n";
}

inline void print_stmt(std::ostream& os, const Stmt& s, int indent) {
    std::string pad(indent, ' ');
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Stmt::Assign>) {
                os << pad;
                for (size_t i = 0; i < n.path.size(); ++i) {
                    if (i) os << '.';
                    os << n.path[i];
                }
                os << " := ";
                print_expr(os, *n.value, 0);
                os << ";\n";
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
                for (size_t i = 0; i < n.branches.size(); ++i) {
                    os << pad << (i == 0 ? "IF " : "ELSIF ");
                    print_expr(os, *n.branches[i].cond, 0);
                    os << " THEN\n";
                    print_stmts(os, n.branches[i].body, nullptr, indent + 4);
                }
                if (!n.else_body.empty()) {
                    os << pad << "ELSE\n";
                    print_stmts(os, n.else_body, nullptr, indent + 4);
                }
                os << pad << "END_IF;\n";
            } else {
                os << pad;
                for (size_t i = 0; i < n.path.size(); ++i) {
                    if (i) os << '.';
                    os << n.path[i];
                }
                os << '(';
                for (size_t i = 0; i < n.args.size(); ++i) {
                    if (i) os << ", ";
                    os << n.args[i].name << " := ";
                    print_expr(os, *n.args[i].value, 0);
                }
                os << ");\n";
            }
        },
        s.node);
}

inline void print_stmts(std::ostream& os, const std::vector<Stmt>& body,
                        const std::vector<Pragma>* pragmas, int indent) {
    for (size_t i = 0; i <= body.size(); ++i) {
        if (pragmas)
            for (const auto& p : *pragmas)
                if (p.location == static_cast<int>(i)) print_pragma(os, p, indent);
        if (i < body.size()) print_stmt(os, body[i], indent);
    }
}

} // namespace detail

inline std::string print_unit(const SourceUnit& unit) {
    std::ostringstream os;
    bool first = true;
    for (const auto& db : unit.instances) {
        if (!first) os << '\n';
        first = false;
        os << "DATA_BLOCK \"" << db.instance << "\" " << db.block << "\nBEGIN\nEND_DATA_BLOCK\n";
    }
    for (const auto& fb : unit.blocks) {
        if (!first) os << '\n';
        first = false;
        os << "FUNCTION_BLOCK " << fb.name << '\n';
        // Contiguous runs of one section each, preserving declaration order.
        auto header = [](VarSection s) {
            return s == VarSection::Input ? "VAR_INPUT" : s == VarSection::Output ? "VAR_OUTPUT" : "VAR";
        };
        for (size_t i = 0; i < fb.vars.size();) {
            VarSection s = fb.vars[i].section;
            os << "    " << header(s) << '\n';
            for (; i < fb.vars.size() && fb.vars[i].section == s; ++i) {
                const VarDecl& v = fb.vars[i];
                os << "        " << v.name << " : " << ty_name(v.type);
                if (v.init) {
                    os << " := ";
                    if (v.type == Ty::Bool)
                        os << (*v.init ? "TRUE" : "FALSE");
                    else if (v.type == Ty::Time)
                        os << "T#" << *v.init << "ms";
                    else
                        os << *v.init;
                }
                os << ";\n";
            }
            os << "    END_VAR\n";
        }
        os << "BEGIN\n";
        detail::print_stmts(os, fb.body, &fb.pragmas, 4);
        os << "END_FUNCTION_BLOCK\n";
    }
    return os.str();
}

} // namespace stverif
