#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stverif/lexer.hpp"

namespace stverif {

// Scalar types plus the two built-in function blocks usable as VAR members.
enum class Ty { Bool, Int, Time, Ton, Ctud };

inline const char* ty_name(Ty t) {
    switch (t) {
    case Ty::Bool: return "BOOL";
    case Ty::Int: return "INT";
    case Ty::Time: return "TIME";
    case Ty::Ton: return "TON";
    case Ty::Ctud: return "CTUD";
    }
    return "?";
}

enum class UnOp { Not, Neg };
enum class BinOp { And, Or, Xor, Implies, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    struct BoolLit {
        bool value;
    };
    struct IntLit {
        long long value;
    };
    struct TimeLit {
        long long ms;
    };
    // Dotted reference: plain variable, instance field, or timer field
    // ("inst".ERROR, ET.Q, "inst".ET.Q).
    struct VarRef {
        std::vector<std::string> path;
    };
    struct Unary {
        UnOp op;
        ExprPtr operand;
    };
    struct Binary {
        BinOp op;
        ExprPtr lhs;
        ExprPtr rhs;
    };

    std::variant<BoolLit, IntLit, TimeLit, VarRef, Unary, Binary> node;
    int line = 0;
    int col = 0;
};

inline ExprPtr make_expr(decltype(Expr::node) node, int line = 0, int col = 0) {
    auto e = std::make_shared<Expr>();
    e->node = std::move(node);
    e->line = line;
    e->col = col;
    return e;
}

struct Stmt {
    struct Assign {
        std::vector<std::string> path;
        ExprPtr value;
    };
    struct NamedArg {
        std::string name;
        ExprPtr value;
    };
    // FB instance or built-in call with named arguments; a two-segment path
    // `Block.instance` targets a DATA_BLOCK instance of that block.
    struct Call {
        std::vector<std::string> path;
        std::vector<NamedArg> args;
    };
    struct Branch {
        ExprPtr cond;
        std::vector<Stmt> body;
    };
    struct If {
        std::vector<Branch> branches; // IF plus any ELSIF arms, in order
        std::vector<Stmt> else_body;
    };

    std::variant<Assign, If, Call> node;
    int line = 0;
    int col = 0;
};

struct Pragma {
    PragmaKind kind = PragmaKind::Assert;
    std::string name;  // after ':' (empty for RANGE)
    ExprPtr expr;      // ASSERT/ASSUME condition
    std::string range_var;
    long long range_lo = 0;
    long long range_hi = 0;
    int location = 0; // statement index in the enclosing block body
    int line = 0;
    int col = 0;
};

enum class VarSection { Input, Local, Output };

struct VarDecl {
    std::string name;
    Ty type = Ty::Bool;
    std::optional<long long> init; // BOOL 0/1, INT value, TIME ms
    VarSection section = VarSection::Local;
    long long dom_lo = 0; // INT domain, annotated by the type checker
    long long dom_hi = 255;
    bool has_range_pragma = false;
    int line = 0;
    int col = 0;
};

struct FunctionBlockDecl {
    std::string name;
    std::vector<VarDecl> vars; // declaration order, all sections
    std::vector<Stmt> body;
    std::vector<Pragma> pragmas; // source order
    int line = 0;
    int col = 0;

    const VarDecl* find_var(const std::string& n) const {
        for (const auto& v : vars)
            if (v.name == n) return &v;
        return nullptr;
    }
    std::vector<const VarDecl*> section(VarSection s) const {
        std::vector<const VarDecl*> out;
        for (const auto& v : vars)
            if (v.section == s) out.push_back(&v);
        return out;
    }
};

struct DataBlockDecl {
    std::string instance;
    std::string block;
    int line = 0;
    int col = 0;
};

enum class UnitKind { FunctionBlock, DataBlock, Mixed };

struct SourceUnit {
    std::string path;
    std::string text;
    UnitKind kind = UnitKind::FunctionBlock;
    std::vector<FunctionBlockDecl> blocks;
    std::vector<DataBlockDecl> instances;
};

// ---- structural equality (used by the print/reparse round-trip checks) ----

bool equal(const Expr& a, const Expr& b);
bool equal(const Stmt& a, const Stmt& b);

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return equal(*a, *b);
}

inline bool equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!equal(a[i], b[i])) return false;
    return true;
}

inline bool equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Expr::BoolLit>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, Expr::IntLit>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, Expr::TimeLit>) {
                return x.ms == y.ms;
            } else if constexpr (std::is_same_v<T, Expr::VarRef>) {
                return x.path == y.path;
            } else if constexpr (std::is_same_v<T, Expr::Unary>) {
                return x.op == y.op && equal(x.operand, y.operand);
            } else {
                return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
            }
        },
        a.node);
}

inline bool equal(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Stmt::Assign>) {
                return x.path == y.path && equal(x.value, y.value);
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
                if (x.branches.size() != y.branches.size()) return false;
                for (size_t i = 0; i < x.branches.size(); ++i) {
                    if (!equal(x.branches[i].cond, y.branches[i].cond)) return false;
                    if (!equal(x.branches[i].body, y.branches[i].body)) return false;
                }
                return equal(x.else_body, y.else_body);
            } else {
                if (x.path != y.path || x.args.size() != y.args.size()) return false;
                for (size_t i = 0; i < x.args.size(); ++i) {
                    if (x.args[i].name != y.args[i].name) return false;
                    if (!equal(x.args[i].value, y.args[i].value)) return false;
                }
                return true;
            }
        },
        a.node);
}

inline bool equal(const Pragma& a, const Pragma& b) {
    return a.kind == b.kind && a.name == b.name && equal(a.expr, b.expr) &&
           a.range_var == b.range_var && a.range_lo == b.range_lo && a.range_hi == b.range_hi &&
           a.location == b.location;
}

inline bool equal(const FunctionBlockDecl& a, const FunctionBlockDecl& b) {
    if (a.name != b.name || a.vars.size() != b.vars.size() || a.pragmas.size() != b.pragmas.size())
        return false;
    for (size_t i = 0; i < a.vars.size(); ++i) {
        const VarDecl &x = a.vars[i], &y = b.vars[i];
        if (x.name != y.name || x.type != y.type || x.init != y.init || x.section != y.section)
            return false;
    }
    for (size_t i = 0; i < a.pragmas.size(); ++i)
        if (!equal(a.pragmas[i], b.pragmas[i])) return false;
    return equal(a.body, b.body);
}

inline bool equal(const SourceUnit& a, const SourceUnit& b) {
    if (a.blocks.size() != b.blocks.size() || a.instances.size() != b.instances.size())
        return false;
    for (size_t i = 0; i < a.blocks.size(); ++i)
        if (!equal(a.blocks[i], b.blocks[i])) return false;
    for (size_t i = 0; i < a.instances.size(); ++i)
        if (a.instances[i].instance != b.instances[i].instance ||
            a.instances[i].block != b.instances[i].block)
            return false;
    return true;
}

} // namespace stverif
