#pragma once

// Name resolution and type checking over parsed units. Produces a
// TypedProgram: every identifier bound, every expression typed over
// {BOOL, INT, TIME}, INT variables annotated with their enumeration domain
// (default 0..255, overridable with //#RANGE), duplicate and dangling
// declarations rejected.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stverif/ast.hpp"

namespace stverif {

struct TypedProgram {
    std::vector<FunctionBlockDecl> blocks;
    std::vector<DataBlockDecl> instances;

    const FunctionBlockDecl* find_block(const std::string& name) const {
        for (const auto& b : blocks)
            if (b.name == name) return &b;
        return nullptr;
    }
    const DataBlockDecl* find_instance(const std::string& name) const {
        for (const auto& i : instances)
            if (i.instance == name) return &i;
        return nullptr;
    }

    // All pragmas, flattened in (block, source) order.
    std::vector<std::pair<std::string, const Pragma*>> all_pragmas() const {
        std::vector<std::pair<std::string, const Pragma*>> out;
        for (const auto& b : blocks)
            for (const auto& p : b.pragmas) out.emplace_back(b.name, &p);
        return out;
    }

    // Blocks that no other block calls; the natural verification entries.
    std::vector<std::string> entry_candidates() const;
};

// Built-in function block interfaces. `writable` fields are assignable
// through call arguments, `readable` through dotted access.
struct BuiltinField {
    const char* name;
    Ty type;
    bool writable;
    bool readable;
};

inline const std::vector<BuiltinField>& builtin_fields(Ty kind) {
    static const std::vector<BuiltinField> ton = {
        {"IN", Ty::Bool, true, false},
        {"PT", Ty::Time, true, false},
        {"ET", Ty::Time, false, true},
        {"Q", Ty::Bool, false, true},
    };
    static const std::vector<BuiltinField> ctud = {
        {"CU", Ty::Bool, true, false}, {"CD", Ty::Bool, true, false},
        {"R", Ty::Bool, true, false},  {"LD", Ty::Bool, true, false},
        {"PV", Ty::Int, true, false},  {"CV", Ty::Int, false, true},
        {"QU", Ty::Bool, false, true}, {"QD", Ty::Bool, false, true},
    };
    static const std::vector<BuiltinField> none;
    if (kind == Ty::Ton) return ton;
    if (kind == Ty::Ctud) return ctud;
    return none;
}

inline const BuiltinField* find_builtin_field(Ty kind, const std::string& name) {
    for (const auto& f : builtin_fields(kind))
        if (name == f.name) return &f;
    return nullptr;
}

inline bool is_builtin_type(Ty t) { return t == Ty::Ton || t == Ty::Ctud; }
inline bool is_scalar_type(Ty t) { return !is_builtin_type(t); }

// A resolved dotted path.
struct ResolvedRef {
    std::string instance;  // global DATA_BLOCK instance, empty when local
    std::string var;       // variable within the owning block
    std::string field;     // built-in field, empty for scalars
    Ty type = Ty::Bool;    // scalar type of the reference
    Ty var_type = Ty::Bool;
    VarSection section = VarSection::Local;
    const FunctionBlockDecl* owner = nullptr;
    const VarDecl* decl = nullptr;
};

class TypeChecker {
  public:
    explicit TypeChecker(std::vector<SourceUnit> units) : units_(std::move(units)) {}

    TypedProgram run() {
        collect();
        for (auto& fb : program_.blocks) check_block(fb);
        for (const auto& db : program_.instances) {
            if (!program_.find_block(db.block))
                diag(db.line, db.col, "UnresolvedIdentifier",
                     "DATA_BLOCK '" + db.instance + "' instantiates unknown block '" + db.block +
                         "'");
        }
        if (!diags_.empty()) throw StError(diags_);
        return std::move(program_);
    }

    // Shared resolution helpers, also used by the lowering and the pragmatic
    // front ends (case files, requirement guards).
    static ResolvedRef resolve_path(const std::vector<std::string>& path,
                                    const FunctionBlockDecl& scope, const TypedProgram& program,
                                    const std::string& diag_path, int line, int col);
    static Ty type_of(const Expr& e, const FunctionBlockDecl& scope, const TypedProgram& program,
                      const std::string& diag_path);

  private:
    void diag(int line, int col, std::string code, std::string msg) {
        diags_.push_back(Diagnostic{cur_path_, line, col, std::move(code), std::move(msg)});
    }

    void collect() {
        for (auto& u : units_) {
            cur_path_ = u.path;
            for (auto& fb : u.blocks) {
                if (program_.find_block(fb.name))
                    diag(fb.line, fb.col, "DuplicateDeclaration",
                         "function block '" + fb.name + "' is declared twice");
                else
                    program_.blocks.push_back(fb);
                block_paths_[fb.name] = u.path;
            }
            for (auto& db : u.instances) {
                if (program_.find_instance(db.instance))
                    diag(db.line, db.col, "DuplicateDeclaration",
                         "instance '" + db.instance + "' is declared twice");
                else
                    program_.instances.push_back(db);
            }
        }
        if (!diags_.empty()) throw StError(diags_);
    }

    void check_block(FunctionBlockDecl& fb) {
        cur_path_ = block_paths_[fb.name];
        std::set<std::string> seen;
        for (const auto& v : fb.vars) {
            if (!seen.insert(v.name).second)
                diag(v.line, v.col, "DuplicateDeclaration",
                     "variable '" + v.name + "' is declared twice in '" + fb.name + "'");
            if (is_builtin_type(v.type) && v.section != VarSection::Local)
                diag(v.line, v.col, "TypeMismatch",
                     "built-in instance '" + v.name + "' must be declared in a VAR section");
        }
        apply_range_pragmas(fb);
        for (const auto& s : fb.body) check_stmt(s, fb);
        std::set<std::string> pragma_names;
        for (const auto& p : fb.pragmas) {
            if (p.kind == PragmaKind::Range) continue;
            if (!pragma_names.insert(p.name).second)
                diag(p.line, p.col, "DuplicateDeclaration",
                     "pragma name '" + p.name + "' is used twice in '" + fb.name + "'");
            check_expr_is(*p.expr, Ty::Bool, fb);
        }
    }

    void apply_range_pragmas(FunctionBlockDecl& fb) {
        for (const auto& p : fb.pragmas) {
            if (p.kind != PragmaKind::Range) continue;
            VarDecl* target = nullptr;
            for (auto& v : fb.vars)
                if (v.name == p.range_var) target = &v;
            if (!target) {
                diag(p.line, p.col, "UnresolvedIdentifier",
                     "RANGE names unknown variable '" + p.range_var + "'");
                continue;
            }
            if (target->type != Ty::Int) {
                diag(p.line, p.col, "TypeMismatch",
                     "RANGE applies to INT variables, '" + p.range_var + "' is " +
                         ty_name(target->type));
                continue;
            }
            if (p.range_lo > p.range_hi)
                diag(p.line, p.col, "TypeMismatch", "RANGE bounds are reversed");
            target->dom_lo = p.range_lo;
            target->dom_hi = p.range_hi;
            target->has_range_pragma = true;
        }
    }

    void check_stmt(const Stmt& s, const FunctionBlockDecl& fb) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Stmt::Assign>) {
                    check_assign(n, s, fb);
                } else if constexpr (std::is_same_v<T, Stmt::If>) {
                    for (const auto& br : n.branches) {
                        check_expr_is(*br.cond, Ty::Bool, fb);
                        for (const auto& inner : br.body) check_stmt(inner, fb);
                    }
                    for (const auto& inner : n.else_body) check_stmt(inner, fb);
                } else {
                    check_call(n, s, fb);
                }
            },
            s.node);
    }

    void check_assign(const Stmt::Assign& n, const Stmt& s, const FunctionBlockDecl& fb) {
        try {
            ResolvedRef ref = resolve_path(n.path, fb, program_, cur_path_, s.line, s.col);
            if (!ref.field.empty()) {
                diag(s.line, s.col, "TypeMismatch",
                     "built-in field '" + ref.field + "' can only be set through a call argument");
                return;
            }
            if (!ref.instance.empty() && ref.section != VarSection::Input) {
                diag(s.line, s.col, "TypeMismatch",
                     "only VAR_INPUT fields of '" + ref.instance + "' may be assigned externally");
                return;
            }
            if (is_builtin_type(ref.type)) {
                diag(s.line, s.col, "TypeMismatch", "cannot assign to a built-in instance");
                return;
            }
            Ty value = type_of(*n.value, fb, program_, cur_path_);
            if (!assignable(ref.type, value))
                diag(s.line, s.col, "TypeMismatch",
                     std::string("cannot assign ") + ty_name(value) + " to " + ty_name(ref.type));
        } catch (const StError& e) {
            append(e);
        }
    }

    void check_call(const Stmt::Call& n, const Stmt& s, const FunctionBlockDecl& fb) {
        // Built-in local instance: ET(IN := ..., PT := ...)
        if (n.path.size() == 1) {
            const VarDecl* v = fb.find_var(n.path[0]);
            if (v && is_builtin_type(v->type)) {
                check_builtin_args(v->type, n, s, fb);
                return;
            }
        }
        // Block.instance() or instance() targeting a DATA_BLOCK.
        std::string inst_name;
        if (n.path.size() == 2) {
            const DataBlockDecl* db = program_.find_instance(n.path[1]);
            if (!db) {
                diag(s.line, s.col, "UnknownInstance",
                     "call targets unknown instance '" + n.path[1] + "'");
                return;
            }
            if (db->block != n.path[0]) {
                diag(s.line, s.col, "UnknownInstance",
                     "instance '" + db->instance + "' belongs to block '" + db->block + "', not '" +
                         n.path[0] + "'");
                return;
            }
            inst_name = db->instance;
        } else if (n.path.size() == 1) {
            if (!program_.find_instance(n.path[0])) {
                diag(s.line, s.col, "UnknownInstance",
                     "call targets unknown instance '" + n.path[0] + "'");
                return;
            }
            inst_name = n.path[0];
        } else {
            diag(s.line, s.col, "SyntaxError", "call path has too many segments");
            return;
        }
        const DataBlockDecl* db = program_.find_instance(inst_name);
        const FunctionBlockDecl* callee = program_.find_block(db->block);
        if (!callee) return; // reported while checking instances
        for (const auto& a : n.args) {
            const VarDecl* param = callee->find_var(a.name);
            if (!param || param->section != VarSection::Input) {
                diag(s.line, s.col, "UnresolvedIdentifier",
                     "'" + a.name + "' is not an input of '" + callee->name + "'");
                continue;
            }
            Ty value = type_of(*a.value, fb, program_, cur_path_);
            if (!assignable(param->type, value))
                diag(s.line, s.col, "TypeMismatch",
                     std::string("argument '") + a.name + "' expects " + ty_name(param->type) +
                         ", got " + ty_name(value));
        }
    }

    void check_builtin_args(Ty kind, const Stmt::Call& n, const Stmt& s,
                            const FunctionBlockDecl& fb) {
        for (const auto& a : n.args) {
            const BuiltinField* f = find_builtin_field(kind, a.name);
            if (!f || !f->writable) {
                diag(s.line, s.col, "UnresolvedIdentifier",
                     "'" + a.name + "' is not a settable " + ty_name(kind) + " input");
                continue;
            }
            Ty value = type_of(*a.value, fb, program_, cur_path_);
            if (!assignable(f->type, value))
                diag(s.line, s.col, "TypeMismatch",
                     std::string("argument '") + a.name + "' expects " + ty_name(f->type) +
                         ", got " + ty_name(value));
        }
    }

    void check_expr_is(const Expr& e, Ty want, const FunctionBlockDecl& fb) {
        try {
            Ty got = type_of(e, fb, program_, cur_path_);
            if (got != want)
                diag(e.line, e.col, "TypeMismatch",
                     std::string("expected ") + ty_name(want) + ", got " + ty_name(got));
        } catch (const StError& err) {
            append(err);
        }
    }

    static bool assignable(Ty target, Ty value) {
        if (target == value) return true;
        // INT millisecond values flow into TIME contexts (PT := 2*200).
        return target == Ty::Time && value == Ty::Int;
    }

    void append(const StError& e) {
        for (const auto& d : e.diagnostics()) diags_.push_back(d);
    }

    std::vector<SourceUnit> units_;
    TypedProgram program_;
    std::vector<Diagnostic> diags_;
    std::map<std::string, std::string> block_paths_;
    std::string cur_path_;
};

inline ResolvedRef TypeChecker::resolve_path(const std::vector<std::string>& path,
                                             const FunctionBlockDecl& scope,
                                             const TypedProgram& program,
                                             const std::string& diag_path, int line, int col) {
    ResolvedRef ref;
    size_t i = 0;
    const FunctionBlockDecl* owner = &scope;
    if (const VarDecl* v = scope.find_var(path[0])) {
        ref.var = v->name;
        ref.decl = v;
        ++i;
    } else if (const DataBlockDecl* db = program.find_instance(path[0])) {
        owner = program.find_block(db->block);
        if (!owner)
            fail(diag_path, line, col, "UnknownInstance",
                 "instance '" + db->instance + "' has no declared block");
        ref.instance = db->instance;
        ++i;
        if (i >= path.size())
            fail(diag_path, line, col, "TypeMismatch",
                 "instance '" + db->instance + "' used where a value is expected");
        const VarDecl* v = owner->find_var(path[i]);
        if (!v)
            fail(diag_path, line, col, "UnresolvedIdentifier",
                 "'" + path[i] + "' is not a field of '" + owner->name + "'");
        ref.var = v->name;
        ref.decl = v;
        ++i;
    } else {
        fail(diag_path, line, col, "UnresolvedIdentifier", "unknown identifier '" + path[0] + "'");
    }
    ref.owner = owner;
    ref.var_type = ref.decl->type;
    ref.type = ref.decl->type;
    ref.section = ref.decl->section;
    if (i < path.size()) {
        if (!is_builtin_type(ref.decl->type))
            fail(diag_path, line, col, "UnresolvedIdentifier",
                 "'" + ref.var + "' has no field '" + path[i] + "'");
        const BuiltinField* f = find_builtin_field(ref.decl->type, path[i]);
        if (!f || !f->readable)
            fail(diag_path, line, col, "UnresolvedIdentifier",
                 "'" + path[i] + "' is not a readable field of " + ty_name(ref.decl->type));
        ref.field = f->name;
        ref.type = f->type;
        ++i;
    }
    if (i < path.size())
        fail(diag_path, line, col, "UnresolvedIdentifier", "reference has trailing segments");
    return ref;
}

inline Ty TypeChecker::type_of(const Expr& e, const FunctionBlockDecl& scope,
                               const TypedProgram& program, const std::string& diag_path) {
    return std::visit(
        [&](const auto& n) -> Ty {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::BoolLit>) {
                return Ty::Bool;
            } else if constexpr (std::is_same_v<T, Expr::IntLit>) {
                return Ty::Int;
            } else if constexpr (std::is_same_v<T, Expr::TimeLit>) {
                return Ty::Time;
            } else if constexpr (std::is_same_v<T, Expr::VarRef>) {
                ResolvedRef ref = resolve_path(n.path, scope, program, diag_path, e.line, e.col);
                if (is_builtin_type(ref.type))
                    fail(diag_path, e.line, e.col, "TypeMismatch",
                         "'" + ref.var + "' is an instance, not a value");
                return ref.type;
            } else if constexpr (std::is_same_v<T, Expr::Unary>) {
                Ty t = type_of(*n.operand, scope, program, diag_path);
                if (n.op == UnOp::Not) {
                    if (t != Ty::Bool)
                        fail(diag_path, e.line, e.col, "TypeMismatch", "NOT expects BOOL");
                    return Ty::Bool;
                }
                if (t != Ty::Int)
                    fail(diag_path, e.line, e.col, "TypeMismatch", "unary '-' expects INT");
                return Ty::Int;
            } else {
                Ty l = type_of(*n.lhs, scope, program, diag_path);
                Ty r = type_of(*n.rhs, scope, program, diag_path);
                switch (n.op) {
                case BinOp::And:
                case BinOp::Or:
                case BinOp::Xor:
                case BinOp::Implies:
                    if (l != Ty::Bool || r != Ty::Bool)
                        fail(diag_path, e.line, e.col, "TypeMismatch",
                             "boolean operator expects BOOL operands");
                    return Ty::Bool;
                case BinOp::Eq:
                case BinOp::Ne:
                case BinOp::Lt:
                case BinOp::Le:
                case BinOp::Gt:
                case BinOp::Ge: {
                    bool ok = l == r || (l == Ty::Time && r == Ty::Int) ||
                              (l == Ty::Int && r == Ty::Time);
                    if (!ok)
                        fail(diag_path, e.line, e.col, "TypeMismatch",
                             std::string("cannot compare ") + ty_name(l) + " with " + ty_name(r));
                    bool ordered = n.op != BinOp::Eq && n.op != BinOp::Ne;
                    if (ordered && l == Ty::Bool)
                        fail(diag_path, e.line, e.col, "TypeMismatch",
                             "ordering comparison expects INT or TIME");
                    return Ty::Bool;
                }
                case BinOp::Add:
                case BinOp::Sub: {
                    if (l == Ty::Int && r == Ty::Int) return Ty::Int;
                    bool time_ok = (l == Ty::Time || l == Ty::Int) &&
                                   (r == Ty::Time || r == Ty::Int) &&
                                   (l == Ty::Time || r == Ty::Time);
                    if (time_ok) return Ty::Time;
                    fail(diag_path, e.line, e.col, "TypeMismatch",
                         "arithmetic expects INT or TIME operands");
                }
                case BinOp::Mul: {
                    if (l == Ty::Int && r == Ty::Int) return Ty::Int;
                    if ((l == Ty::Time && r == Ty::Int) || (l == Ty::Int && r == Ty::Time))
                        return Ty::Time;
                    fail(diag_path, e.line, e.col, "TypeMismatch",
                         "'*' expects INT*INT or TIME*INT");
                }
                case BinOp::Div:
                    if (l != Ty::Int || r != Ty::Int)
                        fail(diag_path, e.line, e.col, "TypeMismatch",
                             "division is defined on INT only");
                    return Ty::Int;
                }
                fail(diag_path, e.line, e.col, "TypeMismatch", "unknown operator");
            }
        },
        e.node);
}

inline std::vector<std::string> TypedProgram::entry_candidates() const {
    std::set<std::string> called;
    for (const auto& fb : blocks) {
        std::vector<const Stmt*> work;
        std::vector<const std::vector<Stmt>*> bodies{&fb.body};
        while (!bodies.empty()) {
            const auto* body = bodies.back();
            bodies.pop_back();
            for (const auto& s : *body) {
                if (const auto* call = std::get_if<Stmt::Call>(&s.node)) {
                    const DataBlockDecl* db = nullptr;
                    if (call->path.size() == 2) db = find_instance(call->path[1]);
                    if (call->path.size() == 1) db = find_instance(call->path[0]);
                    if (db) called.insert(db->block);
                } else if (const auto* iff = std::get_if<Stmt::If>(&s.node)) {
                    for (const auto& br : iff->branches) bodies.push_back(&br.body);
                    bodies.push_back(&iff->else_body);
                }
            }
        }
    }
    std::vector<std::string> out;
    for (const auto& fb : blocks)
        if (!called.count(fb.name)) out.push_back(fb.name);
    return out;
}

inline TypedProgram typecheck_and_resolve(std::vector<SourceUnit> units) {
    return TypeChecker(std::move(units)).run();
}

} // namespace stverif
