#pragma once

// Control-flow automaton with a scan-cycle wrapper: the verification model.
// One scan = havoc the input slots, execute the body transitions, return to
// the cycle-start location. Conditions become transition guards (mutually
// exclusive and exhaustive by construction of the IF lowering), assignments
// become transition actions, //#ASSERT pragmas become labeled error
// locations, //#ASSUME pragmas become guard constraints whose failure prunes
// the successors of a state during exploration.
//
// Calls to DATA_BLOCK instances are inlined with the instance name as the
// variable prefix; recursion is rejected. Program variables live in a flat
// slot vector, so a state is a plain value vector that hashes cheaply.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stverif/builtins.hpp"
#include "stverif/typecheck.hpp"

namespace stverif {

using State = std::vector<long long>;

struct Slot {
    std::string name; // dotted display name
    Ty type = Ty::Bool;
    long long init = 0;
    long long dom_lo = 0; // INT enumeration domain
    long long dom_hi = 255;
    bool has_range_pragma = false;
    bool exported = true; // appears in trace CSV output
    bool is_input = false;
    bool is_output = false;
};

struct CExpr;
using CExprPtr = std::shared_ptr<const CExpr>;

struct CExpr {
    struct Const {
        long long value;
    };
    struct SlotRef {
        int slot;
    };
    struct Unary {
        UnOp op;
        CExprPtr operand;
    };
    struct Binary {
        BinOp op;
        CExprPtr lhs;
        CExprPtr rhs;
    };
    std::variant<Const, SlotRef, Unary, Binary> node;
};

inline CExprPtr cexpr(decltype(CExpr::node) node) {
    auto e = std::make_shared<CExpr>();
    e->node = std::move(node);
    return e;
}

inline CExprPtr cconst(long long v) { return cexpr(CExpr::Const{v}); }
inline CExprPtr cnot(CExprPtr a) { return cexpr(CExpr::Unary{UnOp::Not, std::move(a)}); }
inline CExprPtr cand(CExprPtr a, CExprPtr b) {
    return cexpr(CExpr::Binary{BinOp::And, std::move(a), std::move(b)});
}

inline long long eval(const CExpr& e, const State& s) {
    return std::visit(
        [&](const auto& n) -> long long {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CExpr::Const>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, CExpr::SlotRef>) {
                return s[n.slot];
            } else if constexpr (std::is_same_v<T, CExpr::Unary>) {
                long long a = eval(*n.operand, s);
                return n.op == UnOp::Not ? (a == 0 ? 1 : 0) : -a;
            } else {
                long long a = eval(*n.lhs, s);
                long long b = eval(*n.rhs, s);
                switch (n.op) {
                case BinOp::And: return (a != 0 && b != 0) ? 1 : 0;
                case BinOp::Or: return (a != 0 || b != 0) ? 1 : 0;
                case BinOp::Xor: return ((a != 0) != (b != 0)) ? 1 : 0;
                case BinOp::Implies: return (a == 0 || b != 0) ? 1 : 0;
                case BinOp::Eq: return a == b ? 1 : 0;
                case BinOp::Ne: return a != b ? 1 : 0;
                case BinOp::Lt: return a < b ? 1 : 0;
                case BinOp::Le: return a <= b ? 1 : 0;
                case BinOp::Gt: return a > b ? 1 : 0;
                case BinOp::Ge: return a >= b ? 1 : 0;
                case BinOp::Add: return a + b;
                case BinOp::Sub: return a - b;
                case BinOp::Mul: return a * b;
                case BinOp::Div: return b == 0 ? 0 : a / b; // total: x/0 = 0
                }
                return 0;
            }
        },
        e.node);
}

enum class LocKind { CycleStart, Normal, AssertFail, AssumeFail };

struct Location {
    LocKind kind = LocKind::Normal;
    std::string label; // assertion/assumption name for the *Fail kinds
};

struct BuiltinRec {
    Ty kind = Ty::Ton;
    std::string name;
    long long dom_lo = 0, dom_hi = 255; // CTUD CV saturation bounds
    // Slot indices; TON uses in/in_prev/et/q/pt, CTUD the rest.
    int in = -1, in_prev = -1, et = -1, q = -1, pt = -1;
    int cu = -1, cd = -1, r = -1, ld = -1, pv = -1, cv = -1, qu = -1, qd = -1;
    int cu_prev = -1, cd_prev = -1;
};

struct Action {
    enum class Kind { Assign, BuiltinCall };
    Kind kind = Kind::Assign;
    int slot = -1;  // Assign target
    CExprPtr value; // Assign source
    int builtin = -1;
    std::vector<std::pair<int, CExprPtr>> args; // BuiltinCall: (field slot, value)
};

struct Transition {
    int src = 0, dst = 0;
    CExprPtr guard; // null = unconditional
    std::vector<Action> actions;
};

struct CycleAutomaton {
    std::vector<Location> locations;
    int initial = 0;
    std::vector<Transition> transitions;
    std::vector<std::vector<int>> outgoing; // per-location transition indices, in order
    std::string entry_block;
    long long t_cycle = 0;
    std::vector<Slot> slots;
    std::vector<BuiltinRec> builtins;
    std::vector<int> cycle_vars;               // havoced at each cycle start
    std::vector<std::string> assertion_names;  // declaration order
    std::map<std::string, int> slot_of;

    State initial_state() const {
        State s(slots.size());
        for (size_t i = 0; i < slots.size(); ++i) s[i] = slots[i].init;
        return s;
    }

    int find_slot(const std::string& name) const {
        auto it = slot_of.find(name);
        return it == slot_of.end() ? -1 : it->second;
    }
};

inline long long clamp_for_slot(const Slot& slot, long long v) {
    if (slot.type == Ty::Int) return std::clamp(v, slot.dom_lo, slot.dom_hi);
    if (slot.type == Ty::Time) return std::max<long long>(v, 0);
    return v != 0 ? 1 : 0;
}

inline void apply_action(const CycleAutomaton& a, const Action& act, State& s) {
    if (act.kind == Action::Kind::Assign) {
        s[act.slot] = clamp_for_slot(a.slots[act.slot], eval(*act.value, s));
        return;
    }
    const BuiltinRec& b = a.builtins[act.builtin];
    for (const auto& [slot, value] : act.args)
        s[slot] = clamp_for_slot(a.slots[slot], eval(*value, s));
    if (b.kind == Ty::Ton) {
        TonState t{s[b.pt], s[b.et], s[b.q] != 0, s[b.in] != 0, s[b.in_prev] != 0};
        TonState n = ton_step(t, s[b.in] != 0, s[b.pt], a.t_cycle);
        s[b.pt] = n.pt;
        s[b.et] = n.et;
        s[b.q] = n.q ? 1 : 0;
        s[b.in_prev] = n.in_prev ? 1 : 0;
    } else {
        CtudState c;
        c.cv = s[b.cv];
        c.pv = s[b.pv];
        c.cu_prev = s[b.cu_prev] != 0;
        c.cd_prev = s[b.cd_prev] != 0;
        CtudState n = ctud_step(c, s[b.cu] != 0, s[b.cd] != 0, s[b.r] != 0, s[b.ld] != 0, s[b.pv],
                                b.dom_lo, b.dom_hi);
        s[b.cv] = n.cv;
        s[b.qu] = n.qu ? 1 : 0;
        s[b.qd] = n.qd ? 1 : 0;
        s[b.cu_prev] = n.cu_prev ? 1 : 0;
        s[b.cd_prev] = n.cd_prev ? 1 : 0;
    }
}

struct CycleEvent {
    std::string name;
    bool assumption = false; // true: failed //#ASSUME or case assumption
};

struct CycleOutcome {
    State state;
    std::vector<CycleEvent> events;
    bool pruned = false; // an assumption failed and stop_at_assume was set
};

// Runs one scan cycle: writes the havoc values into the input slots, then
// walks the automaton until it returns to the cycle-start location. The walk
// is deterministic because outgoing guards partition the state space.
inline CycleOutcome execute_cycle(const CycleAutomaton& a, State s,
                                  const std::vector<long long>& inputs, bool stop_at_assume) {
    CycleOutcome out;
    for (size_t i = 0; i < a.cycle_vars.size(); ++i) {
        int slot = a.cycle_vars[i];
        s[slot] = clamp_for_slot(a.slots[slot], inputs[i]);
    }
    int loc = a.initial;
    size_t steps = 0;
    const size_t step_limit = a.transitions.size() + a.locations.size() + 16;
    do {
        const Transition* chosen = nullptr;
        for (int ti : a.outgoing[loc]) {
            const Transition& t = a.transitions[ti];
            if (!t.guard || eval(*t.guard, s) != 0) {
                chosen = &t;
                break;
            }
        }
        if (!chosen) // unreachable if guards are exhaustive
            fail("", 0, 0, "InternalError", "no enabled transition in CFA walk");
        for (const Action& act : chosen->actions) apply_action(a, act, s);
        loc = chosen->dst;
        const Location& L = a.locations[loc];
        if (L.kind == LocKind::AssertFail) {
            out.events.push_back({L.label, false});
        } else if (L.kind == LocKind::AssumeFail) {
            out.events.push_back({L.label, true});
            if (stop_at_assume) {
                out.pruned = true;
                out.state = std::move(s);
                return out;
            }
        }
        if (++steps > step_limit)
            fail("", 0, 0, "InternalError", "CFA walk did not terminate");
    } while (loc != a.initial);
    out.state = std::move(s);
    return out;
}

// ---------------------------------------------------------------------------
// Lowering
// ---------------------------------------------------------------------------

class Lowerer {
  public:
    Lowerer(const TypedProgram& program, std::string entry, long long t_cycle)
        : program_(program), entry_(std::move(entry)), t_cycle_(t_cycle) {}

    // extra_assumes: case-level assumptions evaluated right after the havoc,
    // before any statement runs.
    CycleAutomaton run(const std::vector<std::pair<std::string, ExprPtr>>& extra_assumes = {}) {
        const FunctionBlockDecl* entry_fb = program_.find_block(entry_);
        if (!entry_fb)
            fail("", 0, 0, "NoSuchEntry", "no function block named '" + entry_ + "'");
        cfa_.entry_block = entry_;
        cfa_.t_cycle = t_cycle_;
        discover(*entry_fb);
        build_slots(*entry_fb);

        int start = add_location(LocKind::CycleStart);
        cfa_.initial = start;
        int body_entry = add_location(LocKind::Normal);
        add_transition(start, body_entry, nullptr, {}); // havoc edge
        int cur = body_entry;
        for (const auto& [name, expr] : extra_assumes)
            cur = lower_assume(cur, compile_expr(*expr, {entry_fb, ""}), name);
        cur = lower_body(entry_fb->body, entry_fb->pragmas, {entry_fb, ""}, cur);
        add_transition(cur, start, nullptr, {}); // back edge; cycle_index advances here
        index_outgoing();
        return std::move(cfa_);
    }

  private:
    struct Ctx {
        const FunctionBlockDecl* fb;
        std::string prefix; // "" for the entry block, "inst." for inlined calls
    };

    int add_location(LocKind kind, std::string label = "") {
        cfa_.locations.push_back({kind, std::move(label)});
        return static_cast<int>(cfa_.locations.size()) - 1;
    }
    void add_transition(int src, int dst, CExprPtr guard, std::vector<Action> actions) {
        cfa_.transitions.push_back({src, dst, std::move(guard), std::move(actions)});
    }
    void index_outgoing() {
        cfa_.outgoing.assign(cfa_.locations.size(), {});
        for (size_t i = 0; i < cfa_.transitions.size(); ++i)
            cfa_.outgoing[cfa_.transitions[i].src].push_back(static_cast<int>(i));
    }

    // Call-graph closure from the entry; rejects recursion and records which
    // instances are called (their inputs are environment inputs) or merely
    // referenced (state only).
    void discover(const FunctionBlockDecl& entry_fb) {
        std::vector<std::string> stack;
        visit_block(entry_fb, stack);
    }

    void visit_block(const FunctionBlockDecl& fb, std::vector<std::string>& stack) {
        if (std::find(stack.begin(), stack.end(), fb.name) != stack.end())
            fail("", fb.line, fb.col, "RecursiveCall",
                 "'" + fb.name + "' calls itself, directly or transitively");
        if (visited_.count(fb.name)) return;
        stack.push_back(fb.name);
        walk_stmts(fb.body, fb, stack);
        for (const auto& p : fb.pragmas)
            if (p.expr) note_expr_refs(*p.expr, fb);
        stack.pop_back();
        visited_.insert(fb.name);
    }

    void walk_stmts(const std::vector<Stmt>& body, const FunctionBlockDecl& fb,
                    std::vector<std::string>& stack) {
        for (const auto& s : body) {
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, Stmt::Assign>) {
                        note_path(n.path, fb);
                        note_expr_refs(*n.value, fb);
                    } else if constexpr (std::is_same_v<T, Stmt::If>) {
                        for (const auto& br : n.branches) {
                            note_expr_refs(*br.cond, fb);
                            walk_stmts(br.body, fb, stack);
                        }
                        walk_stmts(n.else_body, fb, stack);
                    } else {
                        for (const auto& a : n.args) note_expr_refs(*a.value, fb);
                        const DataBlockDecl* db = nullptr;
                        if (n.path.size() == 2) db = program_.find_instance(n.path[1]);
                        if (n.path.size() == 1 && !fb.find_var(n.path[0]))
                            db = program_.find_instance(n.path[0]);
                        if (db) {
                            called_.insert(db->instance);
                            referenced_.insert(db->instance);
                            visit_block(*program_.find_block(db->block), stack);
                        }
                    }
                },
                s.node);
        }
    }

    void note_path(const std::vector<std::string>& path, const FunctionBlockDecl& fb) {
        if (!fb.find_var(path[0]) && program_.find_instance(path[0]))
            referenced_.insert(path[0]);
    }

    void note_expr_refs(const Expr& e, const FunctionBlockDecl& fb) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Expr::VarRef>) {
                    note_path(n.path, fb);
                } else if constexpr (std::is_same_v<T, Expr::Unary>) {
                    note_expr_refs(*n.operand, fb);
                } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                    note_expr_refs(*n.lhs, fb);
                    note_expr_refs(*n.rhs, fb);
                }
            },
            e.node);
    }

    int add_slot(Slot s) {
        cfa_.slot_of[s.name] = static_cast<int>(cfa_.slots.size());
        cfa_.slots.push_back(std::move(s));
        return static_cast<int>(cfa_.slots.size()) - 1;
    }

    static long long default_init(const VarDecl& v) { return v.init.value_or(0); }

    void add_block_slots(const FunctionBlockDecl& fb, const std::string& prefix, bool inputs_live) {
        for (const auto& v : fb.vars) {
            if (is_builtin_type(v.type)) {
                add_builtin(prefix + v.name, v.type);
                continue;
            }
            Slot s;
            s.name = prefix + v.name;
            s.type = v.type;
            s.init = default_init(v);
            s.dom_lo = v.dom_lo;
            s.dom_hi = v.dom_hi;
            s.has_range_pragma = v.has_range_pragma;
            s.is_input = inputs_live && v.section == VarSection::Input;
            s.is_output = v.section == VarSection::Output;
            int idx = add_slot(std::move(s));
            if (cfa_.slots[idx].is_input) cfa_.cycle_vars.push_back(idx);
        }
    }

    void add_builtin(const std::string& name, Ty kind) {
        BuiltinRec rec;
        rec.kind = kind;
        rec.name = name;
        auto hidden = [&](const char* f, Ty t) {
            Slot s;
            s.name = name + "." + f;
            s.type = t;
            s.exported = false;
            s.dom_lo = rec.dom_lo;
            s.dom_hi = rec.dom_hi;
            return add_slot(std::move(s));
        };
        auto shown = [&](const char* f, Ty t) {
            Slot s;
            s.name = name + "." + f;
            s.type = t;
            s.dom_lo = rec.dom_lo;
            s.dom_hi = rec.dom_hi;
            return add_slot(std::move(s));
        };
        if (kind == Ty::Ton) {
            rec.in = hidden("IN", Ty::Bool);
            rec.in_prev = hidden("IN_prev", Ty::Bool);
            rec.pt = hidden("PT", Ty::Time);
            rec.et = shown("ET", Ty::Time);
            rec.q = shown("Q", Ty::Bool);
        } else {
            rec.cu = hidden("CU", Ty::Bool);
            rec.cd = hidden("CD", Ty::Bool);
            rec.r = hidden("R", Ty::Bool);
            rec.ld = hidden("LD", Ty::Bool);
            rec.cu_prev = hidden("CU_prev", Ty::Bool);
            rec.cd_prev = hidden("CD_prev", Ty::Bool);
            rec.pv = hidden("PV", Ty::Int);
            rec.cv = shown("CV", Ty::Int);
            rec.qu = shown("QU", Ty::Bool);
            rec.qd = shown("QD", Ty::Bool);
        }
        builtin_of_[name] = static_cast<int>(cfa_.builtins.size());
        cfa_.builtins.push_back(rec);
        // At rest CV=0 and PV=0, so QU = (CV >= PV) and QD = (CV <= 0) both hold.
        if (kind == Ty::Ctud) {
            cfa_.slots[rec.qu].init = 1;
            cfa_.slots[rec.qd].init = 1;
        }
    }

    void build_slots(const FunctionBlockDecl& entry_fb) {
        add_block_slots(entry_fb, "", /*inputs_live=*/true);
        for (const auto& db : program_.instances) {
            if (!referenced_.count(db.instance)) continue;
            const FunctionBlockDecl* fb = program_.find_block(db.block);
            add_block_slots(*fb, db.instance + ".", /*inputs_live=*/called_.count(db.instance) > 0);
        }
    }

    int slot_for(const ResolvedRef& ref, const Ctx& ctx, int line, int col) const {
        std::string name;
        if (!ref.instance.empty())
            name = ref.instance + "." + ref.var;
        else
            name = ctx.prefix + ref.var;
        if (!ref.field.empty()) name += "." + ref.field;
        auto it = cfa_.slot_of.find(name);
        if (it == cfa_.slot_of.end())
            fail("", line, col, "InternalError", "no slot for '" + name + "'");
        return it->second;
    }

    CExprPtr compile_expr(const Expr& e, const Ctx& ctx) {
        return std::visit(
            [&](const auto& n) -> CExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Expr::BoolLit>) {
                    return cconst(n.value ? 1 : 0);
                } else if constexpr (std::is_same_v<T, Expr::IntLit>) {
                    return cconst(n.value);
                } else if constexpr (std::is_same_v<T, Expr::TimeLit>) {
                    return cconst(n.ms);
                } else if constexpr (std::is_same_v<T, Expr::VarRef>) {
                    ResolvedRef ref =
                        TypeChecker::resolve_path(n.path, *ctx.fb, program_, "", e.line, e.col);
                    return cexpr(CExpr::SlotRef{slot_for(ref, ctx, e.line, e.col)});
                } else if constexpr (std::is_same_v<T, Expr::Unary>) {
                    return cexpr(CExpr::Unary{n.op, compile_expr(*n.operand, ctx)});
                } else {
                    return cexpr(
                        CExpr::Binary{n.op, compile_expr(*n.lhs, ctx), compile_expr(*n.rhs, ctx)});
                }
            },
            e.node);
    }

    int lower_body(const std::vector<Stmt>& body, const std::vector<Pragma>& pragmas, Ctx ctx,
                   int cur) {
        for (size_t i = 0; i <= body.size(); ++i) {
            for (const auto& p : pragmas) {
                if (p.location != static_cast<int>(i) || p.kind == PragmaKind::Range) continue;
                std::string label = ctx.prefix + p.name;
                CExprPtr cond = compile_expr(*p.expr, ctx);
                cur = p.kind == PragmaKind::Assert ? lower_assert(cur, std::move(cond), label)
                                                   : lower_assume(cur, std::move(cond), label);
            }
            if (i < body.size()) cur = lower_stmt(body[i], ctx, cur);
        }
        return cur;
    }

    int lower_assert(int cur, CExprPtr cond, const std::string& label) {
        cfa_.assertion_names.push_back(label);
        int next = add_location(LocKind::Normal);
        int err = add_location(LocKind::AssertFail, label);
        add_transition(cur, next, cond, {});
        add_transition(cur, err, cnot(cond), {});
        add_transition(err, next, nullptr, {});
        return next;
    }

    int lower_assume(int cur, CExprPtr cond, const std::string& label) {
        int next = add_location(LocKind::Normal);
        int pruned = add_location(LocKind::AssumeFail, label);
        add_transition(cur, next, cond, {});
        add_transition(cur, pruned, cnot(cond), {});
        add_transition(pruned, next, nullptr, {});
        return next;
    }

    int lower_stmt(const Stmt& s, const Ctx& ctx, int cur) {
        return std::visit(
            [&](const auto& n) -> int {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Stmt::Assign>) {
                    ResolvedRef ref =
                        TypeChecker::resolve_path(n.path, *ctx.fb, program_, "", s.line, s.col);
                    Action act;
                    act.kind = Action::Kind::Assign;
                    act.slot = slot_for(ref, ctx, s.line, s.col);
                    act.value = compile_expr(*n.value, ctx);
                    int next = add_location(LocKind::Normal);
                    add_transition(cur, next, nullptr, {std::move(act)});
                    return next;
                } else if constexpr (std::is_same_v<T, Stmt::If>) {
                    return lower_if(n, ctx, cur);
                } else {
                    return lower_call(n, ctx, cur, s.line, s.col);
                }
            },
            s.node);
    }

    int lower_if(const Stmt::If& n, const Ctx& ctx, int cur) {
        int merge = add_location(LocKind::Normal);
        CExprPtr taken; // conjunction of negated earlier conditions
        for (const auto& br : n.branches) {
            CExprPtr cond = compile_expr(*br.cond, ctx);
            CExprPtr guard = taken ? cand(taken, cond) : cond;
            int body_loc = add_location(LocKind::Normal);
            add_transition(cur, body_loc, guard, {});
            int exit_loc = lower_body(br.body, {}, ctx, body_loc);
            add_transition(exit_loc, merge, nullptr, {});
            taken = taken ? cand(taken, cnot(cond)) : cnot(cond);
        }
        if (n.else_body.empty()) {
            add_transition(cur, merge, taken, {});
        } else {
            int body_loc = add_location(LocKind::Normal);
            add_transition(cur, body_loc, taken, {});
            int exit_loc = lower_body(n.else_body, {}, ctx, body_loc);
            add_transition(exit_loc, merge, nullptr, {});
        }
        return merge;
    }

    int lower_call(const Stmt::Call& n, const Ctx& ctx, int cur, int line, int col) {
        // Built-in local instance.
        if (n.path.size() == 1 && ctx.fb->find_var(n.path[0])) {
            const VarDecl* v = ctx.fb->find_var(n.path[0]);
            Action act;
            act.kind = Action::Kind::BuiltinCall;
            act.builtin = builtin_of_.at(ctx.prefix + v->name);
            for (const auto& a : n.args) {
                const BuiltinRec& rec = cfa_.builtins[act.builtin];
                int slot = builtin_arg_slot(rec, a.name);
                act.args.emplace_back(slot, compile_expr(*a.value, ctx));
            }
            int next = add_location(LocKind::Normal);
            add_transition(cur, next, nullptr, {std::move(act)});
            return next;
        }
        // DATA_BLOCK instance call: assign arguments, then inline the body.
        const DataBlockDecl* db = n.path.size() == 2 ? program_.find_instance(n.path[1])
                                                     : program_.find_instance(n.path[0]);
        const FunctionBlockDecl* callee = program_.find_block(db->block);
        if (!n.args.empty()) {
            std::vector<Action> arg_actions;
            for (const auto& a : n.args) {
                Action act;
                act.kind = Action::Kind::Assign;
                act.slot = cfa_.slot_of.at(db->instance + "." + a.name);
                act.value = compile_expr(*a.value, ctx);
                arg_actions.push_back(std::move(act));
            }
            int next = add_location(LocKind::Normal);
            add_transition(cur, next, nullptr, std::move(arg_actions));
            cur = next;
        }
        return lower_body(callee->body, callee->pragmas, {callee, db->instance + "."}, cur);
    }

    static int builtin_arg_slot(const BuiltinRec& rec, const std::string& name) {
        if (rec.kind == Ty::Ton) {
            if (name == "IN") return rec.in;
            if (name == "PT") return rec.pt;
        } else {
            if (name == "CU") return rec.cu;
            if (name == "CD") return rec.cd;
            if (name == "R") return rec.r;
            if (name == "LD") return rec.ld;
            if (name == "PV") return rec.pv;
        }
        fail("", 0, 0, "InternalError", "unknown built-in argument '" + name + "'");
    }

    const TypedProgram& program_;
    std::string entry_;
    long long t_cycle_;
    CycleAutomaton cfa_;
    std::set<std::string> visited_;
    std::set<std::string> called_;
    std::set<std::string> referenced_;
    std::map<std::string, int> builtin_of_;
};

inline CycleAutomaton
lower_to_cfa(const TypedProgram& program, const std::string& entry, long long t_cycle,
             const std::vector<std::pair<std::string, ExprPtr>>& extra_assumes = {}) {
    if (t_cycle <= 0) fail("", 0, 0, "ZeroCycleTime", "cycle time must be positive");
    return Lowerer(program, entry, t_cycle).run(extra_assumes);
}

// Exhaustively checks that every location's outgoing guards are mutually
// exclusive and exhaustive. BOOL slots referenced by the guards take both
// values; INT/TIME slots range over the constants mentioned plus their
// neighbors and domain bounds. Returns ids of locations where the partition
// fails; skips a location if the combination count explodes.
inline std::vector<int> check_guard_partition(const CycleAutomaton& a, size_t combo_limit = 1u << 16) {
    std::vector<int> bad;
    for (size_t loc = 0; loc < a.locations.size(); ++loc) {
        const auto& out = a.outgoing[loc];
        if (out.empty()) continue;
        std::set<int> slots;
        std::function<void(const CExpr&)> collect_slots = [&](const CExpr& e) {
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, CExpr::SlotRef>) {
                        slots.insert(n.slot);
                    } else if constexpr (std::is_same_v<T, CExpr::Unary>) {
                        collect_slots(*n.operand);
                    } else if constexpr (std::is_same_v<T, CExpr::Binary>) {
                        collect_slots(*n.lhs);
                        collect_slots(*n.rhs);
                    }
                },
                e.node);
        };
        std::set<long long> constants;
        std::function<void(const CExpr&)> collect_consts = [&](const CExpr& e) {
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, CExpr::Const>) {
                        constants.insert(n.value);
                    } else if constexpr (std::is_same_v<T, CExpr::Unary>) {
                        collect_consts(*n.operand);
                    } else if constexpr (std::is_same_v<T, CExpr::Binary>) {
                        collect_consts(*n.lhs);
                        collect_consts(*n.rhs);
                    }
                },
                e.node);
        };
        for (int ti : out)
            if (a.transitions[ti].guard) {
                collect_slots(*a.transitions[ti].guard);
                collect_consts(*a.transitions[ti].guard);
            }
        std::vector<std::vector<long long>> values;
        std::vector<int> slot_list(slots.begin(), slots.end());
        size_t combos = 1;
        for (int si : slot_list) {
            const Slot& s = a.slots[si];
            if (s.type == Ty::Bool) {
                values.push_back({0, 1});
            } else {
                std::set<long long> vs = constants;
                vs.insert(s.dom_lo);
                vs.insert(s.dom_hi);
                for (long long c : constants) {
                    vs.insert(c - 1);
                    vs.insert(c + 1);
                }
                values.emplace_back(vs.begin(), vs.end());
            }
            combos *= values.back().size();
            if (combos > combo_limit) break;
        }
        if (combos > combo_limit) continue;
        State probe(a.slots.size(), 0);
        std::function<bool(size_t)> walk = [&](size_t k) -> bool {
            if (k == slot_list.size()) {
                int enabled = 0;
                for (int ti : out) {
                    const Transition& t = a.transitions[ti];
                    if (!t.guard || eval(*t.guard, probe) != 0) ++enabled;
                }
                return enabled == 1;
            }
            for (long long v : values[k]) {
                probe[slot_list[k]] = v;
                if (!walk(k + 1)) return false;
            }
            return true;
        };
        if (!walk(0)) bad.push_back(static_cast<int>(loc));
    }
    return bad;
}

} // namespace stverif
