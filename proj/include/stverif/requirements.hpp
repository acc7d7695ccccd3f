#pragma once

// The four requirement formalisms and their compilation into per-cycle
// assertions and monitor blocks:
//   - cause-and-effect matrix  -> OR-of-AND formula per output column
//   - I/O matrix               -> set/reset monitor block, row order decides
//   - state machine            -> expected-state monitor, after determinism
//                                 and completeness diagnostics
//   - logic diagram            -> flattened gate formula
// Monitors are emitted as ST source and recompiled through the front end, so
// every check ultimately runs through the same verification pipeline.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stverif/parser.hpp"
#include "stverif/pretty.hpp"

namespace stverif {

// ---------------------------------------------------------------------------
// Cause-and-effect matrix
// ---------------------------------------------------------------------------

enum class CemCode { Blank, A, NA };

struct CemCell {
    CemCode code = CemCode::Blank;
    int group = 0;
};

struct CemTable {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::vector<CemCell>> cells; // [input][output]
};

// CSV: first row = output names (leading blank cell), first column = inputs,
// cells A<d>/NA<d>/empty.
inline CemTable load_cem(const std::string& text, const std::string& path = "") {
    auto rows = parse_csv(text);
    if (rows.size() < 2 || rows[0].size() < 2)
        fail(path, 1, 1, "RaggedRow", "CEM needs a header row and at least one input row");
    CemTable t;
    for (size_t c = 1; c < rows[0].size(); ++c) t.outputs.push_back(rows[0][c]);
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            fail(path, static_cast<int>(r) + 1, 1, "RaggedRow", "row width differs from header");
        t.inputs.push_back(rows[r][0]);
        std::vector<CemCell> line;
        for (size_t c = 1; c < rows[r].size(); ++c) {
            std::string cell;
            for (char ch : rows[r][c])
                cell += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            CemCell cc;
            if (cell.empty()) {
                cc.code = CemCode::Blank;
            } else {
                size_t i = 0;
                if (cell[0] == 'N') {
                    cc.code = CemCode::NA;
                    ++i;
                } else {
                    cc.code = CemCode::A;
                }
                if (i >= cell.size() || cell[i] != 'A')
                    fail(path, static_cast<int>(r) + 1, 1, "UnknownCellValue",
                         "cell '" + rows[r][c] + "' is not A<n>, NA<n> or blank");
                ++i;
                if (i >= cell.size())
                    fail(path, static_cast<int>(r) + 1, 1, "UnknownCellValue",
                         "cell '" + rows[r][c] + "' is missing its group number");
                cc.group = 0;
                for (; i < cell.size(); ++i) {
                    if (!std::isdigit(static_cast<unsigned char>(cell[i])))
                        fail(path, static_cast<int>(r) + 1, 1, "UnknownCellValue",
                             "cell '" + rows[r][c] + "' has a malformed group number");
                    cc.group = cc.group * 10 + (cell[i] - '0');
                }
            }
            line.push_back(cc);
        }
        t.cells.push_back(std::move(line));
    }
    return t;
}

// Per output column: OR over groups of AND over cells; A contributes the
// input, NA its negation. Group ids are column-local and must be 1..G.
inline std::vector<std::pair<std::string, ExprPtr>> compile_cem(const CemTable& t) {
    std::vector<std::pair<std::string, ExprPtr>> out;
    for (size_t c = 0; c < t.outputs.size(); ++c) {
        std::set<int> groups;
        for (size_t r = 0; r < t.inputs.size(); ++r)
            if (t.cells[r][c].code != CemCode::Blank) groups.insert(t.cells[r][c].group);
        if (groups.empty())
            fail("", 0, 0, "EmptyColumn",
                 "output column '" + t.outputs[c] + "' has no non-blank cell");
        int g = 0;
        for (int id : groups)
            if (id != ++g)
                fail("", 0, 0, "NonContiguousGroups",
                     "output column '" + t.outputs[c] + "' group ids must be 1.." +
                         std::to_string(groups.size()));
        ExprPtr column;
        for (int id : groups) {
            ExprPtr conj;
            for (size_t r = 0; r < t.inputs.size(); ++r) {
                const CemCell& cell = t.cells[r][c];
                if (cell.code == CemCode::Blank || cell.group != id) continue;
                ExprPtr lit = make_expr(Expr::VarRef{{t.inputs[r]}});
                if (cell.code == CemCode::NA) lit = make_expr(Expr::Unary{UnOp::Not, lit});
                conj = conj ? make_expr(Expr::Binary{BinOp::And, conj, lit}) : lit;
            }
            column = column ? make_expr(Expr::Binary{BinOp::Or, column, conj}) : conj;
        }
        out.emplace_back(t.outputs[c], column);
    }
    return out;
}

// ---------------------------------------------------------------------------
// I/O matrix
// ---------------------------------------------------------------------------

enum class IoCell { Blank, Set, Reset };
enum class IoPriority { RowOrderLastWins, MutuallyExclusiveDeclared };

struct IoMatrix {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::vector<IoCell>> cells; // [input][output]
    IoPriority priority = IoPriority::RowOrderLastWins;
};

inline IoMatrix load_io_matrix(const std::string& text, const std::string& path = "") {
    auto rows = parse_csv(text);
    if (rows.size() < 2 || rows[0].size() < 2)
        fail(path, 1, 1, "RaggedRow", "I/O matrix needs a header row and at least one input row");
    IoMatrix m;
    for (size_t c = 1; c < rows[0].size(); ++c) m.outputs.push_back(rows[0][c]);
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            fail(path, static_cast<int>(r) + 1, 1, "RaggedRow", "row width differs from header");
        m.inputs.push_back(rows[r][0]);
        std::vector<IoCell> line;
        for (size_t c = 1; c < rows[r].size(); ++c) {
            std::string cell;
            for (char ch : rows[r][c])
                cell += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            if (cell.empty())
                line.push_back(IoCell::Blank);
            else if (cell == "set")
                line.push_back(IoCell::Set);
            else if (cell == "reset")
                line.push_back(IoCell::Reset);
            else
                fail(path, static_cast<int>(r) + 1, 1, "UnknownCellValue",
                     "cell '" + rows[r][c] + "' is not Set, Reset or blank");
        }
        m.cells.push_back(std::move(line));
    }
    return m;
}

struct IoMonitor {
    std::string block_name;
    std::string text;                     // monitor FB source
    std::optional<std::string> assume;    // mutual-exclusion constraint text
    std::vector<std::string> outputs;     // monitor output names (mon_<out>)
};

// One IF per row, in row order, so a later row overwrites an earlier one.
// Under MutuallyExclusiveDeclared an at-most-one-input assumption is emitted
// for the composition harness.
inline IoMonitor compile_io_matrix(const IoMatrix& m) {
    for (size_t r = 0; r < m.inputs.size(); ++r) {
        bool any = false;
        for (size_t c = 0; c < m.outputs.size(); ++c) any |= m.cells[r][c] != IoCell::Blank;
        if (!any)
            fail("", 0, 0, "EmptyRow", "row '" + m.inputs[r] + "' has no Set/Reset cell");
    }
    IoMonitor mon;
    mon.block_name = "io_matrix_monitor";
    std::ostringstream os;
    os << "FUNCTION_BLOCK " << mon.block_name << "\n    VAR_INPUT\n";
    for (const auto& in : m.inputs) os << "        " << in << " : BOOL;\n";
    os << "    END_VAR\n    VAR_OUTPUT\n";
    for (const auto& out : m.outputs) {
        mon.outputs.push_back("mon_" + out);
        os << "        mon_" << out << " : BOOL := FALSE;\n";
    }
    os << "    END_VAR\nBEGIN\n";
    for (size_t r = 0; r < m.inputs.size(); ++r) {
        os << "    IF " << m.inputs[r] << " THEN\n";
        for (size_t c = 0; c < m.outputs.size(); ++c) {
            if (m.cells[r][c] == IoCell::Blank) continue;
            os << "        mon_" << m.outputs[c] << " := "
               << (m.cells[r][c] == IoCell::Set ? "TRUE" : "FALSE") << ";\n";
        }
        os << "    END_IF;\n";
    }
    os << "END_FUNCTION_BLOCK\n";
    mon.text = os.str();
    if (m.priority == IoPriority::MutuallyExclusiveDeclared) {
        std::string at_most_one;
        for (size_t i = 0; i < m.inputs.size(); ++i)
            for (size_t j = i + 1; j < m.inputs.size(); ++j) {
                std::string pair = "NOT (" + m.inputs[i] + " AND " + m.inputs[j] + ")";
                at_most_one = at_most_one.empty() ? pair : at_most_one + " AND " + pair;
            }
        if (!at_most_one.empty()) mon.assume = at_most_one;
    }
    return mon;
}

// ---------------------------------------------------------------------------
// State machines
// ---------------------------------------------------------------------------

struct SmTransition {
    std::string src;
    std::string dst;
    ExprPtr guard;
    std::string guard_text;
    int line = 0;
};

struct StateMachineSpec {
    std::vector<std::string> states;
    std::string initial;
    std::vector<SmTransition> transitions;
    std::vector<std::string> inputs; // declared or first-appearance order

    int state_index(const std::string& s) const {
        for (size_t i = 0; i < states.size(); ++i)
            if (states[i] == s) return static_cast<int>(i);
        return -1;
    }
};

namespace detail {

inline void collect_guard_inputs(const Expr& e, std::vector<std::string>& inputs,
                                 const std::string& path, int line) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::VarRef>) {
                if (n.path.size() != 1)
                    fail(path, line, 1, "UnresolvedIdentifier",
                         "state machine guards use plain input names");
                if (std::find(inputs.begin(), inputs.end(), n.path[0]) == inputs.end())
                    inputs.push_back(n.path[0]);
            } else if constexpr (std::is_same_v<T, Expr::Unary>) {
                collect_guard_inputs(*n.operand, inputs, path, line);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                collect_guard_inputs(*n.lhs, inputs, path, line);
                collect_guard_inputs(*n.rhs, inputs, path, line);
            }
        },
        e.node);
}

inline bool eval_guard(const Expr& e, const std::map<std::string, bool>& env) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::BoolLit>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Expr::VarRef>) {
                return env.at(n.path[0]);
            } else if constexpr (std::is_same_v<T, Expr::Unary>) {
                return !eval_guard(*n.operand, env);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                bool l = eval_guard(*n.lhs, env);
                bool r = eval_guard(*n.rhs, env);
                switch (n.op) {
                case BinOp::And: return l && r;
                case BinOp::Or: return l || r;
                case BinOp::Xor: return l != r;
                case BinOp::Implies: return !l || r;
                case BinOp::Eq: return l == r;
                case BinOp::Ne: return l != r;
                default:
                    fail("", 0, 0, "TypeMismatch", "state machine guards are boolean-only");
                }
            } else {
                fail("", 0, 0, "TypeMismatch", "state machine guards are boolean-only");
            }
        },
        e.node);
}

} // namespace detail

// Line format: `state A`, `init A`, `input x` (optional, fixes input order),
// `trans A -> B when <expr>`; '#' starts a comment.
inline StateMachineSpec load_state_machine(const std::string& text, const std::string& path = "") {
    StateMachineSpec sm;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "state") {
            std::string name;
            ls >> name;
            if (name.empty()) fail(path, lineno, 1, "SyntaxError", "state needs a name");
            if (sm.state_index(name) >= 0)
                fail(path, lineno, 1, "DuplicateDeclaration", "state '" + name + "' repeated");
            sm.states.push_back(name);
        } else if (word == "init") {
            ls >> sm.initial;
        } else if (word == "input") {
            std::string name;
            ls >> name;
            if (std::find(sm.inputs.begin(), sm.inputs.end(), name) == sm.inputs.end())
                sm.inputs.push_back(name);
        } else if (word == "trans") {
            SmTransition t;
            t.line = lineno;
            std::string arrow, when;
            ls >> t.src >> arrow >> t.dst >> when;
            if (arrow != "->" || when != "when")
                fail(path, lineno, 1, "SyntaxError", "expected 'trans A -> B when <expr>'");
            std::getline(ls, t.guard_text);
            t.guard = parse_expression(t.guard_text, path);
            sm.transitions.push_back(std::move(t));
        } else {
            fail(path, lineno, 1, "SyntaxError", "unknown directive '" + word + "'");
        }
    }
    if (sm.states.empty()) fail(path, 1, 1, "SyntaxError", "no states declared");
    if (sm.state_index(sm.initial) < 0)
        fail(path, 1, 1, "UnresolvedIdentifier", "initial state '" + sm.initial + "' undeclared");
    for (const auto& t : sm.transitions) {
        if (sm.state_index(t.src) < 0 || sm.state_index(t.dst) < 0)
            fail(path, t.line, 1, "UnresolvedIdentifier",
                 "transition endpoints must be declared states");
        detail::collect_guard_inputs(*t.guard, sm.inputs, path, t.line);
    }
    return sm;
}

struct SmConflict {
    std::string state;
    int t1 = 0, t2 = 0; // indices into transitions
    std::map<std::string, bool> witness;
};

struct SmGap {
    std::string state;
    std::map<std::string, bool> witness;
};

namespace detail {

template <typename Fn> inline void enumerate_valuations(const std::vector<std::string>& inputs, Fn fn) {
    size_t n = inputs.size();
    for (unsigned long long bits = 0; bits < (1ull << n); ++bits) {
        std::map<std::string, bool> env;
        for (size_t i = 0; i < n; ++i) env[inputs[i]] = (bits >> i) & 1;
        fn(env);
    }
}

} // namespace detail

// Every (state, transition pair) with a valuation enabling both guards; the
// reported witness is the first one in enumeration order.
inline std::vector<SmConflict> check_sm_determinism(const StateMachineSpec& sm) {
    if (sm.inputs.size() > 16)
        fail("", 0, 0, "TooManyInputs", "determinism check enumerates at most 16 inputs");
    std::vector<SmConflict> out;
    for (const auto& state : sm.states) {
        std::vector<int> ts;
        for (size_t i = 0; i < sm.transitions.size(); ++i)
            if (sm.transitions[i].src == state) ts.push_back(static_cast<int>(i));
        for (size_t i = 0; i < ts.size(); ++i) {
            for (size_t j = i + 1; j < ts.size(); ++j) {
                bool found = false;
                detail::enumerate_valuations(sm.inputs, [&](const std::map<std::string, bool>& env) {
                    if (found) return;
                    if (detail::eval_guard(*sm.transitions[ts[i]].guard, env) &&
                        detail::eval_guard(*sm.transitions[ts[j]].guard, env)) {
                        out.push_back({state, ts[i], ts[j], env});
                        found = true;
                    }
                });
            }
        }
    }
    return out;
}

// Valuations at each state where no outgoing guard holds.
inline std::vector<SmGap> check_sm_completeness(const StateMachineSpec& sm) {
    if (sm.inputs.size() > 16)
        fail("", 0, 0, "TooManyInputs", "completeness check enumerates at most 16 inputs");
    std::vector<SmGap> out;
    for (const auto& state : sm.states) {
        std::vector<int> ts;
        for (size_t i = 0; i < sm.transitions.size(); ++i)
            if (sm.transitions[i].src == state) ts.push_back(static_cast<int>(i));
        bool found = false;
        detail::enumerate_valuations(sm.inputs, [&](const std::map<std::string, bool>& env) {
            if (found) return;
            for (int t : ts)
                if (detail::eval_guard(*sm.transitions[t].guard, env)) return;
            out.push_back({state, env});
            found = true;
        });
    }
    return out;
}

struct SmMonitor {
    std::string block_name;
    std::string text;
    std::string state_var = "mon_state";       // INT holding the expected encoding
    std::map<std::string, long long> encoding; // state name -> value
};

// Expected-state tracker: one outer IF on the current encoding, inner ladder
// per declared transition, self-loop gaps keep the state. State values follow
// the supplied encoding so the agreement assertion is a plain equality.
inline SmMonitor compile_state_machine(const StateMachineSpec& sm,
                                       const std::map<std::string, long long>& encoding) {
    SmMonitor mon;
    mon.block_name = "state_machine_monitor";
    mon.encoding = encoding;
    for (const auto& s : sm.states)
        if (!encoding.count(s))
            fail("", 0, 0, "UnresolvedIdentifier", "no encoding for state '" + s + "'");
    long long hi = 0;
    for (const auto& [_, v] : encoding) hi = std::max(hi, v);
    std::ostringstream os;
    os << "FUNCTION_BLOCK " << mon.block_name << "\n    VAR_INPUT\n";
    for (const auto& in : sm.inputs) os << "        " << in << " : BOOL;\n";
    os << "    END_VAR\n    VAR\n        " << mon.state_var
       << " : INT := " << encoding.at(sm.initial) << ";\n    END_VAR\nBEGIN\n";
    os << "    //#RANGE(" << mon.state_var << ", 0, " << hi << ");\n";
    bool outer_first = true;
    for (const auto& state : sm.states) {
        os << "    " << (outer_first ? "IF" : "ELSIF") << " " << mon.state_var << " = "
           << encoding.at(state) << " THEN\n";
        outer_first = false;
        bool inner_first = true;
        for (const auto& t : sm.transitions) {
            if (t.src != state) continue;
            os << "        " << (inner_first ? "IF" : "ELSIF") << " ("
               << print_expr(*t.guard) << ") THEN\n";
            os << "            " << mon.state_var << " := " << encoding.at(t.dst) << ";\n";
            inner_first = false;
        }
        if (!inner_first) os << "        END_IF;\n";
    }
    os << "    END_IF;\nEND_FUNCTION_BLOCK\n";
    mon.text = os.str();
    return mon;
}

// ---------------------------------------------------------------------------
// Logic diagrams
// ---------------------------------------------------------------------------

struct LogicDiagram {
    std::string output;
    ExprPtr tree;
};

namespace detail {

struct PrefixParser {
    const std::string& text;
    const std::string& path;
    size_t pos = 0;

    void skip() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    std::string word() {
        skip();
        std::string w;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            w += text[pos++];
        if (w.empty()) fail(path, 1, static_cast<int>(pos) + 1, "SyntaxError", "expected a name");
        return w;
    }
    void expect(char c) {
        skip();
        if (pos >= text.size() || text[pos] != c)
            fail(path, 1, static_cast<int>(pos) + 1, "SyntaxError",
                 std::string("expected '") + c + "'");
        ++pos;
    }
    bool peek(char c) {
        skip();
        return pos < text.size() && text[pos] == c;
    }

    ExprPtr node() {
        std::string w = word();
        std::string up;
        for (char ch : w) up += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (up == "AND" || up == "OR" || up == "NOT") {
            expect('(');
            std::vector<ExprPtr> kids;
            kids.push_back(node());
            while (peek(',')) {
                ++pos;
                kids.push_back(node());
            }
            expect(')');
            if (up == "NOT") {
                if (kids.size() != 1)
                    fail(path, 1, 1, "SyntaxError", "NOT takes exactly one operand");
                return make_expr(Expr::Unary{UnOp::Not, kids[0]});
            }
            if (kids.size() < 2)
                fail(path, 1, 1, "SyntaxError", up + " takes at least two operands");
            ExprPtr acc = kids[0];
            for (size_t i = 1; i < kids.size(); ++i)
                acc = make_expr(
                    Expr::Binary{up == "AND" ? BinOp::And : BinOp::Or, acc, kids[i]});
            return acc;
        }
        return make_expr(Expr::VarRef{{w}});
    }
};

} // namespace detail

// `Out = AND(OR(In_1,In_2),In_3)` — prefix gate text.
inline LogicDiagram load_logic_diagram(const std::string& text, const std::string& path = "") {
    auto eq = text.find('=');
    if (eq == std::string::npos)
        fail(path, 1, 1, "SyntaxError", "expected '<output> = <prefix expression>'");
    LogicDiagram d;
    for (char c : text.substr(0, eq))
        if (!std::isspace(static_cast<unsigned char>(c))) d.output += c;
    if (d.output.empty()) fail(path, 1, 1, "SyntaxError", "missing output name");
    std::string rhs = text.substr(eq + 1);
    detail::PrefixParser p{rhs, path};
    d.tree = p.node();
    p.skip();
    if (p.pos != rhs.size())
        fail(path, 1, static_cast<int>(p.pos) + 1, "SyntaxError", "trailing text after expression");
    return d;
}

inline std::pair<std::string, ExprPtr> compile_logic_diagram(const LogicDiagram& d) {
    return {d.output, d.tree};
}

// ---------------------------------------------------------------------------
// Composition: target block + optional monitor, lockstep on shared inputs
// ---------------------------------------------------------------------------

struct Composition {
    std::string text;        // harness unit source (instances + driver block)
    std::string entry;       // driver block name
    std::vector<std::string> assertion_names;
};

struct CompositionSpec {
    std::string target_block;
    std::vector<std::pair<std::string, std::string>> shared_inputs; // (name, target input)
    std::string monitor_block;                                      // empty = no monitor
    std::vector<std::string> monitor_inputs;                        // parallel wiring
    std::vector<std::pair<std::string, std::string>> assertions;    // (name, expr text)
    std::vector<std::string> assumes;                               // expr texts, pre-call
};

// The driver havocs its own inputs, copies them into both instances, calls
// them, then checks the assertions; requirement expressions refer to
// "t_inst"/"m_inst" fields.
inline Composition compose_check(const CompositionSpec& spec) {
    Composition c;
    c.entry = "check_" + spec.target_block;
    std::ostringstream os;
    os << "DATA_BLOCK \"t_inst\" " << spec.target_block << "\nBEGIN\nEND_DATA_BLOCK\n\n";
    if (!spec.monitor_block.empty())
        os << "DATA_BLOCK \"m_inst\" " << spec.monitor_block << "\nBEGIN\nEND_DATA_BLOCK\n\n";
    os << "FUNCTION_BLOCK " << c.entry << "\n    VAR_INPUT\n";
    for (const auto& [name, _] : spec.shared_inputs) os << "        " << name << " : BOOL;\n";
    os << "    END_VAR\nBEGIN\n";
    int k = 0;
    for (const auto& a : spec.assumes)
        os << "    //#ASSUME(" << a << ") : req_assume" << ++k << ";\n";
    for (const auto& [name, target] : spec.shared_inputs)
        os << "    \"t_inst\"." << target << " := " << name << ";\n";
    for (size_t i = 0; i < spec.monitor_inputs.size(); ++i)
        os << "    \"m_inst\"." << spec.monitor_inputs[i] << " := " << spec.shared_inputs[i].first
           << ";\n";
    os << "    " << spec.target_block << ".\"t_inst\"();\n";
    if (!spec.monitor_block.empty()) os << "    " << spec.monitor_block << ".\"m_inst\"();\n";
    for (const auto& [name, expr] : spec.assertions) {
        os << "    //#ASSERT(" << expr << ") : " << name << ";\n";
        c.assertion_names.push_back(name);
    }
    os << "END_FUNCTION_BLOCK\n";
    c.text = os.str();
    return c;
}

} // namespace stverif
