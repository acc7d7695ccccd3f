#pragma once

// Timing diagrams and harness generation. A diagram is a per-signal,
// per-cycle grid of High/Low/Unconstrained cells; the generated harness
// drives a target block instance cycle by cycle, asserting every output cell.
// Unconstrained input cells are handled by omitting the assignment, which
// leaves the value nondeterministic for the verifier.

#include <algorithm>
#include <string>
#include <vector>

#include "stverif/ast.hpp"
#include "stverif/csv.hpp"
#include "stverif/diag.hpp"

namespace stverif {

enum class Cell { High, Low, Unconstrained };
enum class SignalDir { Input, Output };

struct Signal {
    std::string name;
    SignalDir dir = SignalDir::Input;
    std::vector<Cell> cells; // exactly `cycles` entries
};

struct TimingDiagram {
    int cycles = 0;
    std::vector<Signal> signals;

    const Signal* find(const std::string& name) const {
        for (const auto& s : signals)
            if (s.name == name) return &s;
        return nullptr;
    }
};

// CSV schema: header `signal,dir,1,2,...,c_t`; dir in {in,out}; cells 1/0/U.
inline TimingDiagram load_timing_diagram(const std::string& text, const std::string& path = "") {
    auto rows = parse_csv(text);
    if (rows.empty() || rows[0].size() < 3 || rows[0][0] != "signal" || rows[0][1] != "dir")
        fail(path, 1, 1, "RaggedRow", "header must be 'signal,dir,1,2,...'");
    TimingDiagram d;
    d.cycles = static_cast<int>(rows[0].size()) - 2;
    for (int c = 0; c < d.cycles; ++c) {
        if (rows[0][c + 2] != std::to_string(c + 1))
            fail(path, 1, 1, "RaggedRow", "header cycle columns must count 1..c_t");
    }
    for (size_t r = 1; r < rows.size(); ++r) {
        int line = static_cast<int>(r) + 1;
        if (rows[r].size() != rows[0].size())
            fail(path, line, 1, "RaggedRow",
                 "row '" + rows[r][0] + "' has " + std::to_string(rows[r].size() - 2) +
                     " cells, expected " + std::to_string(d.cycles));
        Signal s;
        s.name = rows[r][0];
        if (d.find(s.name))
            fail(path, line, 1, "DuplicateDeclaration", "signal '" + s.name + "' appears twice");
        std::string dir;
        for (char ch : rows[r][1])
            dir += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (dir == "in" || dir == "input")
            s.dir = SignalDir::Input;
        else if (dir == "out" || dir == "output")
            s.dir = SignalDir::Output;
        else
            fail(path, line, 1, "UnknownCellValue", "direction must be 'in' or 'out'");
        for (int c = 0; c < d.cycles; ++c) {
            const std::string& cell = rows[r][c + 2];
            if (cell == "1")
                s.cells.push_back(Cell::High);
            else if (cell == "0")
                s.cells.push_back(Cell::Low);
            else if (cell == "U" || cell == "u") {
                if (s.dir == SignalDir::Output)
                    fail(path, line, 1, "UnconstrainedOutput",
                         "output '" + s.name + "' may not be unconstrained (cycle " +
                             std::to_string(c + 1) + ")");
                s.cells.push_back(Cell::Unconstrained);
            } else {
                fail(path, line, 1, "UnknownCellValue",
                     "cell '" + cell + "' is not one of 1, 0, U");
            }
        }
        d.signals.push_back(std::move(s));
    }
    bool has_in = false, has_out = false;
    for (const auto& s : d.signals) {
        has_in |= s.dir == SignalDir::Input;
        has_out |= s.dir == SignalDir::Output;
    }
    if (!has_in || !has_out)
        fail(path, 1, 1, "RaggedRow", "diagram needs at least one input and one output signal");
    return d;
}

struct HarnessSource {
    std::string text;
    std::string harness_block;  // call_<target>
    std::string instance;       // <target>_inst
    std::vector<std::string> assertion_names;
};

// Emits the driver block: a cycle counter, an IF/ELSIF ladder assigning the
// constrained inputs, one call to the instance, one assertion per output
// cell, then the counter increment. Regeneration from the same diagram is
// byte-identical.
inline HarnessSource generate_harness(const TimingDiagram& d, const FunctionBlockDecl& target) {
    for (const auto& s : d.signals) {
        const VarDecl* v = target.find_var(s.name);
        if (!v)
            fail("", 0, 0, "SignalNotInInterface",
                 "'" + target.name + "' has no variable '" + s.name + "'");
        bool dir_ok = (s.dir == SignalDir::Input && v->section == VarSection::Input) ||
                      (s.dir == SignalDir::Output && v->section == VarSection::Output);
        if (!dir_ok)
            fail("", 0, 0, "DirectionMismatch",
                 "signal '" + s.name + "' does not match the section of '" + target.name + "." +
                     s.name + "'");
        if (v->type != Ty::Bool)
            fail("", 0, 0, "DirectionMismatch",
                 "signal '" + s.name + "' must be BOOL in '" + target.name + "'");
    }

    HarnessSource h;
    h.instance = target.name + "_inst";
    h.harness_block = "call_" + target.name;
    std::ostringstream os;
    os << "DATA_BLOCK \"" << h.instance << "\" " << target.name << "\nBEGIN\nEND_DATA_BLOCK\n\n";
    os << "FUNCTION_BLOCK " << h.harness_block << "\n";
    os << "    VAR\n        cycle : INT := 1;\n    END_VAR\nBEGIN\n\n";
    for (int c = 0; c < d.cycles; ++c) {
        os << (c == 0 ? "IF" : "ELSIF") << " cycle=" << c + 1 << " THEN\n";
        for (const auto& s : d.signals) {
            if (s.dir != SignalDir::Input || s.cells[c] == Cell::Unconstrained) continue;
            os << "    \"" << h.instance << "\"." << s.name << " := "
               << (s.cells[c] == Cell::High ? "TRUE" : "FALSE") << ";\n";
        }
    }
    os << "END_IF;\n\n";
    os << target.name << ".\"" << h.instance << "\"();\n\n";
    int k = 0;
    for (const auto& s : d.signals) {
        if (s.dir != SignalDir::Output) continue;
        for (int c = 0; c < d.cycles; ++c) {
            std::string name = "assertion" + std::to_string(++k);
            os << "//#ASSERT(cycle=" << c + 1 << " --> (\"" << h.instance << "\"." << s.name
               << " = " << (s.cells[c] == Cell::High ? "TRUE" : "FALSE") << ")) : " << name
               << ";\n";
            h.assertion_names.push_back(name);
        }
    }
    os << "\ncycle := cycle + 1;\n\nEND_FUNCTION_BLOCK\n";
    h.text = os.str();
    return h;
}

// Loop-unwinding bound: c_c covers the slowest timer expiry
// (int(PT / t_cycle) + 1 per timer, 0 with no timers), c_t the diagram
// length; the bound is their maximum.
inline int compute_unwinding(const std::vector<long long>& timer_pts, long long t_cycle,
                             int diagram_cycles) {
    if (t_cycle <= 0) fail("", 0, 0, "ZeroCycleTime", "cycle time must be positive");
    long long c_c = 0;
    for (long long pt : timer_pts) c_c = std::max(c_c, pt / t_cycle + 1);
    return static_cast<int>(std::max<long long>(c_c, diagram_cycles));
}

} // namespace stverif
