#pragma once

// Concrete-trace simulator: drives the cycle automaton with explicit
// per-cycle input valuations. Deterministic; pragma violations are recorded
// in the trace but do not stop it.

#include <map>
#include <string>
#include <vector>

#include "stverif/cfa.hpp"
#include "stverif/csv.hpp"

namespace stverif {

using Valuation = std::map<std::string, long long>;

struct CycleRecord {
    int cycle = 1;                  // 1-based scan index
    std::vector<long long> inputs;  // aligned with CycleAutomaton::cycle_vars
    State end_state;                // values after the scan
    std::vector<CycleEvent> events; // assert/assume violations during the scan
};

using Trace = std::vector<CycleRecord>;

inline std::vector<long long> bind_inputs(const CycleAutomaton& a, const Valuation& v, int cycle) {
    std::vector<long long> out;
    out.reserve(a.cycle_vars.size());
    for (int slot : a.cycle_vars) {
        auto it = v.find(a.slots[slot].name);
        if (it == v.end())
            fail("", 0, 0, "MissingInput",
                 "cycle " + std::to_string(cycle) + " has no value for input '" +
                     a.slots[slot].name + "'");
        out.push_back(it->second);
    }
    return out;
}

inline Trace run_trace(const CycleAutomaton& a, const std::vector<Valuation>& inputs) {
    Trace trace;
    State s = a.initial_state();
    for (size_t i = 0; i < inputs.size(); ++i) {
        CycleRecord rec;
        rec.cycle = static_cast<int>(i) + 1;
        rec.inputs = bind_inputs(a, inputs[i], rec.cycle);
        CycleOutcome out = execute_cycle(a, std::move(s), rec.inputs, /*stop_at_assume=*/false);
        rec.end_state = std::move(out.state);
        rec.events = std::move(out.events);
        s = rec.end_state;
        trace.push_back(std::move(rec));
    }
    return trace;
}

// Runs the trace using pre-bound input vectors (counterexample replay).
inline Trace run_trace_bound(const CycleAutomaton& a,
                             const std::vector<std::vector<long long>>& inputs) {
    Trace trace;
    State s = a.initial_state();
    for (size_t i = 0; i < inputs.size(); ++i) {
        CycleRecord rec;
        rec.cycle = static_cast<int>(i) + 1;
        rec.inputs = inputs[i];
        CycleOutcome out = execute_cycle(a, std::move(s), rec.inputs, /*stop_at_assume=*/false);
        rec.end_state = out.state;
        rec.events = std::move(out.events);
        s = rec.end_state;
        trace.push_back(std::move(rec));
    }
    return trace;
}

inline std::string format_value(const Slot& slot, long long v) {
    if (slot.type == Ty::Bool) return v != 0 ? "TRUE" : "FALSE";
    return std::to_string(v);
}

// Header `cycle,<var>...`, one row per scan with end-of-cycle values.
inline std::string trace_to_csv(const CycleAutomaton& a, const Trace& trace) {
    std::ostringstream os;
    os << "cycle";
    for (size_t i = 0; i < a.slots.size(); ++i)
        if (a.slots[i].exported) os << ',' << a.slots[i].name;
    os << '\n';
    for (const auto& rec : trace) {
        os << rec.cycle;
        for (size_t i = 0; i < a.slots.size(); ++i)
            if (a.slots[i].exported) os << ',' << format_value(a.slots[i], rec.end_state[i]);
        os << '\n';
    }
    return os.str();
}

inline long long parse_value_cell(const std::string& cell, const std::string& where) {
    std::string up;
    for (char c : cell) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "TRUE") return 1;
    if (up == "FALSE") return 0;
    try {
        size_t used = 0;
        long long v = std::stoll(cell, &used);
        if (used == cell.size()) return v;
    } catch (...) {
    }
    fail(where, 0, 0, "UnknownCellValue", "cannot read value '" + cell + "'");
}

// Input CSV for simulation: header `cycle,<var>...`; unknown columns are
// ignored so a previously exported trace can be fed back in.
inline std::vector<Valuation> parse_inputs_csv(const std::string& text, const std::string& path) {
    auto rows = parse_csv(text);
    if (rows.empty() || rows[0].empty() || rows[0][0] != "cycle")
        fail(path, 1, 1, "MissingInput", "input CSV must start with a 'cycle' header column");
    std::vector<Valuation> out;
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            fail(path, static_cast<int>(r) + 1, 1, "RaggedRow",
                 "row has " + std::to_string(rows[r].size()) + " cells, header has " +
                     std::to_string(rows[0].size()));
        Valuation v;
        for (size_t c = 1; c < rows[r].size(); ++c)
            v[rows[0][c]] = parse_value_cell(rows[r][c], path);
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace stverif
