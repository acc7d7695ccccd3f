#pragma once

// Discrete-time models of the built-in blocks. Time advances only here, by
// exactly one cycle time per call; an instance that is not called keeps its
// state frozen.

#include <algorithm>

namespace stverif {

struct TonState {
    long long pt = 0; // preset, ms (last written value persists across calls)
    long long et = 0; // elapsed, ms; saturates at pt
    bool q = false;
    bool in = false; // last driven input, used when a call omits IN
    bool in_prev = false;
};

// On-delay timer. Rising edge restarts ET at 0; ET accrues t_cycle per call
// while IN holds, saturating at PT; Q = IN held long enough. IN = false
// resets.
inline TonState ton_step(TonState s, bool in, long long pt, long long t_cycle) {
    TonState n = s;
    n.in = in;
    n.pt = pt < 0 ? 0 : pt;
    if (!in) {
        n.et = 0;
        n.q = false;
    } else if (!s.in_prev) {
        n.et = 0;
        n.q = n.et >= n.pt;
    } else {
        n.et = std::min(s.et + t_cycle, n.pt);
        n.q = n.et >= n.pt;
    }
    n.in_prev = in;
    return n;
}

struct CtudState {
    long long cv = 0;
    long long pv = 0;
    bool qu = false;
    bool qd = true;
    bool cu = false;
    bool cd = false;
    bool r = false;
    bool ld = false;
    bool cu_prev = false;
    bool cd_prev = false;
};

// Up/down counter per the standard semantics: reset dominates load, which
// dominates counting; counting reacts to rising edges only and saturates at
// the declared INT domain.
inline CtudState ctud_step(CtudState s, bool cu, bool cd, bool r, bool ld, long long pv,
                           long long dom_lo, long long dom_hi) {
    CtudState n = s;
    n.cu = cu;
    n.cd = cd;
    n.r = r;
    n.ld = ld;
    n.pv = pv;
    if (r) {
        n.cv = 0;
    } else if (ld) {
        n.cv = pv;
    } else {
        if (cu && !s.cu_prev) n.cv = std::min(n.cv + 1, dom_hi);
        if (cd && !s.cd_prev) n.cv = std::max(n.cv - 1, dom_lo);
    }
    n.qu = n.cv >= n.pv;
    n.qd = n.cv <= 0;
    n.cu_prev = cu;
    n.cd_prev = cd;
    return n;
}

} // namespace stverif
