#pragma once

#include <string>
#include <vector>

#include "etopaq/ta.hpp"

namespace etopaq {

enum class Op { Inc, Dec, IfZero, Halt };

struct Command {
    Op op = Op::Halt;
    int counter = 1;  // 1 or 2
    int goto_zero = -1;
    int goto_nonzero = -1;
};

struct MinskyMachine {
    std::vector<Command> commands;  // the last one is HALT
    void check() const;             // throws on a malformed machine
};

// "INC C1" / "DEC C2" / "IFZ C1 k j" / "HALT", one per line, '#' comments
MinskyMachine parse_machine(const std::string& text);

// gadget composition; `raw` skips the final-urgency normalization
TimedAutomaton encode(const MinskyMachine& m, bool raw = false);

struct StructuralReport {
    bool ok = true;
    std::vector<std::string> mismatches;  // "gadget/family: expected N, got M"
    size_t locations = 0, edges = 0;
};

// closed-form location and edge counts per gadget
size_t expected_locations(const MinskyMachine& m);
size_t expected_edges(const MinskyMachine& m);

StructuralReport structural_check(const TimedAutomaton& ta, const MinskyMachine& m);

}  // namespace etopaq
