#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lutrev/netlist.hpp"
#include "lutrev/truth_table.hpp"

namespace lutrev {

// Shared flip-flop control signature. Flip-flops belong to the same group
// only when the whole tuple matches, including the reset kind carried by the
// primitive type.
struct FfControl {
    NetIndex clk = kInvalidIndex;
    NetIndex ce = kInvalidIndex;
    NetIndex rst = kInvalidIndex;
    Prim ff_prim = Prim::Fdre;
    bool operator==(const FfControl&) const = default;
    bool operator<(const FfControl& o) const {
        return std::tie(clk, ce, rst, ff_prim) < std::tie(o.clk, o.ce, o.rst, o.ff_prim);
    }
};

enum class ModuleKind : uint8_t {
    Adder,
    Subtractor,
    Comparator,
    AddSub,
    Alu,
    Counter,
    ShiftRegister,
    Register,
    BitwiseWord,
    UnknownCarry,
};

const char* module_kind_name(ModuleKind k);

// One recovered word-level module. `gates` is the set this module claims from
// the flat netlist; stages never claim a gate twice. Input words and the
// output word are LSB-first nets. For comparators the output is one bit.
struct InferredModule {
    ModuleKind kind = ModuleKind::UnknownCarry;
    // Word operation for arithmetic/bitwise kinds ("add", "ge", "xor", ...);
    // "up"/"down" for counters; empty when not applicable.
    std::string op;
    std::vector<GateIndex> gates;
    std::vector<std::vector<NetIndex>> inputs;
    std::vector<std::string> input_names;
    // Marks inputs that are single-net controls broadcast across the word
    // (bitwise mux selects). Parallel to `inputs` when non-empty.
    std::vector<bool> input_scalar;
    std::vector<NetIndex> output;
    // Select/opcode nets, LSB first (AddSub: one select; ALU: opcode word).
    std::vector<NetIndex> selects;
    // Opcode value -> operation, from discovery. AddSub uses values 0/1.
    std::map<uint64_t, std::string> op_map;
    // False when operand words were recovered positionally but could not be
    // attributed to semantically distinct operands; such modules are emitted
    // as structural transcriptions rather than behavioral words.
    bool words_resolved = true;
    // True when the output word was traced through a register stage; `ctl`
    // and `init` then describe the absorbed flip-flops.
    bool registered_output = false;
    FfControl ctl;
    uint64_t init = 0;
    // Serial input for shift registers.
    NetIndex serial_in = kInvalidIndex;
    // Aligned per-bit function for BitwiseWord, variable order = `inputs`.
    TtBits bw_table;
    // Free-form notes surfaced in the report (ambiguities, diagnostics).
    std::string detail;
};

inline unsigned module_width(const InferredModule& m) {
    return unsigned(m.output.size());
}

} // namespace lutrev
