#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lutrev/carry_chain.hpp"

namespace lutrev {

struct AluConfig {
    // Shared control nets beyond this count stop the search.
    unsigned max_opcode_nets = 8;
    // The opcode miter enumerates all operand pairs when 2*width is at most
    // this many bits; above it a fixed random sample decides and the chosen
    // operation is re-verified with a second sample stream.
    unsigned equiv_exhaustive_bits = 20;
    unsigned equiv_samples = 100000;
    uint64_t seed = 1;
};

// A chain whose word output funnels through private combinational logic into
// one register bank, with exactly two per-position data nets once shared
// control nets are set aside.
struct AluCandidate {
    std::vector<GateIndex> cone_gates;  // reverse side, subject to claiming
    std::vector<GateIndex> fwd_gates;   // O-to-register side, always private
    std::vector<GateIndex> chips;
    std::vector<GateIndex> out_ffs;
    std::vector<NetIndex> a, b;         // operand words, LSB first
    std::vector<NetIndex> opcode;       // sorted by net id; op_map bit j = opcode[j]
    std::vector<NetIndex> d_word;       // register D nets, the region outputs
    std::vector<NetIndex> q_word;       // register Q nets, the module output
    FfControl ctl;
    uint64_t init = 0;
    bool split_clean = false;           // operand words came from source tags
    bool sampled_equiv = false;         // set by discovery when not exhaustive
};

std::optional<AluCandidate> extract_alu_candidate(const Netlist& nl, const ChainView& v,
                                                  const CarryContext& ctx,
                                                  const AluConfig& cfg);

// Simulates the candidate region against each reference operation for every
// opcode assignment. Tries both operand orders (subtraction and comparisons
// are not symmetric) and swaps the candidate words to the order that works.
std::optional<std::map<uint64_t, std::string>> discover_opcodes(const Netlist& nl,
                                                                AluCandidate& cand,
                                                                const AluConfig& cfg);

std::optional<InferredModule> identify_alu(const Netlist& nl, const ChainView& v,
                                           const CarryContext& ctx, const AluConfig& cfg);

} // namespace lutrev
