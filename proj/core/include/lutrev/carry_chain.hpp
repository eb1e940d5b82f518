#pragma once

#include <array>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lutrev/function_library.hpp"
#include "lutrev/module.hpp"
#include "lutrev/netlist.hpp"

namespace lutrev {

// One maximal carry chain, head first. Heads are CARRY4s whose CI is not fed
// by another CARRY4's CO3; chains extend along CO3 -> CI links.
struct CarryChain {
    std::vector<GateIndex> chips;
    std::string note;
};

// Per-position view of a chain. `width` counts positions up to the highest
// one whose O or CO actually drives something (chain-link CO loads excluded);
// trailing constant-tied positions fall off.
struct ChainPosition {
    GateIndex chip = kInvalidIndex;
    unsigned pos = 0;
    NetIndex s, di, o, co;
    bool o_loaded = false, co_loaded = false;
};

struct ChainView {
    std::vector<ChainPosition> positions;
    NetIndex ci0 = kInvalidIndex, cyinit = kInvalidIndex;
    unsigned width = 0;
    const CarryChain* chain = nullptr;
};

struct ChainAnalysisConfig {
    // Reverse-cone support cap per S/DI pin for single-op matching.
    unsigned pure_max_support = 5;
    // Select-line search gives up beyond this many shared nets.
    unsigned max_select_nets = 2;
};

// Shared lookup context: all chains plus maps used for operand word naming.
struct CarryContext {
    std::vector<CarryChain> chains;
    // O-pin net -> (chain ordinal, position): tags operands produced by
    // other chains.
    std::unordered_map<NetIndex, std::pair<unsigned, unsigned>> chain_o;
    // FF gate -> (control bucket ordinal, index within bucket).
    std::unordered_map<GateIndex, std::pair<unsigned, unsigned>> ff_rank;
    // Primary-input net -> (input port ordinal, bit).
    std::unordered_map<NetIndex, std::pair<unsigned, unsigned>> pi_bit;
};

std::vector<CarryChain> find_carry_chains(const Netlist& nl);
CarryContext build_carry_context(const Netlist& nl);
ChainView make_chain_view(const Netlist& nl, const CarryChain& chain);

// Single-operation match: every used position's S/DI cone pair maps to the
// same library entry under NPN canonization, the initial carry is constant,
// and raw cone polarities agree with the operation's structure. Recovers
// operand words and absorbs a clean output register stage.
std::optional<InferredModule> identify_pure_op(const Netlist& nl, const FunctionLibrary& lib,
                                               const ChainView& v, const CarryContext& ctx,
                                               const ChainAnalysisConfig& cfg);

// Nets feeding every used S cone, candidates for select lines. Empty when
// there are none or more than the configured cap.
std::vector<NetIndex> detect_select_nets(const Netlist& nl, const ChainView& v,
                                         const ChainAnalysisConfig& cfg);

// Select-line cross-optimization: cofactors the S/DI/initial-carry cones
// under every select assignment and requires each to resolve to a library
// entry. Only runs when the chain's word output is closed (feeds only FF D
// pins or primary outputs), so shared-function ALUs stay untouched.
std::optional<InferredModule> identify_cross_optimized(const Netlist& nl,
                                                       const FunctionLibrary& lib,
                                                       const ChainView& v,
                                                       const CarryContext& ctx,
                                                       const ChainAnalysisConfig& cfg);

// Fallback: claims the chips for transcription, nothing else.
InferredModule unknown_chain_module(const Netlist& nl, const ChainView& v);

// Absorbs the register bank behind a module's output word when every output
// net drives exactly one FF D pin and nothing else and all those FFs share
// one control tuple. Rewrites output to the Q nets and claims the FFs.
bool try_absorb_output_ffs(const Netlist& nl, InferredModule& m);

// Names where a net comes from: an input port bit ("p<k>"), an FF control
// group Q bit ("f<k>"), another chain's output bit ("c<k>"), or itself
// ("n<id>", idx 0). Bits of one word share src and walk idx.
struct SrcTag {
    std::string src;
    long idx = 0;
};

SrcTag source_tag(const Netlist& nl, const CarryContext& ctx, NetIndex n);

// Splits per-position unordered operand pairs into two words such that each
// word walks one source (port, FF control group, chain word) with a constant
// bit offset. Returns true when such a split exists; otherwise falls back to
// a per-position split by net id and returns false.
bool resolve_symmetric(const Netlist& nl, const CarryContext& ctx,
                       const std::vector<std::array<NetIndex, 2>>& pairs,
                       std::vector<NetIndex>& a, std::vector<NetIndex>& b);

// Drops candidate gates whose outputs are visible outside the module (a
// primary output, or a load on a gate that is neither claimed nor one of the
// anchors). Such gates stay with the fallback transcriber.
std::vector<GateIndex> claimable_gates(const Netlist& nl, std::vector<GateIndex> cand,
                                       const std::vector<GateIndex>& anchors);

} // namespace lutrev
