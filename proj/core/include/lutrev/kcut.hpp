#pragma once

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lutrev/carry_chain.hpp"
#include "lutrev/module.hpp"
#include "lutrev/netlist.hpp"
#include "lutrev/truth_table.hpp"

namespace lutrev {

struct CutConfig {
    unsigned k = 6;
    unsigned max_cuts_per_net = 128;
};

// Leaves sorted ascending by net index. Constant nets never appear as leaves.
struct Cut {
    std::vector<NetIndex> leaves;
};

// Bottom-up cut enumeration over LUT/MUXF cones. Expansion stops at nets
// without a driver and at sequential, CARRY4, RAM, or non-usable drivers;
// such nets become leaves. Per-net results are memoized and deterministic:
// sorted by size then leaf order, capped at max_cuts_per_net, dominated cuts
// (proper supersets of another cut) removed. The trivial cut {n} is always
// present on signal nets.
class CutEnumerator {
public:
    explicit CutEnumerator(const Netlist& nl, CutConfig cfg = {});
    CutEnumerator(const Netlist& nl, CutConfig cfg, std::unordered_set<GateIndex> usable);

    const std::vector<Cut>& cuts(NetIndex n);

private:
    bool expandable(NetIndex n) const;
    std::vector<Cut> compute(NetIndex n);

    const Netlist& nl_;
    CutConfig cfg_;
    bool restricted_ = false;
    std::unordered_set<GateIndex> usable_;
    std::unordered_map<NetIndex, std::vector<Cut>> memo_;
};

// Truth table of `net` over the cut leaves plus the cone gates between the
// leaves and the net, in topological order. `leaves` is the surviving
// support, ascending: leaves the function does not depend on are dropped.
struct CutFunction {
    TtBits fn;
    std::vector<NetIndex> leaves;
    std::vector<GateIndex> gates;
};

CutFunction cut_function(const Netlist& nl, NetIndex net, const Cut& cut);

// One destination bit the bitwise stage tries to explain: bit `bit` of the
// word named `group` (a register bank's D word or an output port).
struct WordRoot {
    std::string group;
    unsigned bit = 0;
    NetIndex net = kInvalidIndex;
};

// Roots from identified register banks (their D words) and the netlist's
// output ports. Roots whose driving logic is claimed elsewhere are harmless:
// no usable cut survives there.
std::vector<WordRoot> bitwise_word_roots(const Netlist& nl,
                                         const std::vector<InferredModule>& seq_modules);

// Recovers bitwise word operations: per destination bit the cut functions are
// keyed by (column identities, reordered truth table); bits of one group that
// agree on a key form a word. Columns are either a scalar net shared by every
// bit or a word walking one source with a constant bit offset. Gate claims
// are leak checked; a module always keeps its full behavioral function even
// when a shared gate stays with the fallback.
std::vector<InferredModule> detect_bitwise_words(const Netlist& nl, const CarryContext& ctx,
                                                 const std::vector<WordRoot>& roots,
                                                 const std::unordered_set<GateIndex>& usable,
                                                 const CutConfig& cfg = {});

} // namespace lutrev
