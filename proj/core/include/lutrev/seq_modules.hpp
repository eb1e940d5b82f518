#pragma once

#include <optional>
#include <vector>

#include "lutrev/module.hpp"
#include "lutrev/netlist.hpp"

namespace lutrev {

struct SeqConfig {
    // Counter verification walks this many transitions from the initial
    // state (capped by the full period) and then probes random states.
    unsigned max_counter_steps = 4096;
    unsigned counter_probe_states = 256;
    uint64_t seed = 1;
};

// Flip-flops sharing one control tuple, connected through combinational
// Q -> D paths within the candidate set.
struct FfCluster {
    FfControl ctl;
    std::vector<GateIndex> ffs;   // ascending gate index
};

std::vector<FfCluster> ff_clusters(const Netlist& nl, const std::vector<GateIndex>& ffs);

// Binary up/down counter: next-state supports nested as {1,2,...,w} member
// bits, every transition adds or subtracts one. The walk from the initial
// state is exhaustive when the period fits the step budget; random probe
// states cover the rest.
std::optional<InferredModule> classify_counter(const Netlist& nl, const FfCluster& c,
                                               const SeqConfig& cfg);

// Serial path: one head bit fed from outside the cluster, every other bit a
// plain copy of its predecessor.
std::optional<InferredModule> classify_shift_register(const Netlist& nl, const FfCluster& c);

// Always sound: claims just the flip-flops as a storage word, inputs the D
// nets, leaving their logic to other stages or the transcriber.
InferredModule register_module(const Netlist& nl, std::vector<GateIndex> ffs);

// Full ladder over the free flip-flops: connected clusters are tried as
// counters, then shift registers; whatever remains in a control group
// becomes one register word.
std::vector<InferredModule> identify_seq_modules(const Netlist& nl,
                                                 const std::vector<GateIndex>& free_ffs,
                                                 const SeqConfig& cfg);

} // namespace lutrev
