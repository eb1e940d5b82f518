#pragma once

#include <span>
#include <vector>

#include "lutrev/netlist.hpp"

namespace lutrev {

// Cycle-accurate two-valued simulator. One implicit global clock: every
// flip-flop updates once per step(). Set/reset pins are sampled at the clock
// edge, which makes the async clear/preset of FDCE/FDPE behave like their
// synchronous cousins; with the stimulus model used here (inputs change only
// on cycle boundaries) the observable behavior matches. RAM blocks are
// opaque and drive constant zero.
class Simulator {
public:
    explicit Simulator(const Netlist& nl);

    // Flip-flops back to their INIT values.
    void reset();

    // Values for the input ports, in nl.input_ports() order, bits packed LSB
    // first. Settles combinational logic, samples the outputs, then clocks.
    // A clock input port can be driven with anything; FF update timing is
    // implicit.
    std::vector<uint64_t> step(std::span<const uint64_t> port_values);

    // Settle only, no clock edge.
    std::vector<uint64_t> settle(std::span<const uint64_t> port_values);

    std::vector<uint64_t> step(std::initializer_list<uint64_t> v) {
        return step(std::span<const uint64_t>(v.begin(), v.size()));
    }
    std::vector<uint64_t> settle(std::initializer_list<uint64_t> v) {
        return settle(std::span<const uint64_t>(v.begin(), v.size()));
    }

    bool net_value(NetIndex n) const { return net_val_[n] != 0; }
    bool ff_state(GateIndex g) const { return ff_state_[g] != 0; }

private:
    const Netlist& nl_;
    std::vector<uint8_t> net_val_;
    std::vector<uint8_t> ff_state_;   // indexed by gate, FFs only
    std::vector<const Port*> in_ports_, out_ports_;

    void settle_nets(std::span<const uint64_t> port_values);
    std::vector<uint64_t> sample_outputs() const;
    void clock_edge();
};

// Evaluates one combinational gate's outputs from current net values.
// Exposed for reuse by region evaluators.
void eval_comb_gate(const Netlist& nl, const Gate& g, std::vector<uint8_t>& net_val);

// Evaluator for a combinational subregion: a gate subset with word-shaped
// inputs and one word-shaped output. Region-internal nets not driven from
// within and not constant must be covered by the input words.
class CombRegion {
public:
    CombRegion(const Netlist& nl, std::vector<GateIndex> gates,
               std::vector<std::vector<NetIndex>> input_words,
               std::vector<NetIndex> output_word);

    uint64_t eval(std::span<const uint64_t> word_values);
    uint64_t eval(std::initializer_list<uint64_t> v) {
        return eval(std::span<const uint64_t>(v.begin(), v.size()));
    }

    const std::vector<std::vector<NetIndex>>& input_words() const { return in_words_; }
    const std::vector<NetIndex>& output_word() const { return out_word_; }

private:
    const Netlist& nl_;
    std::vector<GateIndex> order_;    // topological within the region
    std::vector<std::vector<NetIndex>> in_words_;
    std::vector<NetIndex> out_word_;
    std::vector<uint8_t> net_val_;
};

} // namespace lutrev
