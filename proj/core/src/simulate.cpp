#include "lutrev/simulate.hpp"

#include <algorithm>

namespace lutrev {

void eval_comb_gate(const Netlist& nl, const Gate& g, std::vector<uint8_t>& v) {
    (void)nl;
    if (is_lut(g.prim)) {
        int k = lut_width(g.prim);
        uint64_t idx = 0;
        for (int i = 0; i < k; ++i)
            idx |= uint64_t(v[g.pins[size_t(i)]] & 1) << i;
        v[g.pins[size_t(k)]] = uint8_t((g.init >> idx) & 1);
        return;
    }
    if (g.prim == Prim::Carry4) {
        uint8_t c = (v[g.pins[pin::kCarryCi]] | v[g.pins[pin::kCarryCyinit]]) & 1;
        for (int i = 0; i < 4; ++i) {
            uint8_t s = v[g.pins[pin::carry_s(i)]] & 1;
            uint8_t di = v[g.pins[pin::carry_di(i)]] & 1;
            v[g.pins[pin::carry_o(i)]] = uint8_t(s ^ c);
            c = s ? c : di;
            v[g.pins[pin::carry_co(i)]] = c;
        }
        return;
    }
    if (is_muxf(g.prim)) {
        uint8_t s = v[g.pins[pin::kMuxS]] & 1;
        v[g.pins[pin::kMuxO]] = s ? v[g.pins[pin::kMuxI1]] : v[g.pins[pin::kMuxI0]];
        return;
    }
    throw InternalError("eval_comb_gate on sequential gate '" + g.id + "'");
}

Simulator::Simulator(const Netlist& nl) : nl_(nl) {
    if (!nl.finalized()) throw InternalError("netlist not finalized");
    net_val_.assign(nl.nets().size(), 0);
    ff_state_.assign(nl.gates().size(), 0);
    in_ports_ = nl.input_ports();
    out_ports_ = nl.output_ports();
    for (const Port* p : in_ports_)
        if (p->bits.size() > 64)
            throw InputError("port '" + p->name + "' wider than 64 bits");
    reset();
}

void Simulator::reset() {
    for (GateIndex gi = 0; gi < nl_.gates().size(); ++gi)
        if (is_ff(nl_.gate(gi).prim)) ff_state_[gi] = uint8_t(nl_.gate(gi).init & 1);
    std::fill(net_val_.begin(), net_val_.end(), 0);
    for (NetIndex n = 0; n < nl_.nets().size(); ++n)
        if (nl_.net(n).kind == NetKind::Const1) net_val_[n] = 1;
}

void Simulator::settle_nets(std::span<const uint64_t> port_values) {
    if (port_values.size() != in_ports_.size())
        throw InternalError("stimulus must cover every input port");
    for (size_t p = 0; p < in_ports_.size(); ++p) {
        const auto& bits = in_ports_[p]->bits;
        for (size_t b = 0; b < bits.size(); ++b)
            net_val_[bits[b]] = uint8_t((port_values[p] >> b) & 1);
    }
    // FF and RAM outputs feed the combinational fabric.
    for (GateIndex gi = 0; gi < nl_.gates().size(); ++gi) {
        const Gate& g = nl_.gate(gi);
        if (is_ff(g.prim)) {
            net_val_[g.pins[pin::kFfQ]] = ff_state_[gi];
        } else if (g.prim == Prim::Ramb) {
            for (uint16_t p = 0; p < g.pins.size(); ++p)
                if (pin_is_output(g, p)) net_val_[g.pins[p]] = 0;
        }
    }
    for (GateIndex gi : nl_.comb_topo_order())
        eval_comb_gate(nl_, nl_.gate(gi), net_val_);
}

std::vector<uint64_t> Simulator::sample_outputs() const {
    std::vector<uint64_t> out(out_ports_.size(), 0);
    for (size_t p = 0; p < out_ports_.size(); ++p) {
        const auto& bits = out_ports_[p]->bits;
        for (size_t b = 0; b < bits.size() && b < 64; ++b)
            out[p] |= uint64_t(net_val_[bits[b]] & 1) << b;
    }
    return out;
}

void Simulator::clock_edge() {
    // Next-state for every FF from current net values, then commit.
    for (GateIndex gi = 0; gi < nl_.gates().size(); ++gi) {
        const Gate& g = nl_.gate(gi);
        if (!is_ff(g.prim)) continue;
        uint8_t rst = net_val_[g.pins[pin::kFfRst]] & 1;
        uint8_t ce = net_val_[g.pins[pin::kFfCe]] & 1;
        uint8_t d = net_val_[g.pins[pin::kFfD]] & 1;
        uint8_t q = ff_state_[gi];
        uint8_t next;
        switch (g.prim) {
        case Prim::Fdre: next = rst ? 0 : (ce ? d : q); break;
        case Prim::Fdse: next = rst ? 1 : (ce ? d : q); break;
        case Prim::Fdce: next = rst ? 0 : (ce ? d : q); break;
        case Prim::Fdpe: next = rst ? 1 : (ce ? d : q); break;
        default: throw InternalError("bad FF prim");
        }
        ff_state_[gi] = next;
    }
}

std::vector<uint64_t> Simulator::step(std::span<const uint64_t> port_values) {
    settle_nets(port_values);
    auto out = sample_outputs();
    clock_edge();
    return out;
}

std::vector<uint64_t> Simulator::settle(std::span<const uint64_t> port_values) {
    settle_nets(port_values);
    return sample_outputs();
}

CombRegion::CombRegion(const Netlist& nl, std::vector<GateIndex> gates,
                       std::vector<std::vector<NetIndex>> input_words,
                       std::vector<NetIndex> output_word)
    : nl_(nl), in_words_(std::move(input_words)), out_word_(std::move(output_word)) {
    if (out_word_.size() > 64) throw InternalError("region output wider than 64 bits");
    for (const auto& w : in_words_)
        if (w.size() > 64) throw InternalError("region input wider than 64 bits");

    std::vector<uint8_t> in_region(nl.gates().size(), 0);
    for (GateIndex gi : gates) {
        if (!is_comb(nl.gate(gi).prim))
            throw InternalError("sequential gate '" + nl.gate(gi).id + "' in region");
        in_region[gi] = 1;
    }
    std::vector<uint8_t> covered(nl.nets().size(), 0);
    for (const auto& w : in_words_)
        for (NetIndex n : w) covered[n] = 1;

    // Topological order restricted to the region.
    std::vector<uint32_t> indeg(nl.gates().size(), 0);
    std::vector<std::vector<GateIndex>> succ(nl.gates().size());
    for (GateIndex gi : gates) {
        const Gate& g = nl.gate(gi);
        for (uint16_t p = 0; p < g.pins.size(); ++p) {
            if (pin_is_output(g, p)) continue;
            const Net& n = nl.net(g.pins[p]);
            if (covered[g.pins[p]] || n.kind != NetKind::Signal) continue;
            if (n.driver.valid() && in_region[n.driver.gate]) {
                succ[n.driver.gate].push_back(gi);
                ++indeg[gi];
            } else {
                throw InternalError("region input net '" + n.id +
                                    "' not covered by an input word");
            }
        }
    }
    std::vector<GateIndex> ready;
    for (GateIndex gi : gates)
        if (indeg[gi] == 0) ready.push_back(gi);
    while (!ready.empty()) {
        GateIndex gi = ready.back();
        ready.pop_back();
        order_.push_back(gi);
        for (GateIndex s : succ[gi])
            if (--indeg[s] == 0) ready.push_back(s);
    }
    if (order_.size() != gates.size())
        throw InternalError("combinational cycle inside region");
    net_val_.assign(nl.nets().size(), 0);
    for (NetIndex n = 0; n < nl.nets().size(); ++n)
        if (nl.net(n).kind == NetKind::Const1) net_val_[n] = 1;
}

uint64_t CombRegion::eval(std::span<const uint64_t> word_values) {
    if (word_values.size() != in_words_.size())
        throw InternalError("region stimulus arity mismatch");
    for (size_t w = 0; w < in_words_.size(); ++w)
        for (size_t b = 0; b < in_words_[w].size(); ++b)
            net_val_[in_words_[w][b]] = uint8_t((word_values[w] >> b) & 1);
    for (GateIndex gi : order_)
        eval_comb_gate(nl_, nl_.gate(gi), net_val_);
    uint64_t out = 0;
    for (size_t b = 0; b < out_word_.size(); ++b)
        out |= uint64_t(net_val_[out_word_[b]] & 1) << b;
    return out;
}

} // namespace lutrev
