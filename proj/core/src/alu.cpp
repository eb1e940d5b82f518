#include "lutrev/alu.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lutrev/simulate.hpp"

namespace lutrev {
namespace {

NetIndex comb_out_net(const Gate& g) {
    if (is_lut(g.prim)) return g.pins[pin::lut_out(g.prim)];
    if (is_muxf(g.prim)) return g.pins[pin::kMuxO];
    throw InternalError("not a single-output gate");
}

struct FwdWalk {
    std::vector<GateIndex> gates;
    GateIndex ff = kInvalidIndex;
};

// Follows an O net through LUT/MUXF logic to exactly one flip-flop D pin.
// Any primary output, CARRY4 or RAM load on the way disqualifies the chain:
// the word would be visible outside the register bank.
bool forward_walk(const Netlist& nl, NetIndex o, FwdWalk& out) {
    std::vector<NetIndex> stk{o};
    std::unordered_set<NetIndex> seen;
    std::unordered_set<GateIndex> gseen;
    while (!stk.empty()) {
        NetIndex n = stk.back();
        stk.pop_back();
        if (!seen.insert(n).second) continue;
        if (nl.is_primary_output(n)) return false;
        for (const PinRef& l : nl.net(n).loads) {
            const Gate& g = nl.gate(l.gate);
            if (is_ff(g.prim)) {
                if (l.pin != pin::kFfD) return false;
                if (out.ff != kInvalidIndex && out.ff != l.gate) return false;
                out.ff = l.gate;
            } else if (is_lut(g.prim) || is_muxf(g.prim)) {
                if (gseen.insert(l.gate).second) {
                    out.gates.push_back(l.gate);
                    stk.push_back(comb_out_net(g));
                }
            } else {
                return false;
            }
        }
    }
    return out.ff != kInvalidIndex;
}

void gate_input_nets(const Gate& g, std::vector<NetIndex>& out) {
    for (uint16_t p = 0; p < uint16_t(g.pins.size()); ++p)
        if (!pin_is_output(g, p)) out.push_back(g.pins[p]);
}

// Reverse closure through LUT/MUXF logic. Nets driven by the chain's own
// chips are internal and ignored; flip-flop, RAM and foreign CARRY4 outputs
// plus primary inputs form the frontier.
void reverse_closure(const Netlist& nl, const std::unordered_set<GateIndex>& chipset,
                     std::vector<NetIndex> start, std::set<GateIndex>& gates,
                     std::set<NetIndex>& frontier) {
    std::unordered_set<NetIndex> seen;
    while (!start.empty()) {
        NetIndex n = start.back();
        start.pop_back();
        if (!seen.insert(n).second) continue;
        if (nl.is_const(n)) continue;
        const PinRef& d = nl.net(n).driver;
        if (!d.valid()) {
            frontier.insert(n);
            continue;
        }
        if (chipset.count(d.gate)) continue;
        const Gate& g = nl.gate(d.gate);
        if (!is_lut(g.prim) && !is_muxf(g.prim)) {
            frontier.insert(n);
            continue;
        }
        gates.insert(d.gate);
        gate_input_nets(g, start);
    }
}

uint64_t word_mask(unsigned w) { return w >= 64 ? ~0ull : (1ull << w) - 1; }

bool op_matches(CombRegion& region, const std::string& op, uint64_t asg, unsigned w,
                const AluConfig& cfg) {
    uint64_t mask = word_mask(w);
    if (2 * w <= cfg.equiv_exhaustive_bits) {
        for (uint64_t av = 0; av <= mask; ++av)
            for (uint64_t bv = 0; bv <= mask; ++bv)
                if (region.eval({av, bv, asg}) != apply_word_op(op, av, bv, w))
                    return false;
        return true;
    }
    auto sample = [&](uint64_t seed, unsigned count) {
        std::mt19937_64 rng(seed);
        const uint64_t corners[] = {0, 1, mask, mask - 1, 1ull << (w - 1)};
        for (uint64_t av : corners)
            for (uint64_t bv : corners)
                if (region.eval({av, bv, asg}) != apply_word_op(op, av, bv, w))
                    return false;
        for (unsigned i = 0; i < count; ++i) {
            uint64_t av = rng() & mask, bv = rng() & mask;
            if (region.eval({av, bv, asg}) != apply_word_op(op, av, bv, w)) return false;
        }
        return true;
    };
    // The scan sample picks the operation; a disjoint stream re-checks it.
    return sample(cfg.seed, cfg.equiv_samples) &&
           sample(cfg.seed ^ 0x9e3779b97f4a7c15ull, 10000);
}

} // namespace

std::optional<AluCandidate> extract_alu_candidate(const Netlist& nl, const ChainView& v,
                                                  const CarryContext& ctx,
                                                  const AluConfig& cfg) {
    unsigned w = v.width;
    if (w < 2 || w > 64) return std::nullopt;
    for (unsigned i = 0; i < w; ++i)
        if (!v.positions[i].o_loaded || v.positions[i].co_loaded) return std::nullopt;

    AluCandidate cand;
    std::unordered_set<GateIndex> chipset;
    for (const ChainPosition& p : v.positions) chipset.insert(p.chip);
    cand.chips.assign(chipset.begin(), chipset.end());
    std::sort(cand.chips.begin(), cand.chips.end());

    // Word side: each O funnels into its own flip-flop.
    std::vector<FwdWalk> walks(w);
    std::unordered_set<GateIndex> ff_seen, fwd_all;
    for (unsigned i = 0; i < w; ++i) {
        if (!forward_walk(nl, v.positions[i].o, walks[i])) return std::nullopt;
        if (!ff_seen.insert(walks[i].ff).second) return std::nullopt;
        for (GateIndex g : walks[i].gates) fwd_all.insert(g);
    }
    // Forward gates must be private: every output read stays on the path or
    // lands in one of the output registers.
    for (GateIndex g : fwd_all) {
        NetIndex n = comb_out_net(nl.gate(g));
        if (nl.is_primary_output(n)) return std::nullopt;
        for (const PinRef& l : nl.net(n).loads)
            if (!fwd_all.count(l.gate) &&
                !(ff_seen.count(l.gate) && l.pin == pin::kFfD))
                return std::nullopt;
    }

    const Gate& ff0 = nl.gate(walks[0].ff);
    cand.ctl = FfControl{ff0.pins[pin::kFfC], ff0.pins[pin::kFfCe], ff0.pins[pin::kFfRst],
                         ff0.prim};
    for (unsigned i = 0; i < w; ++i) {
        const Gate& f = nl.gate(walks[i].ff);
        FfControl c{f.pins[pin::kFfC], f.pins[pin::kFfCe], f.pins[pin::kFfRst], f.prim};
        if (!(c == cand.ctl)) return std::nullopt;
        cand.out_ffs.push_back(walks[i].ff);
        cand.d_word.push_back(f.pins[pin::kFfD]);
        cand.q_word.push_back(f.pins[pin::kFfQ]);
        if (f.init & 1) cand.init |= 1ull << i;
    }

    // Input side supports, per position and for the initial carry.
    std::set<GateIndex> cone_gates;
    std::vector<std::set<NetIndex>> sup(w);
    for (unsigned i = 0; i < w; ++i) {
        std::vector<NetIndex> start{v.positions[i].s, v.positions[i].di};
        for (GateIndex g : walks[i].gates) gate_input_nets(nl.gate(g), start);
        reverse_closure(nl, chipset, std::move(start), cone_gates, sup[i]);
    }
    std::set<NetIndex> ci_sup;
    reverse_closure(nl, chipset, {v.ci0, v.cyinit}, cone_gates, ci_sup);

    std::unordered_map<NetIndex, unsigned> count;
    for (const auto& s : sup)
        for (NetIndex n : s) ++count[n];
    std::set<NetIndex> shared(ci_sup);
    for (const auto& [n, c] : count)
        if (c >= 2) shared.insert(n);

    std::vector<std::array<NetIndex, 2>> pairs(w);
    for (unsigned i = 0; i < w; ++i) {
        std::vector<NetIndex> excl;
        for (NetIndex n : sup[i])
            if (!shared.count(n)) excl.push_back(n);
        if (excl.size() != 2) return std::nullopt;
        pairs[i] = {excl[0], excl[1]};
    }
    if (shared.size() > cfg.max_opcode_nets) return std::nullopt;
    cand.opcode.assign(shared.begin(), shared.end());
    std::sort(cand.opcode.begin(), cand.opcode.end(),
              [&](NetIndex x, NetIndex y) { return nl.net(x).id < nl.net(y).id; });

    cand.split_clean = resolve_symmetric(nl, ctx, pairs, cand.a, cand.b);
    cand.cone_gates.assign(cone_gates.begin(), cone_gates.end());
    cand.fwd_gates.assign(fwd_all.begin(), fwd_all.end());
    std::sort(cand.fwd_gates.begin(), cand.fwd_gates.end());
    return cand;
}

std::optional<std::map<uint64_t, std::string>> discover_opcodes(const Netlist& nl,
                                                                AluCandidate& cand,
                                                                const AluConfig& cfg) {
    unsigned w = unsigned(cand.d_word.size());
    if (cand.opcode.size() >= 32) return std::nullopt;
    std::vector<GateIndex> gates = cand.cone_gates;
    gates.insert(gates.end(), cand.fwd_gates.begin(), cand.fwd_gates.end());
    gates.insert(gates.end(), cand.chips.begin(), cand.chips.end());
    uint64_t nasg = 1ull << cand.opcode.size();

    for (int orient = 0; orient < 2; ++orient) {
        const std::vector<NetIndex>& a = orient ? cand.b : cand.a;
        const std::vector<NetIndex>& b = orient ? cand.a : cand.b;
        CombRegion region(nl, gates, {a, b, cand.opcode}, cand.d_word);
        std::map<uint64_t, std::string> m;
        bool ok = true;
        for (uint64_t asg = 0; asg < nasg && ok; ++asg) {
            ok = false;
            for (const std::string& op : alu_reference_ops()) {
                if (op_matches(region, op, asg, w, cfg)) {
                    m[asg] = op;
                    ok = true;
                    break;
                }
            }
        }
        if (ok) {
            if (orient) std::swap(cand.a, cand.b);
            cand.sampled_equiv = 2 * w > cfg.equiv_exhaustive_bits;
            return m;
        }
    }
    return std::nullopt;
}

std::optional<InferredModule> identify_alu(const Netlist& nl, const ChainView& v,
                                           const CarryContext& ctx, const AluConfig& cfg) {
    auto cand = extract_alu_candidate(nl, v, ctx, cfg);
    if (!cand) return std::nullopt;
    auto ops = discover_opcodes(nl, *cand, cfg);
    if (!ops) return std::nullopt;

    std::set<std::string> opset;
    for (const auto& [asg, op] : *ops) opset.insert(op);

    InferredModule m;
    if (opset == std::set<std::string>{"add", "sub"})
        m.kind = ModuleKind::AddSub;
    else if (cand->opcode.empty() && opset.size() == 1) {
        const std::string& only = *opset.begin();
        m.kind = only == "add"   ? ModuleKind::Adder
                 : only == "sub" ? ModuleKind::Subtractor
                                 : ModuleKind::Alu;
        m.op = only;
    } else {
        m.kind = ModuleKind::Alu;
    }
    m.op_map = *ops;
    m.selects = cand->opcode;
    m.inputs = {cand->a, cand->b};
    m.output = cand->q_word;
    m.registered_output = true;
    m.ctl = cand->ctl;
    m.init = cand->init;
    m.words_resolved = true;

    std::vector<GateIndex> anchors = cand->chips;
    anchors.insert(anchors.end(), cand->fwd_gates.begin(), cand->fwd_gates.end());
    anchors.insert(anchors.end(), cand->out_ffs.begin(), cand->out_ffs.end());
    m.gates = claimable_gates(nl, cand->cone_gates, anchors);
    m.gates.insert(m.gates.end(), anchors.begin(), anchors.end());
    std::sort(m.gates.begin(), m.gates.end());

    if (!cand->split_clean) m.detail = "operand split fell back to net order";
    if (cand->sampled_equiv) {
        if (!m.detail.empty()) m.detail += "; ";
        m.detail += "opcode functions verified by sampling";
    }
    return m;
}

} // namespace lutrev
