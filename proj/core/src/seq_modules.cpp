#include "lutrev/seq_modules.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lutrev/cone.hpp"
#include "lutrev/simulate.hpp"
#include "lutrev/truth_table.hpp"

namespace lutrev {
namespace {

FfControl control_of(const Netlist& nl, GateIndex f) {
    const Gate& g = nl.gate(f);
    return FfControl{g.pins[pin::kFfC], g.pins[pin::kFfCe], g.pins[pin::kFfRst], g.prim};
}

// Claims cone gates whose outputs stay inside: loads only on kept gates or
// member D pins, never a primary output or a control pin.
std::vector<GateIndex> claim_to_member_ds(const Netlist& nl, std::vector<GateIndex> cand,
                                          const std::vector<GateIndex>& members) {
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::unordered_set<GateIndex> keep(cand.begin(), cand.end());
    std::unordered_set<GateIndex> mem(members.begin(), members.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (GateIndex g : cand) {
            if (!keep.count(g)) continue;
            const Gate& gg = nl.gate(g);
            bool leaks = false;
            for (uint16_t p = 0; p < uint16_t(gg.pins.size()) && !leaks; ++p) {
                if (!pin_is_output(gg, p)) continue;
                NetIndex n = gg.pins[p];
                if (nl.is_primary_output(n)) leaks = true;
                for (const PinRef& l : nl.net(n).loads) {
                    if (keep.count(l.gate)) continue;
                    if (mem.count(l.gate) && l.pin == pin::kFfD) continue;
                    leaks = true;
                }
            }
            if (leaks) {
                keep.erase(g);
                changed = true;
            }
        }
    }
    std::vector<GateIndex> out;
    for (GateIndex g : cand)
        if (keep.count(g)) out.push_back(g);
    return out;
}

uint64_t word_mask(unsigned w) { return w >= 64 ? ~0ull : (1ull << w) - 1; }

} // namespace

std::vector<FfCluster> ff_clusters(const Netlist& nl, const std::vector<GateIndex>& ffs) {
    std::vector<GateIndex> cand(ffs);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::unordered_map<GateIndex, size_t> idx;
    for (size_t i = 0; i < cand.size(); ++i) idx[cand[i]] = i;

    std::vector<size_t> parent(cand.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<size_t(size_t)> find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](size_t x, size_t y) { parent[find(x)] = find(y); };

    for (size_t i = 0; i < cand.size(); ++i) {
        FfControl ctl = control_of(nl, cand[i]);
        std::vector<NetIndex> stk{nl.gate(cand[i]).pins[pin::kFfQ]};
        std::unordered_set<NetIndex> seen;
        std::unordered_set<GateIndex> gseen;
        while (!stk.empty()) {
            NetIndex n = stk.back();
            stk.pop_back();
            if (!seen.insert(n).second) continue;
            for (const PinRef& l : nl.net(n).loads) {
                const Gate& g = nl.gate(l.gate);
                if (is_ff(g.prim)) {
                    if (l.pin != pin::kFfD) continue;
                    auto it = idx.find(l.gate);
                    if (it != idx.end() && control_of(nl, l.gate) == ctl)
                        unite(i, it->second);
                } else if (is_comb(g.prim)) {
                    if (!gseen.insert(l.gate).second) continue;
                    for (uint16_t p = 0; p < uint16_t(g.pins.size()); ++p)
                        if (pin_is_output(g, p)) stk.push_back(g.pins[p]);
                }
            }
        }
    }

    std::map<size_t, FfCluster> roots;
    for (size_t i = 0; i < cand.size(); ++i) {
        FfCluster& c = roots[find(i)];
        if (c.ffs.empty()) c.ctl = control_of(nl, cand[i]);
        c.ffs.push_back(cand[i]);
    }
    std::vector<FfCluster> out;
    for (auto& [r, c] : roots) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(),
              [](const FfCluster& x, const FfCluster& y) { return x.ffs[0] < y.ffs[0]; });
    return out;
}

std::optional<InferredModule> classify_counter(const Netlist& nl, const FfCluster& c,
                                               const SeqConfig& cfg) {
    size_t w = c.ffs.size();
    if (w < 2 || w > 64) return std::nullopt;
    std::unordered_set<NetIndex> qset;
    for (GateIndex f : c.ffs) qset.insert(nl.gate(f).pins[pin::kFfQ]);

    struct Bit {
        GateIndex ff;
        size_t dep;
    };
    std::vector<Bit> bits;
    std::set<GateIndex> cone;
    for (GateIndex f : c.ffs) {
        Cone cn = extract_cone(nl, PinRef{f, pin::kFfD}, ConeDir::Reverse, seq_cone_boundary);
        size_t dep = 0;
        for (NetIndex n : cn.frontier) {
            if (nl.is_const(n)) continue;
            if (!qset.count(n)) return std::nullopt;
            ++dep;
        }
        for (GateIndex g : cn.gates) cone.insert(g);
        bits.push_back({f, dep});
    }
    std::stable_sort(bits.begin(), bits.end(),
                     [](const Bit& x, const Bit& y) { return x.dep < y.dep; });
    for (size_t i = 0; i < w; ++i)
        if (bits[i].dep != i + 1) return std::nullopt;

    InferredModule m;
    m.kind = ModuleKind::Counter;
    std::vector<NetIndex> q_word, d_word;
    for (size_t i = 0; i < w; ++i) {
        const Gate& g = nl.gate(bits[i].ff);
        q_word.push_back(g.pins[pin::kFfQ]);
        d_word.push_back(g.pins[pin::kFfD]);
        if (g.init & 1) m.init |= 1ull << i;
    }

    std::vector<GateIndex> cone_gates(cone.begin(), cone.end());
    CombRegion region(nl, cone_gates, {q_word}, d_word);
    uint64_t mask = word_mask(unsigned(w));
    uint64_t steps = cfg.max_counter_steps;
    bool full_period = false;
    if (w < 32 && (1ull << w) <= steps) {
        steps = 1ull << w;
        full_period = true;
    }
    uint64_t state = m.init;
    int dir = 0;
    for (uint64_t t = 0; t < steps; ++t) {
        uint64_t next = region.eval({state});
        if (dir == 0) {
            if (next == ((state + 1) & mask)) dir = 1;
            else if (next == ((state - 1) & mask)) dir = -1;
            else return std::nullopt;
        } else if (next != ((state + uint64_t(dir)) & mask)) {
            return std::nullopt;
        }
        state = next;
    }
    if (!full_period) {
        std::mt19937_64 rng(cfg.seed);
        for (unsigned t = 0; t < cfg.counter_probe_states; ++t) {
            uint64_t s = rng() & mask;
            if (region.eval({s}) != ((s + uint64_t(dir)) & mask)) return std::nullopt;
        }
        m.detail = "transition function verified by sampling";
    }

    m.op = dir > 0 ? "up" : "down";
    m.output = std::move(q_word);
    m.ctl = c.ctl;
    m.registered_output = true;
    m.words_resolved = true;
    m.gates = claim_to_member_ds(nl, cone_gates, c.ffs);
    m.gates.insert(m.gates.end(), c.ffs.begin(), c.ffs.end());
    std::sort(m.gates.begin(), m.gates.end());
    return m;
}

std::optional<InferredModule> classify_shift_register(const Netlist& nl, const FfCluster& c) {
    size_t w = c.ffs.size();
    if (w < 2 || w > 64) return std::nullopt;
    std::unordered_map<NetIndex, size_t> qpos;
    for (size_t i = 0; i < w; ++i) qpos[nl.gate(c.ffs[i]).pins[pin::kFfQ]] = i;

    constexpr size_t kNone = size_t(-1);
    std::vector<size_t> next(w, kNone);   // member -> member it feeds
    std::vector<std::vector<GateIndex>> link_gates(w);
    size_t head = kNone;
    NetIndex serial = kInvalidIndex;
    for (size_t i = 0; i < w; ++i) {
        NetIndex d = nl.gate(c.ffs[i]).pins[pin::kFfD];
        size_t src = kNone;
        std::vector<GateIndex> gates;
        if (auto it = qpos.find(d); it != qpos.end()) {
            src = it->second;
        } else {
            Cone cn = extract_cone(nl, PinRef{c.ffs[i], pin::kFfD}, ConeDir::Reverse,
                                   seq_cone_boundary);
            std::vector<NetIndex> sup;
            for (NetIndex n : cn.frontier)
                if (!nl.is_const(n)) sup.push_back(n);
            if (sup.size() == 1 && qpos.count(sup[0]) && !cn.gates.empty()) {
                TruthTable tt = cone_to_function(nl, cn);
                if (tt.support.size() == 1 && (tt.fn.bits & 3) == 0x2) {
                    src = qpos[sup[0]];
                    gates = cn.gates;
                }
            }
        }
        if (src == kNone) {
            if (head != kNone) return std::nullopt;
            head = i;
            serial = d;
        } else {
            if (next[src] != kNone) return std::nullopt;
            next[src] = i;
            link_gates[i] = std::move(gates);
        }
    }
    if (head == kNone) return std::nullopt;

    InferredModule m;
    m.kind = ModuleKind::ShiftRegister;
    std::vector<GateIndex> bufs;
    size_t at = head;
    for (size_t i = 0; i < w; ++i) {
        if (at == kNone) return std::nullopt;
        const Gate& g = nl.gate(c.ffs[at]);
        m.output.push_back(g.pins[pin::kFfQ]);
        if (g.init & 1) m.init |= 1ull << i;
        for (GateIndex b : link_gates[at]) bufs.push_back(b);
        at = next[at];
    }
    if (at != kNone) return std::nullopt;   // a cycle would revisit the head

    m.serial_in = serial;
    m.ctl = c.ctl;
    m.registered_output = true;
    m.words_resolved = true;
    m.gates = claim_to_member_ds(nl, bufs, c.ffs);
    m.gates.insert(m.gates.end(), c.ffs.begin(), c.ffs.end());
    std::sort(m.gates.begin(), m.gates.end());
    return m;
}

InferredModule register_module(const Netlist& nl, std::vector<GateIndex> ffs) {
    std::sort(ffs.begin(), ffs.end());
    InferredModule m;
    m.kind = ModuleKind::Register;
    std::vector<NetIndex> d_word;
    for (size_t i = 0; i < ffs.size(); ++i) {
        const Gate& g = nl.gate(ffs[i]);
        m.output.push_back(g.pins[pin::kFfQ]);
        d_word.push_back(g.pins[pin::kFfD]);
        if (g.init & 1) m.init |= 1ull << i;
    }
    m.inputs = {std::move(d_word)};
    m.ctl = control_of(nl, ffs[0]);
    m.registered_output = true;
    m.words_resolved = true;
    m.gates = std::move(ffs);
    return m;
}

std::vector<InferredModule> identify_seq_modules(const Netlist& nl,
                                                 const std::vector<GateIndex>& free_ffs,
                                                 const SeqConfig& cfg) {
    std::vector<InferredModule> out;
    if (free_ffs.empty()) return out;
    std::vector<FfCluster> clusters = ff_clusters(nl, free_ffs);
    std::vector<std::pair<FfControl, std::vector<GateIndex>>> leftover;
    for (const FfCluster& c : clusters) {
        if (auto m = classify_counter(nl, c, cfg)) {
            out.push_back(std::move(*m));
            continue;
        }
        if (auto m = classify_shift_register(nl, c)) {
            out.push_back(std::move(*m));
            continue;
        }
        auto it = std::find_if(leftover.begin(), leftover.end(),
                               [&](const auto& e) { return e.first == c.ctl; });
        if (it == leftover.end()) {
            leftover.push_back({c.ctl, c.ffs});
        } else {
            it->second.insert(it->second.end(), c.ffs.begin(), c.ffs.end());
        }
    }
    // Storage words keep their initial values in one 64-bit image, so wider
    // control groups are cut into 64-bit registers.
    for (auto& [ctl, ffs] : leftover) {
        std::sort(ffs.begin(), ffs.end());
        for (size_t at = 0; at < ffs.size(); at += 64) {
            size_t n = std::min<size_t>(64, ffs.size() - at);
            out.push_back(register_module(
                nl, std::vector<GateIndex>(ffs.begin() + long(at), ffs.begin() + long(at + n))));
        }
    }
    return out;
}

} // namespace lutrev
