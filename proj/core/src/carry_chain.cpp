#include "lutrev/carry_chain.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "lutrev/cone.hpp"
#include "lutrev/npn.hpp"
#include "lutrev/truth_table.hpp"

namespace lutrev {
namespace {

bool ci_fed_by_co3(const Netlist& nl, NetIndex ci) {
    const Net& n = nl.net(ci);
    if (n.kind != NetKind::Signal || !n.driver.valid()) return false;
    const Gate& d = nl.gate(n.driver.gate);
    return d.prim == Prim::Carry4 && n.driver.pin == pin::carry_co(3);
}

void extend_chain(const Netlist& nl, GateIndex head, std::vector<char>& used,
                  CarryChain& c) {
    GateIndex cur = head;
    while (true) {
        c.chips.push_back(cur);
        used[cur] = 1;
        NetIndex co3 = nl.gate(cur).pins[pin::carry_co(3)];
        std::vector<GateIndex> nexts;
        for (const PinRef& l : nl.net(co3).loads)
            if (l.pin == pin::kCarryCi && nl.gate(l.gate).prim == Prim::Carry4 &&
                !used[l.gate])
                nexts.push_back(l.gate);
        if (nexts.empty()) break;
        std::sort(nexts.begin(), nexts.end(), [&](GateIndex a, GateIndex b) {
            return nl.gate(a).id < nl.gate(b).id;
        });
        if (nexts.size() > 1 && c.note.empty())
            c.note = "CO3 fans out to multiple carry inputs; continued along the "
                     "lowest gate id";
        cur = nexts[0];
    }
}

} // namespace

std::vector<CarryChain> find_carry_chains(const Netlist& nl) {
    auto chips = nl.gates_of(Prim::Carry4);
    std::vector<char> used(nl.gates().size(), 0);
    std::vector<CarryChain> out;
    for (GateIndex g : chips) {
        if (used[g] || ci_fed_by_co3(nl, nl.gate(g).pins[pin::kCarryCi])) continue;
        CarryChain c;
        extend_chain(nl, g, used, c);
        out.push_back(std::move(c));
    }
    // A CO3 with two CI loads leaves the loser headless: give it its own chain.
    for (GateIndex g : chips) {
        if (used[g]) continue;
        CarryChain c;
        c.note = "carry-in fed by a chain claimed elsewhere";
        extend_chain(nl, g, used, c);
        out.push_back(std::move(c));
    }
    return out;
}

CarryContext build_carry_context(const Netlist& nl) {
    CarryContext ctx;
    ctx.chains = find_carry_chains(nl);
    for (unsigned ci = 0; ci < ctx.chains.size(); ++ci) {
        const auto& chips = ctx.chains[ci].chips;
        for (unsigned j = 0; j < chips.size(); ++j)
            for (unsigned p = 0; p < 4; ++p)
                ctx.chain_o.emplace(nl.gate(chips[j]).pins[pin::carry_o(int(p))],
                                    std::make_pair(ci, 4 * j + p));
    }
    std::map<std::tuple<NetIndex, NetIndex, NetIndex, Prim>, unsigned> buckets;
    std::vector<unsigned> counts;
    // Creation order, not id order: a bank declared bit by bit then ranks by
    // bit position regardless of how its names collate.
    for (GateIndex f = 0; f < GateIndex(nl.gates().size()); ++f) {
        if (!is_ff(nl.gate(f).prim)) continue;
        const Gate& g = nl.gate(f);
        auto key = std::make_tuple(g.pins[pin::kFfC], g.pins[pin::kFfCe],
                                   g.pins[pin::kFfRst], g.prim);
        auto [it, fresh] = buckets.emplace(key, unsigned(counts.size()));
        if (fresh) counts.push_back(0);
        ctx.ff_rank.emplace(f, std::make_pair(it->second, counts[it->second]++));
    }
    unsigned pord = 0;
    for (const Port* p : nl.input_ports()) {
        for (unsigned b = 0; b < p->bits.size(); ++b)
            ctx.pi_bit.emplace(p->bits[b], std::make_pair(pord, b));
        ++pord;
    }
    return ctx;
}

ChainView make_chain_view(const Netlist& nl, const CarryChain& chain) {
    ChainView v;
    v.chain = &chain;
    const Gate& head = nl.gate(chain.chips[0]);
    v.ci0 = head.pins[pin::kCarryCi];
    v.cyinit = head.pins[pin::kCarryCyinit];
    auto loaded = [&](NetIndex n) {
        return nl.is_primary_output(n) || !nl.net(n).loads.empty();
    };
    for (unsigned j = 0; j < chain.chips.size(); ++j) {
        const Gate& g = nl.gate(chain.chips[j]);
        for (unsigned p = 0; p < 4; ++p) {
            ChainPosition cp;
            cp.chip = chain.chips[j];
            cp.pos = 4 * j + p;
            cp.s = g.pins[pin::carry_s(int(p))];
            cp.di = g.pins[pin::carry_di(int(p))];
            cp.o = g.pins[pin::carry_o(int(p))];
            cp.co = g.pins[pin::carry_co(int(p))];
            cp.o_loaded = loaded(cp.o);
            if (p == 3 && j + 1 < chain.chips.size()) {
                // Ignore the structural CO3 -> CI link to the next chip.
                GateIndex next = chain.chips[j + 1];
                cp.co_loaded = nl.is_primary_output(cp.co);
                for (const PinRef& l : nl.net(cp.co).loads)
                    if (!(l.gate == next && l.pin == pin::kCarryCi)) cp.co_loaded = true;
            } else {
                cp.co_loaded = loaded(cp.co);
            }
            v.positions.push_back(cp);
        }
    }
    for (unsigned i = 0; i < v.positions.size(); ++i)
        if (v.positions[i].o_loaded || v.positions[i].co_loaded) v.width = i + 1;
    return v;
}

namespace {

struct PinFn {
    TruthTable tt;
    std::vector<GateIndex> gates;
};

std::optional<PinFn> pin_fn(const Netlist& nl, GateIndex g, uint16_t p, unsigned cap) {
    Cone c = extract_cone(nl, PinRef{g, p}, ConeDir::Reverse);
    if (c.frontier.size() > std::min<unsigned>(cap, 6)) return std::nullopt;
    PinFn r;
    r.tt = cone_to_function(nl, c);
    r.gates = std::move(c.gates);
    return r;
}

bool eval_point(const TruthTable& t, const std::map<NetIndex, bool>& vals) {
    unsigned idx = 0;
    for (size_t i = 0; i < t.support.size(); ++i) {
        auto it = vals.find(t.support[i]);
        if (it != vals.end() && it->second) idx |= 1u << i;
    }
    return t.fn.bits >> idx & 1;
}

} // namespace

SrcTag source_tag(const Netlist& nl, const CarryContext& ctx, NetIndex n) {
    if (auto it = ctx.pi_bit.find(n); it != ctx.pi_bit.end())
        return {"p" + std::to_string(it->second.first), long(it->second.second)};
    const PinRef& d = nl.net(n).driver;
    if (d.valid()) {
        const Gate& g = nl.gate(d.gate);
        if (is_ff(g.prim) && d.pin == pin::kFfQ) {
            if (auto it = ctx.ff_rank.find(d.gate); it != ctx.ff_rank.end())
                return {"f" + std::to_string(it->second.first), long(it->second.second)};
        }
        if (g.prim == Prim::Carry4) {
            if (auto it = ctx.chain_o.find(n); it != ctx.chain_o.end())
                return {"c" + std::to_string(it->second.first), long(it->second.second)};
        }
    }
    return {"n" + nl.net(n).id, 0};
}

// Symmetric operations make any split semantically valid; a consistent
// source-tagged one just names the operands the way the design was built.
bool resolve_symmetric(const Netlist& nl, const CarryContext& ctx,
                       const std::vector<std::array<NetIndex, 2>>& pairs,
                       std::vector<NetIndex>& a, std::vector<NetIndex>& b) {
    size_t w = pairs.size();
    for (int first : {0, 1}) {
        SrcTag ta = source_tag(nl, ctx, pairs[0][size_t(first)]);
        SrcTag tb = source_tag(nl, ctx, pairs[0][size_t(1 - first)]);
        std::vector<NetIndex> av(w), bv(w);
        bool ok = true;
        for (size_t i = 0; i < w && ok; ++i) {
            NetIndex u = pairs[i][0], vnet = pairs[i][1];
            SrcTag tu = source_tag(nl, ctx, u), tv = source_tag(nl, ctx, vnet);
            auto fits = [&](const SrcTag& t, const SrcTag& base) {
                return t.src == base.src && t.idx == base.idx + long(i);
            };
            if (fits(tu, ta) && fits(tv, tb)) {
                av[i] = u;
                bv[i] = vnet;
            } else if (fits(tv, ta) && fits(tu, tb)) {
                av[i] = vnet;
                bv[i] = u;
            } else {
                ok = false;
            }
        }
        if (ok) {
            if (std::tie(tb.src, tb.idx) < std::tie(ta.src, ta.idx)) std::swap(av, bv);
            a = std::move(av);
            b = std::move(bv);
            return true;
        }
    }
    a.resize(w);
    b.resize(w);
    for (size_t i = 0; i < w; ++i) {
        NetIndex u = pairs[i][0], vnet = pairs[i][1];
        if (nl.net(vnet).id < nl.net(u).id) std::swap(u, vnet);
        a[i] = u;
        b[i] = vnet;
    }
    return false;
}

std::vector<GateIndex> claimable_gates(const Netlist& nl, std::vector<GateIndex> cand,
                                       const std::vector<GateIndex>& anchors) {
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::unordered_set<GateIndex> keep(cand.begin(), cand.end());
    std::unordered_set<GateIndex> anch(anchors.begin(), anchors.end());
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
                for (const PinRef& l : nl.net(n).loads)
                    if (!keep.count(l.gate) && !anch.count(l.gate)) leaks = true;
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

namespace {

bool builtin_op(const std::string& op) {
    return op == "add" || op == "sub" || op == "ge" || op == "gt" || op == "eq";
}

// Validates the raw (uncanonized) cone shapes for one position of a builtin
// operation and extracts the operand nets. Returns false when the NPN-class
// match is structurally a different function (an XOR S with subtract-style
// carry is a+b+1, not a-b).
bool extract_position_operands(const std::string& op, const TruthTable& s_tt,
                               const TruthTable& di_tt, std::array<NetIndex, 2>& pair,
                               NetIndex& a, NetIndex& b) {
    a = b = kInvalidIndex;
    if (s_tt.support.size() != 2) return false;
    uint64_t sraw = s_tt.fn.bits & 0xf;
    if (op == "add" ? sraw != 0x6 : sraw != 0x9) return false;
    pair = {s_tt.support[0], s_tt.support[1]};
    if (op == "eq")
        return di_tt.support.empty() && (di_tt.fn.bits & 1) == 0;
    if (di_tt.support.size() != 1) return false;
    NetIndex x = di_tt.support[0];
    if (x != pair[0] && x != pair[1]) return false;
    NetIndex other = x == pair[0] ? pair[1] : pair[0];
    uint64_t draw = di_tt.fn.bits & 3;
    if (op == "add") return draw == 0x2;
    if (draw == 0x2) {
        a = x;
        b = other;
        return true;
    }
    if (draw == 0x1) {
        b = x;
        a = other;
        return true;
    }
    return false;
}

ModuleKind kind_for_op(const std::string& op) {
    if (op == "add") return ModuleKind::Adder;
    if (op == "sub") return ModuleKind::Subtractor;
    return ModuleKind::Comparator;
}

} // namespace

bool try_absorb_output_ffs(const Netlist& nl, InferredModule& m) {
    if (m.output.empty()) return false;
    std::vector<GateIndex> ffs;
    FfControl ctl;
    uint64_t init = 0;
    for (size_t i = 0; i < m.output.size(); ++i) {
        NetIndex n = m.output[i];
        if (nl.is_primary_output(n)) return false;
        const auto& loads = nl.net(n).loads;
        if (loads.size() != 1) return false;
        const Gate& g = nl.gate(loads[0].gate);
        if (!is_ff(g.prim) || loads[0].pin != pin::kFfD) return false;
        FfControl c{g.pins[pin::kFfC], g.pins[pin::kFfCe], g.pins[pin::kFfRst], g.prim};
        if (i == 0)
            ctl = c;
        else if (!(c == ctl))
            return false;
        if (g.init) init |= uint64_t(1) << i;
        ffs.push_back(loads[0].gate);
    }
    m.registered_output = true;
    m.ctl = ctl;
    m.init = init;
    for (size_t i = 0; i < ffs.size(); ++i) {
        m.gates.push_back(ffs[i]);
        m.output[i] = nl.gate(ffs[i]).pins[pin::kFfQ];
    }
    return true;
}

std::optional<InferredModule> identify_pure_op(const Netlist& nl, const FunctionLibrary& lib,
                                               const ChainView& v, const CarryContext& ctx,
                                               const ChainAnalysisConfig& cfg) {
    unsigned w = v.width;
    if (w == 0) return std::nullopt;
    if (!nl.is_const(v.ci0) || !nl.is_const(v.cyinit)) return std::nullopt;
    int c0 = (nl.const_value(v.ci0) || nl.const_value(v.cyinit)) ? 1 : 0;

    std::vector<unsigned> loaded_o, loaded_co;
    for (unsigned i = 0; i < w; ++i) {
        if (v.positions[i].o_loaded) loaded_o.push_back(i);
        if (v.positions[i].co_loaded) loaded_co.push_back(i);
    }
    OutSite site;
    bool carry_out_bit = false;
    if (!loaded_o.empty()) {
        site = OutSite::Word;
        for (unsigned i : loaded_co)
            if (i != w - 1) return std::nullopt;
        carry_out_bit = !loaded_co.empty();
    } else {
        if (loaded_co.size() != 1) return std::nullopt;
        site = OutSite::Carry;
    }

    const LibEntry* entry = nullptr;
    std::vector<std::array<NetIndex, 2>> pairs(w);
    std::vector<NetIndex> a(w, kInvalidIndex), b(w, kInvalidIndex);
    std::vector<GateIndex> cones;
    for (unsigned i = 0; i < w; ++i) {
        const ChainPosition& cp = v.positions[i];
        auto sfn = pin_fn(nl, cp.chip, pin::carry_s(int(cp.pos & 3)), cfg.pure_max_support);
        auto dfn = pin_fn(nl, cp.chip, pin::carry_di(int(cp.pos & 3)), cfg.pure_max_support);
        if (!sfn || !dfn) return std::nullopt;
        const LibEntry* e = lib.lookup(npn_canonical(sfn->tt.fn).canonical,
                                       npn_canonical(dfn->tt.fn).canonical, c0, site);
        if (!e || (entry && e != entry)) return std::nullopt;
        entry = e;
        if (builtin_op(e->op)) {
            if (!extract_position_operands(e->op, sfn->tt, dfn->tt, pairs[i], a[i], b[i]))
                return std::nullopt;
        }
        cones.insert(cones.end(), sfn->gates.begin(), sfn->gates.end());
        cones.insert(cones.end(), dfn->gates.begin(), dfn->gates.end());
    }
    if (carry_out_bit && entry->op != "add") return std::nullopt;

    InferredModule m;
    m.op = entry->op;
    std::vector<GateIndex> chips(v.chain->chips);
    if (!builtin_op(entry->op)) {
        m.kind = ModuleKind::UnknownCarry;
        m.words_resolved = false;
        m.detail = "library op '" + entry->op + "' matched by class; operands not recovered";
        m.gates = std::move(chips);
        std::sort(m.gates.begin(), m.gates.end());
        return m;
    }

    m.kind = kind_for_op(entry->op);
    bool symmetric = entry->op == "add" || entry->op == "eq";
    if (symmetric) {
        if (!resolve_symmetric(nl, ctx, pairs, a, b))
            m.detail = "operand split is positional; the operation is symmetric";
    }
    m.inputs = {a, b};
    m.input_names = {"a", "b"};

    if (site == OutSite::Word) {
        for (unsigned i = 0; i < w; ++i) m.output.push_back(v.positions[i].o);
        if (carry_out_bit) m.output.push_back(v.positions[w - 1].co);
    } else {
        m.output = {v.positions[w - 1].co};
    }

    m.gates = chips;
    auto claimed = claimable_gates(nl, cones, chips);
    m.gates.insert(m.gates.end(), claimed.begin(), claimed.end());
    try_absorb_output_ffs(nl, m);
    std::sort(m.gates.begin(), m.gates.end());
    return m;
}

std::vector<NetIndex> detect_select_nets(const Netlist& nl, const ChainView& v,
                                         const ChainAnalysisConfig& cfg) {
    if (v.width < 2) return {};
    std::set<NetIndex> inter;
    for (unsigned i = 0; i < v.width; ++i) {
        const ChainPosition& cp = v.positions[i];
        auto sfn = pin_fn(nl, cp.chip, pin::carry_s(int(cp.pos & 3)), 6);
        if (!sfn) return {};
        std::set<NetIndex> sup(sfn->tt.support.begin(), sfn->tt.support.end());
        if (i == 0) {
            inter = std::move(sup);
        } else {
            std::set<NetIndex> next;
            std::set_intersection(inter.begin(), inter.end(), sup.begin(), sup.end(),
                                  std::inserter(next, next.begin()));
            inter = std::move(next);
        }
        if (inter.empty()) return {};
    }
    if (inter.size() > cfg.max_select_nets) return {};
    std::vector<NetIndex> sel(inter.begin(), inter.end());
    std::sort(sel.begin(), sel.end(),
              [&](NetIndex x, NetIndex y) { return nl.net(x).id < nl.net(y).id; });
    return sel;
}

std::optional<InferredModule> identify_cross_optimized(const Netlist& nl,
                                                       const FunctionLibrary& lib,
                                                       const ChainView& v,
                                                       const CarryContext& ctx,
                                                       const ChainAnalysisConfig& cfg) {
    unsigned w = v.width;
    if (w < 2) return std::nullopt;
    bool any_o = false;
    for (unsigned i = 0; i < w; ++i) {
        if (v.positions[i].co_loaded) return std::nullopt;
        any_o |= v.positions[i].o_loaded;
    }
    if (!any_o) return std::nullopt;
    // Word output must be closed: cofactor identities say nothing about taps
    // into shared downstream logic, and open outputs are the ALU shape.
    for (unsigned i = 0; i < w; ++i)
        for (const PinRef& l : nl.net(v.positions[i].o).loads) {
            const Gate& g = nl.gate(l.gate);
            if (!is_ff(g.prim) || l.pin != pin::kFfD) return std::nullopt;
        }

    std::vector<NetIndex> sel = detect_select_nets(nl, v, cfg);
    if (sel.empty()) return std::nullopt;

    // Initial carry may be select-driven but nothing else.
    auto head = v.chain->chips[0];
    auto ci_fn = pin_fn(nl, head, pin::kCarryCi, 6);
    auto cy_fn = pin_fn(nl, head, pin::kCarryCyinit, 6);
    if (!ci_fn || !cy_fn) return std::nullopt;
    std::set<NetIndex> selset(sel.begin(), sel.end());
    std::vector<GateIndex> cones;
    for (const auto* f : {&*ci_fn, &*cy_fn}) {
        for (NetIndex n : f->tt.support)
            if (!selset.count(n)) return std::nullopt;
        cones.insert(cones.end(), f->gates.begin(), f->gates.end());
    }

    std::vector<PinFn> s_fns, di_fns;
    for (unsigned i = 0; i < w; ++i) {
        const ChainPosition& cp = v.positions[i];
        auto sfn = pin_fn(nl, cp.chip, pin::carry_s(int(cp.pos & 3)), 6);
        auto dfn = pin_fn(nl, cp.chip, pin::carry_di(int(cp.pos & 3)), 6);
        if (!sfn || !dfn) return std::nullopt;
        cones.insert(cones.end(), sfn->gates.begin(), sfn->gates.end());
        cones.insert(cones.end(), dfn->gates.begin(), dfn->gates.end());
        s_fns.push_back(std::move(*sfn));
        di_fns.push_back(std::move(*dfn));
    }

    unsigned k = unsigned(sel.size());
    std::map<uint64_t, std::string> op_map;
    std::vector<std::array<NetIndex, 2>> pairs(w, {kInvalidIndex, kInvalidIndex});
    std::vector<NetIndex> a(w, kInvalidIndex), b(w, kInvalidIndex);
    bool oriented = false, any_symmetric = false;
    std::set<std::string> ops;
    for (uint64_t asg = 0; asg < (uint64_t(1) << k); ++asg) {
        std::map<NetIndex, bool> vals;
        for (unsigned j = 0; j < k; ++j) vals[sel[j]] = (asg >> j) & 1;
        int c0 = (eval_point(ci_fn->tt, vals) || eval_point(cy_fn->tt, vals)) ? 1 : 0;
        const LibEntry* entry = nullptr;
        std::vector<std::array<NetIndex, 2>> apairs(w);
        std::vector<NetIndex> aa(w, kInvalidIndex), ab(w, kInvalidIndex);
        for (unsigned i = 0; i < w; ++i) {
            TruthTable s_tt = s_fns[i].tt, di_tt = di_fns[i].tt;
            for (unsigned j = 0; j < k; ++j) {
                s_tt = cofactor(s_tt, sel[j], vals[sel[j]]);
                di_tt = cofactor(di_tt, sel[j], vals[sel[j]]);
            }
            const LibEntry* e = lib.lookup(npn_canonical(s_tt.fn).canonical,
                                           npn_canonical(di_tt.fn).canonical, c0,
                                           OutSite::Word);
            if (!e || (entry && e != entry) || !builtin_op(e->op)) return std::nullopt;
            entry = e;
            if (!extract_position_operands(e->op, s_tt, di_tt, apairs[i], aa[i], ab[i]))
                return std::nullopt;
        }
        op_map[asg] = entry->op;
        ops.insert(entry->op);
        bool sym = entry->op == "add" || entry->op == "eq";
        any_symmetric |= sym;
        for (unsigned i = 0; i < w; ++i) {
            auto norm = [](std::array<NetIndex, 2> p) {
                if (p[1] < p[0]) std::swap(p[0], p[1]);
                return p;
            };
            if (pairs[i][0] == kInvalidIndex)
                pairs[i] = norm(apairs[i]);
            else if (pairs[i] != norm(apairs[i]))
                return std::nullopt;
        }
        if (!sym) {
            if (!oriented) {
                a = aa;
                b = ab;
                oriented = true;
            } else if (a != aa || b != ab) {
                return std::nullopt;
            }
        }
    }

    InferredModule m;
    m.kind = (ops == std::set<std::string>{"add", "sub"}) ? ModuleKind::AddSub
                                                          : ModuleKind::Alu;
    m.selects = sel;
    m.op_map = std::move(op_map);
    if (!oriented) {
        if (!resolve_symmetric(nl, ctx, pairs, a, b))
            m.detail = "operand split is positional; all operations are symmetric";
    }
    m.inputs = {a, b};
    m.input_names = {"a", "b"};
    for (unsigned i = 0; i < w; ++i) m.output.push_back(v.positions[i].o);

    std::vector<GateIndex> chips(v.chain->chips);
    m.gates = chips;
    auto claimed = claimable_gates(nl, cones, chips);
    m.gates.insert(m.gates.end(), claimed.begin(), claimed.end());
    try_absorb_output_ffs(nl, m);
    std::sort(m.gates.begin(), m.gates.end());
    return m;
}

InferredModule unknown_chain_module(const Netlist& nl, const ChainView& v) {
    (void)nl;
    InferredModule m;
    m.kind = ModuleKind::UnknownCarry;
    m.words_resolved = false;
    m.gates = v.chain->chips;
    std::sort(m.gates.begin(), m.gates.end());
    m.detail = v.chain->note;
    return m;
}

} // namespace lutrev
