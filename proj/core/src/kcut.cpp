#include "lutrev/kcut.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "lutrev/cone.hpp"
#include "lutrev/error.hpp"

namespace lutrev {

namespace {

bool leaves_less(const Cut& a, const Cut& b) {
    if (a.leaves.size() != b.leaves.size()) return a.leaves.size() < b.leaves.size();
    return a.leaves < b.leaves;
}

// Dedupe, drop cuts that properly contain another cut, sort by size then
// leaf order, cap.
void tidy_cuts(std::vector<Cut>& cs, unsigned cap) {
    std::sort(cs.begin(), cs.end(), leaves_less);
    cs.erase(std::unique(cs.begin(), cs.end(),
                         [](const Cut& a, const Cut& b) { return a.leaves == b.leaves; }),
             cs.end());
    std::vector<Cut> keep;
    for (Cut& c : cs) {
        bool dominated = false;
        for (const Cut& k : keep) {
            if (k.leaves.size() >= c.leaves.size()) continue;
            if (std::includes(c.leaves.begin(), c.leaves.end(), k.leaves.begin(),
                              k.leaves.end())) {
                dominated = true;
                break;
            }
        }
        if (!dominated) keep.push_back(std::move(c));
    }
    if (keep.size() > cap) keep.resize(cap);
    cs = std::move(keep);
}

std::vector<NetIndex> gate_fanin(const Gate& g) {
    if (is_lut(g.prim)) {
        int w = lut_width(g.prim);
        return {g.pins.begin(), g.pins.begin() + w};
    }
    return {g.pins[pin::kMuxI0], g.pins[pin::kMuxI1], g.pins[pin::kMuxS]};
}

} // namespace

CutEnumerator::CutEnumerator(const Netlist& nl, CutConfig cfg) : nl_(nl), cfg_(cfg) {}

CutEnumerator::CutEnumerator(const Netlist& nl, CutConfig cfg,
                             std::unordered_set<GateIndex> usable)
    : nl_(nl), cfg_(cfg), restricted_(true), usable_(std::move(usable)) {}

bool CutEnumerator::expandable(NetIndex n) const {
    const PinRef& d = nl_.net(n).driver;
    if (!d.valid()) return false;
    const Gate& g = nl_.gate(d.gate);
    if (!is_lut(g.prim) && !is_muxf(g.prim)) return false;
    return !restricted_ || usable_.count(d.gate) != 0;
}

const std::vector<Cut>& CutEnumerator::cuts(NetIndex n) {
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    std::vector<Cut> cs = compute(n);
    return memo_.emplace(n, std::move(cs)).first->second;
}

std::vector<Cut> CutEnumerator::compute(NetIndex n) {
    if (nl_.is_const(n)) return {Cut{}};
    std::vector<Cut> out;
    if (expandable(n)) {
        const Gate& g = nl_.gate(nl_.net(n).driver.gate);
        std::vector<Cut> acc{Cut{}};
        for (NetIndex in : gate_fanin(g)) {
            std::vector<Cut> ins = cuts(in);
            std::vector<Cut> next;
            for (const Cut& a : acc) {
                for (const Cut& b : ins) {
                    Cut u;
                    std::set_union(a.leaves.begin(), a.leaves.end(), b.leaves.begin(),
                                   b.leaves.end(), std::back_inserter(u.leaves));
                    if (u.leaves.size() <= cfg_.k) next.push_back(std::move(u));
                }
            }
            tidy_cuts(next, cfg_.max_cuts_per_net);
            acc = std::move(next);
            if (acc.empty()) break;
        }
        out = std::move(acc);
    }
    out.push_back(Cut{{n}});
    tidy_cuts(out, cfg_.max_cuts_per_net);
    return out;
}

CutFunction cut_function(const Netlist& nl, NetIndex net, const Cut& cut) {
    if (cut.leaves.size() > 6) throw InternalError("cut wider than 6 leaves");
    if (cut.leaves.size() == 1 && cut.leaves[0] == net)
        return {TtBits{0x2, 1}, {net}, {}};
    if (nl.is_const(net))
        return {TtBits{nl.net(net).kind == NetKind::Const1 ? 1ull : 0ull, 0}, {}, {}};

    std::set<NetIndex> leafset(cut.leaves.begin(), cut.leaves.end());
    std::vector<GateIndex> order;
    std::set<GateIndex> seen;
    std::function<void(NetIndex)> visit = [&](NetIndex n) {
        if (leafset.count(n) || nl.is_const(n)) return;
        const PinRef& d = nl.net(n).driver;
        if (!d.valid())
            throw InternalError("cut does not cover net '" + nl.net(n).id + "'");
        if (seen.count(d.gate)) return;
        seen.insert(d.gate);
        const Gate& g = nl.gate(d.gate);
        if (!is_lut(g.prim) && !is_muxf(g.prim))
            throw InternalError("cut cone crosses gate '" + g.id + "'");
        for (NetIndex in : gate_fanin(g)) visit(in);
        order.push_back(d.gate);
    };
    visit(net);

    Cone cone;
    cone.root = nl.net(net).driver;
    cone.gates = order;
    cone.frontier = cut.leaves;
    TruthTable tt = cone_to_function(nl, cone);
    return {tt.fn, tt.support, std::move(order)};
}

std::vector<WordRoot> bitwise_word_roots(const Netlist& nl,
                                         const std::vector<InferredModule>& seq_modules) {
    std::vector<WordRoot> roots;
    unsigned ri = 0;
    for (const InferredModule& m : seq_modules) {
        if (m.kind != ModuleKind::Register) continue;
        std::string group = "r" + std::to_string(ri++);
        const std::vector<NetIndex>& d = m.inputs.at(0);
        for (unsigned b = 0; b < d.size(); ++b) roots.push_back({group, b, d[b]});
    }
    for (const Port* p : nl.output_ports())
        for (unsigned b = 0; b < p->bits.size(); ++b)
            roots.push_back({"o" + p->name, b, p->bits[b]});
    return roots;
}

namespace {

// Per (group, key, bit): the column nets of the first candidate, in column
// order, plus its cone.
struct BitCand {
    std::vector<NetIndex> col_nets;
    std::vector<GateIndex> gates;
};

struct KeyMeta {
    std::vector<std::string> ids;   // sorted column identities
    TtBits fn;                      // table with variables in column order
};

std::string encode_key(const std::vector<std::string>& ids, TtBits fn) {
    std::string key;
    for (const std::string& id : ids) {
        key += std::to_string(id.size());
        key += '#';
        key += id;
    }
    key += '|';
    key += tt_to_hex(fn);
    return key;
}

std::string bw_op_name(TtBits t) {
    if (t.nvars == 1) {
        if (t.bits == 0x2) return "buf";
        if (t.bits == 0x1) return "not";
    } else if (t.nvars == 2) {
        switch (t.bits) {
            case 0x8: return "and";
            case 0xe: return "or";
            case 0x6: return "xor";
            case 0x7: return "nand";
            case 0x1: return "nor";
            case 0x9: return "xnor";
        }
    } else if (t.nvars == 3) {
        // s ? i1 : i0 over (i0, i1, s), under any variable-to-role mapping
        const TtBits base{0xca, 3};
        std::vector<unsigned> p{0, 1, 2};
        do {
            if (tt_permute(base, p).bits == t.bits) return "mux";
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return "bw";
}

// Like claimable_gates but module output nets are exempt: their loads and
// primary-output status are the module's public face.
std::vector<GateIndex> claim_cone(const Netlist& nl, std::vector<GateIndex> cand,
                                  const std::set<NetIndex>& outs) {
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::set<GateIndex> keep(cand.begin(), cand.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (GateIndex gi : cand) {
            if (!keep.count(gi)) continue;
            const Gate& g = nl.gate(gi);
            bool leaks = false;
            for (uint16_t p = 0; p < uint16_t(g.pins.size()) && !leaks; ++p) {
                if (!pin_is_output(g, p)) continue;
                NetIndex n = g.pins[p];
                if (outs.count(n)) continue;
                if (nl.is_primary_output(n)) leaks = true;
                for (const PinRef& l : nl.net(n).loads)
                    if (!keep.count(l.gate)) leaks = true;
            }
            if (leaks) {
                keep.erase(gi);
                changed = true;
            }
        }
    }
    std::vector<GateIndex> out;
    for (GateIndex g : cand)
        if (keep.count(g)) out.push_back(g);
    return out;
}

} // namespace

std::vector<InferredModule> detect_bitwise_words(const Netlist& nl, const CarryContext& ctx,
                                                 const std::vector<WordRoot>& roots,
                                                 const std::unordered_set<GateIndex>& usable,
                                                 const CutConfig& cfg) {
    CutEnumerator en(nl, cfg, usable);

    std::map<std::pair<std::string, unsigned>, NetIndex> root_net;
    std::map<std::string, std::map<std::string, std::map<unsigned, BitCand>>> cands;
    std::map<std::string, KeyMeta> metas;

    for (const WordRoot& r : roots) {
        if (nl.is_const(r.net)) continue;
        root_net[{r.group, r.bit}] = r.net;
        for (const Cut& c : en.cuts(r.net)) {
            if (c.leaves.size() == 1 && c.leaves[0] == r.net) continue;
            CutFunction cf = cut_function(nl, r.net, c);
            if (cf.gates.empty()) continue;
            unsigned m = unsigned(cf.leaves.size());

            std::vector<SrcTag> tags(m);
            std::vector<bool> can_word(m);
            for (unsigned j = 0; j < m; ++j) {
                tags[j] = source_tag(nl, ctx, cf.leaves[j]);
                can_word[j] = !tags[j].src.empty() && tags[j].src[0] != 'n';
            }

            // Try every scalar/word role split; inconsistent ones never
            // aggregate across bits and die of width < 2.
            for (uint32_t roles = 0; roles < (1u << m); ++roles) {
                std::vector<std::string> ids(m);
                bool ok = true;
                for (unsigned j = 0; j < m && ok; ++j) {
                    if (roles >> j & 1) {
                        if (!can_word[j]) {
                            ok = false;
                            break;
                        }
                        ids[j] = "w:" + tags[j].src + ":" +
                                 std::to_string(tags[j].idx - long(r.bit));
                    } else {
                        ids[j] = "s:" + nl.net(cf.leaves[j]).id;
                    }
                }
                if (!ok) continue;

                std::vector<std::string> sorted_ids = ids;
                std::sort(sorted_ids.begin(), sorted_ids.end());
                std::vector<unsigned> perm(m);
                for (unsigned j = 0; j < m; ++j)
                    perm[j] = unsigned(std::lower_bound(sorted_ids.begin(), sorted_ids.end(),
                                                        ids[j]) -
                                       sorted_ids.begin());
                TtBits fn = tt_permute(cf.fn, perm);
                std::string key = encode_key(sorted_ids, fn);

                auto& slot = cands[r.group][key];
                if (!slot.count(r.bit)) {
                    BitCand bc;
                    bc.col_nets.resize(m);
                    for (unsigned j = 0; j < m; ++j) bc.col_nets[perm[j]] = cf.leaves[j];
                    bc.gates = cf.gates;
                    slot.emplace(r.bit, std::move(bc));
                    metas.emplace(key, KeyMeta{std::move(sorted_ids), fn});
                }
            }
        }
    }

    std::vector<InferredModule> out;
    std::set<GateIndex> stage_claimed;
    std::set<NetIndex> stage_out_nets;

    for (auto& [group, keys] : cands) {
        std::vector<std::pair<std::string, const std::map<unsigned, BitCand>*>> order;
        for (auto& [key, bits] : keys)
            if (bits.size() >= 2) order.emplace_back(key, &bits);
        std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
            if (a.second->size() != b.second->size()) return a.second->size() > b.second->size();
            return a.first < b.first;
        });

        std::set<unsigned> used_bits;
        for (auto& [key, bits] : order) {
            std::vector<unsigned> avail;
            std::set<NetIndex> word_nets;
            bool clash = false;
            for (auto& [b, bc] : *bits) {
                if (used_bits.count(b)) continue;
                NetIndex n = root_net.at({group, b});
                if (stage_out_nets.count(n) || word_nets.count(n)) {
                    clash = true;
                    break;
                }
                word_nets.insert(n);
                avail.push_back(b);
            }
            if (clash || avail.size() < 2) continue;

            const KeyMeta& meta = metas.at(key);
            unsigned ncols = unsigned(meta.ids.size());

            InferredModule m;
            m.kind = ModuleKind::BitwiseWord;
            m.bw_table = meta.fn;
            m.op = bw_op_name(meta.fn);
            m.inputs.resize(ncols);
            m.input_scalar.resize(ncols);
            for (unsigned cidx = 0; cidx < ncols; ++cidx) {
                m.input_names.push_back(std::string(1, char('a' + cidx)));
                bool scalar = meta.ids[cidx].rfind("s:", 0) == 0;
                m.input_scalar[cidx] = scalar;
                if (scalar) {
                    m.inputs[cidx] = {bits->at(avail[0]).col_nets[cidx]};
                } else {
                    for (unsigned b : avail)
                        m.inputs[cidx].push_back(bits->at(b).col_nets[cidx]);
                }
            }
            for (unsigned b : avail) m.output.push_back(root_net.at({group, b}));

            std::vector<GateIndex> cand;
            for (unsigned b : avail)
                for (GateIndex g : bits->at(b).gates)
                    if (!stage_claimed.count(g)) cand.push_back(g);
            std::sort(cand.begin(), cand.end());
            cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
            size_t before = cand.size();
            std::set<NetIndex> outs(m.output.begin(), m.output.end());
            m.gates = claim_cone(nl, cand, outs);
            if (m.gates.size() < before)
                m.detail = "logic shared with other consumers stays unclaimed";

            for (GateIndex g : m.gates) stage_claimed.insert(g);
            for (unsigned b : avail) used_bits.insert(b);
            for (NetIndex n : m.output) stage_out_nets.insert(n);
            out.push_back(std::move(m));
        }
    }
    return out;
}

} // namespace lutrev
