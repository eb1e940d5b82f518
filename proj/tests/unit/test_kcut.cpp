#include "doctest.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "lutrev/kcut.hpp"
#include "lutrev/seq_modules.hpp"
#include "lutrev/simulate.hpp"
#include "lutrev/synth_gen.hpp"

using namespace lutrev;

namespace {

std::vector<NetIndex> named_word(const Netlist& nl, const std::string& base, unsigned w) {
    std::vector<NetIndex> v;
    for (unsigned i = 0; i < w; ++i)
        v.push_back(nl.require_net(base + "[" + std::to_string(i) + "]"));
    return v;
}

std::set<std::string> gate_ids(const Netlist& nl, const std::vector<GateIndex>& g) {
    std::set<std::string> s;
    for (GateIndex gi : g) s.insert(nl.gate(gi).id);
    return s;
}

std::unordered_set<GateIndex> free_comb(const Netlist& nl,
                                        const std::vector<InferredModule>& claimed_by) {
    std::unordered_set<GateIndex> u;
    for (GateIndex gi = 0; gi < GateIndex(nl.gates().size()); ++gi) {
        Prim p = nl.gate(gi).prim;
        if (is_lut(p) || is_muxf(p)) u.insert(gi);
    }
    for (const InferredModule& m : claimed_by)
        for (GateIndex g : m.gates) u.erase(g);
    return u;
}

struct KcutRun {
    GenDesign d;
    std::vector<InferredModule> seq;
    std::vector<InferredModule> words;
};

KcutRun run_kcut(const GenOptions& o, CutConfig cfg = {}) {
    KcutRun r;
    r.d = generate(o);
    r.seq = identify_seq_modules(r.d.netlist, r.d.netlist.ff_gates(), SeqConfig{});
    CarryContext ctx = build_carry_context(r.d.netlist);
    auto roots = bitwise_word_roots(r.d.netlist, r.seq);
    r.words = detect_bitwise_words(r.d.netlist, ctx, roots,
                                   free_comb(r.d.netlist, r.seq), cfg);
    return r;
}

GateIndex add_lut(Netlist& nl, const std::string& id, const std::vector<NetIndex>& ins,
                  uint64_t init, NetIndex out) {
    std::vector<NetIndex> pins = ins;
    pins.push_back(out);
    return nl.add_gate(id, lut_prim(int(ins.size())), init, std::move(pins));
}

} // namespace

TEST_CASE("tt_permute relabels variables") {
    // f(v0,v1,v2) = (v0 & ~v1) | v2, checked pointwise against the remap.
    TtBits f{0, 3};
    for (uint64_t m = 0; m < 8; ++m)
        if (((m & 1) && !(m & 2)) || (m & 4)) f.bits |= 1ull << m;
    std::vector<unsigned> perm{2, 0, 1};
    TtBits g = tt_permute(f, perm);
    CHECK(g.nvars == 3);
    for (uint64_t m = 0; m < 8; ++m) {
        uint64_t mm = 0;
        for (unsigned v = 0; v < 3; ++v)
            if (m >> v & 1) mm |= 1ull << perm[v];
        CHECK(((g.bits >> mm) & 1) == ((f.bits >> m) & 1));
    }
    // Round trip through the inverse permutation.
    std::vector<unsigned> inv(3);
    for (unsigned v = 0; v < 3; ++v) inv[perm[v]] = v;
    CHECK(tt_permute(g, inv).bits == f.bits);
}

namespace {

// A small reconvergent network: y = ((a & b) ^ (b | c)) & d, plus a MUXF7
// picking between the two middle terms.
struct ReconvNets {
    Netlist nl;
    NetIndex a, b, c, d, n1, n2, n3, y, mo;
};

ReconvNets build_reconv() {
    ReconvNets r;
    Netlist& nl = r.nl;
    r.a = nl.add_net("a");
    r.b = nl.add_net("b");
    r.c = nl.add_net("c");
    r.d = nl.add_net("d");
    nl.add_port("a", true, {r.a});
    nl.add_port("b", true, {r.b});
    nl.add_port("c", true, {r.c});
    nl.add_port("d", true, {r.d});
    r.n1 = nl.add_net("n1");
    r.n2 = nl.add_net("n2");
    r.n3 = nl.add_net("n3");
    r.y = nl.add_net("y");
    r.mo = nl.add_net("mo");
    add_lut(nl, "g1", {r.a, r.b}, 0x8, r.n1);
    add_lut(nl, "g2", {r.b, r.c}, 0xe, r.n2);
    add_lut(nl, "g3", {r.n1, r.n2}, 0x6, r.n3);
    add_lut(nl, "g4", {r.n3, r.d}, 0x8, r.y);
    nl.add_gate("m1", Prim::Muxf7, 0, {r.n1, r.n2, r.d, r.mo});
    nl.add_port("y", false, {r.y});
    nl.add_port("mo", false, {r.mo});
    nl.finalize();
    return r;
}

// Ground truth by definition: S covers the root when every backward path
// from it hits S (or a constant) before running out of LUT/MUXF drivers.
bool is_cut_of(const Netlist& nl, NetIndex root, const std::set<NetIndex>& s) {
    std::function<bool(NetIndex)> covered = [&](NetIndex n) -> bool {
        if (s.count(n)) return true;
        if (nl.is_const(n)) return true;
        const PinRef& d = nl.net(n).driver;
        if (!d.valid()) return false;
        const Gate& g = nl.gate(d.gate);
        if (!is_lut(g.prim) && !is_muxf(g.prim)) return false;
        int k = is_lut(g.prim) ? lut_width(g.prim) : 3;
        std::vector<NetIndex> ins;
        if (is_lut(g.prim))
            ins.assign(g.pins.begin(), g.pins.begin() + k);
        else
            ins = {g.pins[pin::kMuxI0], g.pins[pin::kMuxI1], g.pins[pin::kMuxS]};
        for (NetIndex in : ins)
            if (!covered(in)) return false;
        return true;
    };
    return covered(root);
}

std::vector<NetIndex> tfi_nets(const Netlist& nl, NetIndex root) {
    std::set<NetIndex> seen;
    std::function<void(NetIndex)> walk = [&](NetIndex n) {
        if (nl.is_const(n) || seen.count(n)) return;
        seen.insert(n);
        const PinRef& d = nl.net(n).driver;
        if (!d.valid()) return;
        const Gate& g = nl.gate(d.gate);
        if (!is_lut(g.prim) && !is_muxf(g.prim)) return;
        if (is_lut(g.prim)) {
            for (int i = 0; i < lut_width(g.prim); ++i) walk(g.pins[size_t(i)]);
        } else {
            walk(g.pins[pin::kMuxI0]);
            walk(g.pins[pin::kMuxI1]);
            walk(g.pins[pin::kMuxS]);
        }
    };
    walk(root);
    return {seen.begin(), seen.end()};
}

// All minimal cuts of size <= k by exhaustive subset search.
std::set<std::vector<NetIndex>> brute_cuts(const Netlist& nl, NetIndex root, unsigned k) {
    std::vector<NetIndex> tfi = tfi_nets(nl, root);
    REQUIRE(tfi.size() <= 16);
    std::set<std::vector<NetIndex>> out;
    for (uint32_t m = 1; m < (1u << tfi.size()); ++m) {
        if (unsigned(__builtin_popcount(m)) > k) continue;
        std::set<NetIndex> s;
        for (size_t i = 0; i < tfi.size(); ++i)
            if (m >> i & 1) s.insert(tfi[i]);
        if (!is_cut_of(nl, root, s)) continue;
        bool minimal = true;
        for (NetIndex l : s) {
            std::set<NetIndex> smaller = s;
            smaller.erase(l);
            if (is_cut_of(nl, root, smaller)) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.insert(std::vector<NetIndex>(s.begin(), s.end()));
    }
    return out;
}

} // namespace

TEST_CASE("cut enumeration matches the exhaustive minimal-cut search") {
    ReconvNets r = build_reconv();
    for (unsigned k : {2u, 3u, 4u, 6u}) {
        CutEnumerator en(r.nl, CutConfig{k, 10000});
        for (NetIndex root : {r.y, r.n3, r.mo}) {
            std::set<std::vector<NetIndex>> got;
            for (const Cut& c : en.cuts(root)) got.insert(c.leaves);
            CHECK(got == brute_cuts(r.nl, root, k));
        }
    }
}

TEST_CASE("cut enumeration respects the per-net cap") {
    ReconvNets r = build_reconv();
    CutEnumerator en(r.nl, CutConfig{6, 2});
    CHECK(en.cuts(r.y).size() <= 2);
}

TEST_CASE("restricting the usable gate set turns claimed drivers into leaves") {
    ReconvNets r = build_reconv();
    GateIndex g1 = r.nl.net(r.n1).driver.gate;
    std::unordered_set<GateIndex> usable;
    for (GateIndex gi = 0; gi < GateIndex(r.nl.gates().size()); ++gi)
        if (gi != g1) usable.insert(gi);
    CutEnumerator en(r.nl, CutConfig{6, 10000}, usable);
    for (const Cut& c : en.cuts(r.y)) {
        // n1 can never be expanded, so no cut reaches a or dissolves n1.
        bool has_a = std::count(c.leaves.begin(), c.leaves.end(), r.a) > 0;
        CHECK(!has_a);
    }
}

TEST_CASE("cut functions agree with region simulation") {
    ReconvNets r = build_reconv();
    Cut full{{r.a, r.b, r.c, r.d}};
    std::sort(full.leaves.begin(), full.leaves.end());
    CutFunction cf = cut_function(r.nl, r.y, full);
    REQUIRE(cf.leaves == full.leaves);
    CHECK(cf.gates.size() == 4);

    std::vector<std::vector<NetIndex>> in_words;
    for (NetIndex n : cf.leaves) in_words.push_back({n});
    CombRegion region(r.nl, cf.gates, in_words, {r.y});
    for (uint64_t m = 0; m < 16; ++m) {
        std::vector<uint64_t> vals;
        for (unsigned v = 0; v < 4; ++v) vals.push_back(m >> v & 1);
        CHECK(((cf.fn.bits >> m) & 1) == region.eval(std::span<const uint64_t>(vals)));
    }
}

TEST_CASE("cut functions drop leaves the function ignores") {
    Netlist nl;
    NetIndex x = nl.add_net("x"), ygn = nl.add_net("yg"), z = nl.add_net("z");
    NetIndex o = nl.add_net("o");
    nl.add_port("x", true, {x});
    nl.add_port("yg", true, {ygn});
    nl.add_port("z", true, {z});
    nl.add_port("o", false, {o});
    // Depends on pins 0 and 2 only: out = x & z.
    add_lut(nl, "g", {x, ygn, z}, 0xa0, o);
    nl.finalize();

    Cut c{{x, ygn, z}};
    std::sort(c.leaves.begin(), c.leaves.end());
    CutFunction cf = cut_function(nl, o, c);
    CHECK(cf.leaves == std::vector<NetIndex>{x, z});
    CHECK(cf.fn.nvars == 2);
    CHECK(cf.fn.bits == 0x8);

    CutFunction triv = cut_function(nl, x, Cut{{x}});
    CHECK(triv.fn.bits == 0x2);
    CHECK(triv.gates.empty());
}

TEST_CASE("generated bitwise designs come back as one word each") {
    const std::map<std::string, uint64_t> expected{
        {"and", 0x8}, {"or", 0xe}, {"xor", 0x6},
        {"nand", 0x7}, {"nor", 0x1}, {"xnor", 0x9},
    };
    for (const auto& [op, bits] : expected) {
        GenOptions o;
        o.kind = "bitwise-" + op;
        o.width = 8;
        KcutRun r = run_kcut(o);
        REQUIRE(r.words.size() == 1);
        const InferredModule& m = r.words[0];
        CHECK(m.kind == ModuleKind::BitwiseWord);
        CHECK(m.op == op);
        CHECK(m.bw_table.nvars == 2);
        CHECK(m.bw_table.bits == bits);
        CHECK(m.output == named_word(r.d.netlist, "d", 8));
        REQUIRE(m.inputs.size() == 2);
        CHECK(m.inputs[0] == named_word(r.d.netlist, "ra_q", 8));
        CHECK(m.inputs[1] == named_word(r.d.netlist, "rb_q", 8));
        CHECK(m.input_scalar == std::vector<bool>{false, false});
        CHECK(!m.registered_output);
        CHECK(m.words_resolved);
        CHECK(m.detail.empty());
        CHECK(gate_ids(r.d.netlist, m.gates) ==
              std::set<std::string>(r.d.labels[0].gate_ids.begin(),
                                    r.d.labels[0].gate_ids.end()));
    }
}

TEST_CASE("a word inverter is a unary bitwise word") {
    GenOptions o;
    o.kind = "bitwise-not";
    o.width = 8;
    KcutRun r = run_kcut(o);
    REQUIRE(r.words.size() == 1);
    const InferredModule& m = r.words[0];
    CHECK(m.op == "not");
    CHECK(m.bw_table.nvars == 1);
    CHECK(m.bw_table.bits == 0x1);
    REQUIRE(m.inputs.size() == 1);
    CHECK(m.inputs[0] == named_word(r.d.netlist, "ra_q", 8));
    CHECK(m.output == named_word(r.d.netlist, "d", 8));
}

TEST_CASE("a mux word keeps its select as a scalar column") {
    for (bool permuted : {false, true}) {
        GenOptions o;
        o.kind = "bitwise-mux";
        o.width = 8;
        o.permuted = permuted;
        KcutRun r = run_kcut(o);
        REQUIRE(r.words.size() == 1);
        const InferredModule& m = r.words[0];
        CHECK(m.op == "mux");
        REQUIRE(m.inputs.size() == 3);
        CHECK(m.input_scalar == std::vector<bool>{true, false, false});
        CHECK(m.inputs[0] == std::vector<NetIndex>{r.d.netlist.require_net("s")});
        CHECK(m.inputs[1] == named_word(r.d.netlist, "ra_q", 8));
        CHECK(m.inputs[2] == named_word(r.d.netlist, "rb_q", 8));
        CHECK(m.output == named_word(r.d.netlist, "d", 8));
        // Select high picks a: variable order is (s, a, b).
        REQUIRE(m.bw_table.nvars == 3);
        for (uint64_t v = 0; v < 8; ++v) {
            uint64_t s = v & 1, a = v >> 1 & 1, b = v >> 2 & 1;
            CHECK(((m.bw_table.bits >> v) & 1) == (s ? a : b));
        }
        CHECK(gate_ids(r.d.netlist, m.gates) ==
              std::set<std::string>(r.d.labels[0].gate_ids.begin(),
                                    r.d.labels[0].gate_ids.end()));
    }
}

TEST_CASE("pin-permuted bitwise words detect identically") {
    GenOptions o;
    o.kind = "bitwise-xor";
    o.width = 8;
    o.permuted = true;
    KcutRun r = run_kcut(o);
    REQUIRE(r.words.size() == 1);
    CHECK(r.words[0].op == "xor");
    CHECK(r.words[0].bw_table.bits == 0x6);
    CHECK(r.words[0].inputs[0] == named_word(r.d.netlist, "ra_q", 8));
    CHECK(r.words[0].inputs[1] == named_word(r.d.netlist, "rb_q", 8));
}

TEST_CASE("the wide bitwise composition yields twenty labeled words") {
    GenOptions o;
    o.kind = "aes-analog";
    o.width = 8;
    KcutRun r = run_kcut(o);
    REQUIRE(r.words.size() == 20);

    // Match each module against a generator label by claimed gate set.
    std::map<std::set<std::string>, std::string> by_gates;
    for (const GenLabel& lab : r.d.labels)
        by_gates[std::set<std::string>(lab.gate_ids.begin(), lab.gate_ids.end())] = lab.op;
    std::map<std::string, int> op_counts;
    for (const InferredModule& m : r.words) {
        auto it = by_gates.find(gate_ids(r.d.netlist, m.gates));
        REQUIRE(it != by_gates.end());
        CHECK(m.op == it->second);
        CHECK(module_width(m) == 8);
        ++op_counts[m.op];
        by_gates.erase(it);
    }
    CHECK(by_gates.empty());
    CHECK(op_counts["xor"] == 4);
    CHECK(op_counts["and"] == 4);
    CHECK(op_counts["or"] == 4);
    CHECK(op_counts["xnor"] == 4);
    CHECK(op_counts["mux"] == 4);
}

TEST_CASE("bitwise words rooted at output ports need no registers") {
    Netlist nl;
    auto mkword = [&](const std::string& base, unsigned w, bool in) {
        std::vector<NetIndex> v;
        for (unsigned i = 0; i < w; ++i)
            v.push_back(nl.add_net(base + "[" + std::to_string(i) + "]"));
        nl.add_port(base, in, v);
        return v;
    };
    auto a = mkword("a", 4, true);
    auto b = mkword("b", 4, true);
    auto s = mkword("s", 4, true);
    auto y = mkword("y", 4, false);
    for (unsigned i = 0; i < 4; ++i)
        add_lut(nl, "g" + std::to_string(i), {a[i], b[i], s[i]}, 0xca,
                y[i]);
    nl.finalize();

    CarryContext ctx = build_carry_context(nl);
    auto roots = bitwise_word_roots(nl, {});
    auto words = detect_bitwise_words(nl, ctx, roots, free_comb(nl, {}), CutConfig{});
    REQUIRE(words.size() == 1);
    const InferredModule& m = words[0];
    CHECK(m.op == "mux");
    CHECK(m.output == y);
    // Per-bit select word: three word columns, none scalar.
    CHECK(m.input_scalar == std::vector<bool>{false, false, false});
    CHECK(m.inputs == std::vector<std::vector<NetIndex>>{a, b, s});
    CHECK(m.gates.size() == 4);
}

TEST_CASE("a shared internal gate stays with the fallback but the word survives") {
    Netlist nl;
    auto mkword = [&](const std::string& base, unsigned w, bool in) {
        std::vector<NetIndex> v;
        for (unsigned i = 0; i < w; ++i)
            v.push_back(nl.add_net(base + "[" + std::to_string(i) + "]"));
        nl.add_port(base, in, v);
        return v;
    };
    auto a = mkword("a", 4, true);
    auto b = mkword("b", 4, true);
    auto c = mkword("c", 4, true);
    auto y = mkword("y", 4, false);
    std::vector<NetIndex> t(4);
    for (unsigned i = 0; i < 4; ++i) {
        t[i] = nl.add_net("t[" + std::to_string(i) + "]");
        add_lut(nl, "ag" + std::to_string(i), {a[i], b[i]}, 0x8, t[i]);
        add_lut(nl, "xg" + std::to_string(i), {t[i], c[i]}, 0x6, y[i]);
    }
    NetIndex spy = nl.add_net("spy");
    add_lut(nl, "spyg", {t[2]}, 0x2, spy);
    nl.add_port("spy", false, {spy});
    nl.finalize();

    CarryContext ctx = build_carry_context(nl);
    auto roots = bitwise_word_roots(nl, {});
    auto words = detect_bitwise_words(nl, ctx, roots, free_comb(nl, {}), CutConfig{});
    REQUIRE(words.size() == 1);
    const InferredModule& m = words[0];
    CHECK(m.output == y);
    REQUIRE(m.inputs.size() == 3);
    CHECK(m.inputs == std::vector<std::vector<NetIndex>>{a, b, c});
    // (a & b) ^ c has no short name.
    CHECK(m.op == "bw");
    for (uint64_t v = 0; v < 8; ++v) {
        uint64_t av = v & 1, bv = v >> 1 & 1, cv = v >> 2 & 1;
        CHECK(((m.bw_table.bits >> v) & 1) == ((av & bv) ^ cv));
    }
    // ag2 leaks into the spy, so it is not claimed.
    std::set<std::string> ids = gate_ids(nl, m.gates);
    CHECK(ids.size() == 7);
    CHECK(!ids.count("ag2"));
    CHECK(ids.count("xg2"));
    CHECK(!m.detail.empty());
}

TEST_CASE("only the matching slice of a register word is claimed") {
    Netlist nl;
    NetIndex clk = nl.add_net("clk"), ce = nl.add_net("ce");
    nl.add_port("clk", true, {clk});
    nl.add_port("ce", true, {ce});
    auto mkword = [&](const std::string& base, unsigned w, bool in) {
        std::vector<NetIndex> v;
        for (unsigned i = 0; i < w; ++i)
            v.push_back(nl.add_net(base + "[" + std::to_string(i) + "]"));
        nl.add_port(base, in, v);
        return v;
    };
    auto a = mkword("a", 4, true);
    auto b = mkword("b", 4, true);
    auto x = mkword("x", 2, true);
    std::vector<NetIndex> d(6), q(6);
    for (unsigned i = 0; i < 6; ++i) d[i] = nl.add_net("d[" + std::to_string(i) + "]");
    for (unsigned i = 0; i < 4; ++i)
        add_lut(nl, "g" + std::to_string(i), {a[i], b[i]}, 0x6, d[i]);
    add_lut(nl, "g4", {x[0], x[1]}, 0x8, d[4]);
    add_lut(nl, "g5", {x[0], x[1]}, 0xe, d[5]);
    for (unsigned i = 0; i < 6; ++i) {
        q[i] = nl.add_net("q[" + std::to_string(i) + "]");
        nl.add_gate("f" + std::to_string(i), Prim::Fdre, 0,
                    {clk, ce, d[i], nl.const_net(false), q[i]});
    }
    nl.add_port("q", false, q);
    nl.finalize();

    auto seq = identify_seq_modules(nl, nl.ff_gates(), SeqConfig{});
    REQUIRE(seq.size() == 1);
    CarryContext ctx = build_carry_context(nl);
    auto words = detect_bitwise_words(nl, ctx, bitwise_word_roots(nl, seq),
                                      free_comb(nl, seq), CutConfig{});
    REQUIRE(words.size() == 1);
    CHECK(words[0].op == "xor");
    CHECK(words[0].output == std::vector<NetIndex>(d.begin(), d.begin() + 4));
    CHECK(gate_ids(nl, words[0].gates) ==
          std::set<std::string>{"g0", "g1", "g2", "g3"});
}

TEST_CASE("bitwise detection is repeatable") {
    GenOptions o;
    o.kind = "aes-analog";
    o.width = 8;
    KcutRun r1 = run_kcut(o);
    KcutRun r2 = run_kcut(o);
    REQUIRE(r1.words.size() == r2.words.size());
    for (size_t i = 0; i < r1.words.size(); ++i) {
        CHECK(r1.words[i].op == r2.words[i].op);
        CHECK(r1.words[i].gates == r2.words[i].gates);
        CHECK(r1.words[i].inputs == r2.words[i].inputs);
        CHECK(r1.words[i].output == r2.words[i].output);
        CHECK(r1.words[i].bw_table.bits == r2.words[i].bw_table.bits);
    }
}
