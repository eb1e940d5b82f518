#include "doctest.h"

#include <set>

#include "lutrev/alu.hpp"
#include "lutrev/simulate.hpp"
#include "lutrev/synth_gen.hpp"

using namespace lutrev;

namespace {

ChainView single_view(const Netlist& nl, const CarryContext& ctx) {
    REQUIRE(ctx.chains.size() == 1);
    return make_chain_view(nl, ctx.chains[0]);
}

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

} // namespace

TEST_CASE("a four-function unit yields its exact opcode map") {
    for (bool permuted : {false, true}) {
        GenOptions o;
        o.kind = "alu";
        o.width = 8;
        o.permuted = permuted;
        o.seed = 17;
        GenDesign d = generate(o);
        CarryContext ctx = build_carry_context(d.netlist);
        ChainView v = single_view(d.netlist, ctx);
        AluConfig cfg;
        auto m = identify_alu(d.netlist, v, ctx, cfg);
        REQUIRE(m);
        CHECK(m->kind == ModuleKind::Alu);
        REQUIRE(m->op_map.size() == 4);
        CHECK(m->op_map.at(0) == "add");
        CHECK(m->op_map.at(1) == "sub");
        CHECK(m->op_map.at(2) == "and");
        CHECK(m->op_map.at(3) == "xor");
        CHECK(m->selects == named_word(d.netlist, "op", 2));
        CHECK(m->inputs[0] == named_word(d.netlist, "ra_q", 8));
        CHECK(m->inputs[1] == named_word(d.netlist, "rb_q", 8));
        CHECK(m->output == named_word(d.netlist, "q", 8));
        CHECK(m->registered_output);
        CHECK(m->words_resolved);
        CHECK(m->detail.empty());
        CHECK(gate_ids(d.netlist, m->gates) ==
              std::set<std::string>(d.labels[0].gate_ids.begin(),
                                    d.labels[0].gate_ids.end()));
    }
}

TEST_CASE("the discovered map agrees with live simulation") {
    GenOptions o;
    o.kind = "alu";
    o.width = 8;
    o.seed = 99;
    GenDesign d = generate(o);
    CarryContext ctx = build_carry_context(d.netlist);
    ChainView v = single_view(d.netlist, ctx);
    auto m = identify_alu(d.netlist, v, ctx, AluConfig{});
    REQUIRE(m);

    // Ports are clk,a,b,op; outputs just q. Two register stages.
    Simulator sim(d.netlist);
    uint64_t x = 0x243f6a8885a308d3ull;
    for (const auto& [asg, op] : m->op_map) {
        for (int t = 0; t < 64; ++t) {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            uint64_t av = x & 0xff, bv = (x >> 8) & 0xff;
            sim.step({0, av, bv, asg});
            sim.step({0, av, bv, asg});
            auto outs = sim.settle({0, av, bv, asg});
            CHECK(outs[0] == apply_word_op(op, av, bv, 8));
        }
    }
}

TEST_CASE("wide units fall back to sampled verification") {
    GenOptions o;
    o.kind = "alu";
    o.width = 16;
    o.seed = 4;
    GenDesign d = generate(o);
    CarryContext ctx = build_carry_context(d.netlist);
    ChainView v = single_view(d.netlist, ctx);
    AluConfig cfg;
    cfg.equiv_samples = 20000;
    auto m = identify_alu(d.netlist, v, ctx, cfg);
    REQUIRE(m);
    CHECK(m->op_map.at(1) == "sub");
    CHECK(m->op_map.at(2) == "and");
    CHECK(m->detail.find("sampling") != std::string::npos);
}

TEST_CASE("a registered adder is still recognized by the semantic path") {
    GenOptions o;
    o.kind = "adder";
    o.width = 8;
    o.registered = true;
    GenDesign d = generate(o);
    CarryContext ctx = build_carry_context(d.netlist);
    ChainView v = single_view(d.netlist, ctx);
    auto m = identify_alu(d.netlist, v, ctx, AluConfig{});
    REQUIRE(m);
    CHECK(m->kind == ModuleKind::Adder);
    CHECK(m->op == "add");
    CHECK(m->selects.empty());
    CHECK(m->output == named_word(d.netlist, "yq", 8));
}

TEST_CASE("combinational word outputs are out of scope") {
    GenOptions o;
    o.kind = "adder";
    o.width = 8;
    GenDesign d = generate(o);
    CarryContext ctx = build_carry_context(d.netlist);
    ChainView v = single_view(d.netlist, ctx);
    CHECK(!extract_alu_candidate(d.netlist, v, ctx, AluConfig{}));
}

TEST_CASE("an unlisted operation stops discovery instead of guessing") {
    // One select net switching between a+b and a+b+1: the second function is
    // no reference operation, so the whole chain must stay unidentified.
    Netlist nl;
    NetIndex clk = nl.add_net("clk");
    NetIndex mnet = nl.add_net("m");
    nl.add_port("clk", true, {clk});
    nl.add_port("m", true, {mnet});
    std::vector<NetIndex> a, b, s, q;
    for (int i = 0; i < 2; ++i) {
        a.push_back(nl.add_net("a" + std::to_string(i)));
        b.push_back(nl.add_net("b" + std::to_string(i)));
    }
    nl.add_port("a", true, a);
    nl.add_port("b", true, b);
    std::vector<NetIndex> pins(18);
    pins[pin::kCarryCi] = nl.const_net(false);
    pins[pin::kCarryCyinit] = mnet;
    for (int i = 0; i < 4; ++i) {
        NetIndex sn = nl.const_net(false);
        if (i < 2) {
            sn = nl.add_net("s" + std::to_string(i));
            nl.add_gate("sl" + std::to_string(i), Prim::Lut2, 0x6, {a[i], b[i], sn});
        }
        pins[pin::carry_s(i)] = sn;
        pins[pin::carry_di(i)] = i < 2 ? a[i] : nl.const_net(false);
        pins[pin::carry_o(i)] = nl.add_net("o" + std::to_string(i));
        pins[pin::carry_co(i)] = nl.add_net("c" + std::to_string(i));
    }
    std::vector<NetIndex> o = {pins[pin::carry_o(0)], pins[pin::carry_o(1)]};
    nl.add_gate("cc0", Prim::Carry4, 0, std::move(pins));
    for (int i = 0; i < 2; ++i) {
        NetIndex qn = nl.add_net("q" + std::to_string(i));
        nl.add_gate("f" + std::to_string(i), Prim::Fdre, 0,
                    {clk, nl.const_net(true), o[size_t(i)], nl.const_net(false), qn});
        q.push_back(qn);
    }
    nl.add_port("q", false, q);
    nl.finalize();

    CarryContext ctx = build_carry_context(nl);
    ChainView v = single_view(nl, ctx);
    auto cand = extract_alu_candidate(nl, v, ctx, AluConfig{});
    REQUIRE(cand);
    CHECK(cand->opcode == std::vector<NetIndex>{mnet});
    CHECK(!discover_opcodes(nl, *cand, AluConfig{}));
    CHECK(!identify_alu(nl, v, ctx, AluConfig{}));
}

TEST_CASE("identification is repeatable") {
    GenOptions o;
    o.kind = "alu";
    o.width = 8;
    o.seed = 123;
    GenDesign d = generate(o);
    CarryContext ctx = build_carry_context(d.netlist);
    ChainView v = single_view(d.netlist, ctx);
    auto m1 = identify_alu(d.netlist, v, ctx, AluConfig{});
    auto m2 = identify_alu(d.netlist, v, ctx, AluConfig{});
    REQUIRE(m1);
    REQUIRE(m2);
    CHECK(m1->gates == m2->gates);
    CHECK(m1->op_map == m2->op_map);
    CHECK(m1->inputs == m2->inputs);
    CHECK(m1->selects == m2->selects);
}
