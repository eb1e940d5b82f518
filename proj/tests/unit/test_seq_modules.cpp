#include "doctest.h"

#include <set>

#include "lutrev/alu.hpp"
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

} // namespace

TEST_CASE("up counters of every reset kind are classified") {
    for (const char* kind : {"counter-r", "counter-s", "counter-c", "counter-p"}) {
        for (unsigned w : {4u, 8u, 12u}) {
            GenOptions o;
            o.kind = kind;
            o.width = w;
            GenDesign d = generate(o);
            auto mods = identify_seq_modules(d.netlist, d.netlist.ff_gates(), SeqConfig{});
            REQUIRE(mods.size() == 1);
            const InferredModule& m = mods[0];
            CHECK(m.kind == ModuleKind::Counter);
            CHECK(m.op == "up");
            CHECK(m.output == named_word(d.netlist, "q", w));
            CHECK(m.ctl.rst == d.netlist.require_net("rst"));
            CHECK(m.detail.empty());
            CHECK(gate_ids(d.netlist, m.gates) ==
                  std::set<std::string>(d.labels[0].gate_ids.begin(),
                                        d.labels[0].gate_ids.end()));
        }
    }
}

TEST_CASE("a wide counter is verified by probing and says so") {
    GenOptions o;
    o.kind = "counter-r";
    o.width = 16;
    GenDesign d = generate(o);
    auto mods = identify_seq_modules(d.netlist, d.netlist.ff_gates(), SeqConfig{});
    REQUIRE(mods.size() == 1);
    CHECK(mods[0].kind == ModuleKind::Counter);
    CHECK(mods[0].op == "up");
    CHECK(mods[0].detail.find("sampling") != std::string::npos);
}

TEST_CASE("a hand-built decrementer reports direction down") {
    Netlist nl;
    NetIndex clk = nl.add_net("clk");
    nl.add_port("clk", true, {clk});
    auto q = std::vector<NetIndex>{};
    for (int i = 0; i < 4; ++i) q.push_back(nl.add_net("q" + std::to_string(i)));
    nl.add_port("q", false, q);
    // Bit i toggles when all lower bits are zero.
    NetIndex d0 = nl.add_net("d0");
    nl.add_gate("g0", Prim::Lut1, 0x1, {q[0], d0});
    NetIndex b1 = nl.add_net("b1");
    nl.add_gate("n1", Prim::Lut1, 0x1, {q[0], b1});
    NetIndex d1 = nl.add_net("d1");
    nl.add_gate("g1", Prim::Lut2, 0x6, {q[1], b1, d1});
    NetIndex b2 = nl.add_net("b2");
    nl.add_gate("n2", Prim::Lut2, 0x1, {q[0], q[1], b2});
    NetIndex d2 = nl.add_net("d2");
    nl.add_gate("g2", Prim::Lut2, 0x6, {q[2], b2, d2});
    NetIndex b3 = nl.add_net("b3");
    nl.add_gate("n3", Prim::Lut3, 0x01, {q[0], q[1], q[2], b3});
    NetIndex d3 = nl.add_net("d3");
    nl.add_gate("g3", Prim::Lut2, 0x6, {q[3], b3, d3});
    std::vector<NetIndex> d = {d0, d1, d2, d3};
    for (int i = 0; i < 4; ++i)
        nl.add_gate("f" + std::to_string(i), Prim::Fdre, 0,
                    {clk, nl.const_net(true), d[size_t(i)], nl.const_net(false), q[size_t(i)]});
    nl.finalize();

    Simulator sim(nl);
    // step samples outputs before the clock edge.
    uint64_t expect = 0;
    for (int t = 0; t < 20; ++t) {
        CHECK(sim.step({0})[0] == expect);
        expect = (expect - 1) & 15;
    }

    auto mods = identify_seq_modules(nl, nl.ff_gates(), SeqConfig{});
    REQUIRE(mods.size() == 1);
    CHECK(mods[0].kind == ModuleKind::Counter);
    CHECK(mods[0].op == "down");
    CHECK(mods[0].output == q);
}

TEST_CASE("shift registers are traced from the serial head") {
    for (const char* kind : {"shiftreg-r", "shiftreg-p"}) {
        for (unsigned w : {4u, 8u}) {
            GenOptions o;
            o.kind = kind;
            o.width = w;
            GenDesign d = generate(o);
            auto mods = identify_seq_modules(d.netlist, d.netlist.ff_gates(), SeqConfig{});
            REQUIRE(mods.size() == 1);
            const InferredModule& m = mods[0];
            CHECK(m.kind == ModuleKind::ShiftRegister);
            CHECK(m.output == named_word(d.netlist, "q", w));
            CHECK(m.serial_in == d.netlist.require_net("si"));
            CHECK(gate_ids(d.netlist, m.gates) ==
                  std::set<std::string>(d.labels[0].gate_ids.begin(),
                                        d.labels[0].gate_ids.end()));
        }
    }
}

TEST_CASE("buffer LUTs between stages belong to the shift register") {
    Netlist nl;
    NetIndex clk = nl.add_net("clk");
    NetIndex si = nl.add_net("si");
    nl.add_port("clk", true, {clk});
    nl.add_port("si", true, {si});
    std::vector<NetIndex> q;
    for (int i = 0; i < 3; ++i) q.push_back(nl.add_net("q" + std::to_string(i)));
    nl.add_port("q", false, {q[2]});
    NetIndex prev = si;
    for (int i = 0; i < 3; ++i) {
        NetIndex din = prev;
        if (i > 0) {
            din = nl.add_net("buf" + std::to_string(i));
            nl.add_gate("bl" + std::to_string(i), Prim::Lut1, 0x2, {prev, din});
        }
        nl.add_gate("f" + std::to_string(i), Prim::Fdre, 0,
                    {clk, nl.const_net(true), din, nl.const_net(false), q[size_t(i)]});
        prev = q[size_t(i)];
    }
    nl.finalize();
    auto mods = identify_seq_modules(nl, nl.ff_gates(), SeqConfig{});
    REQUIRE(mods.size() == 1);
    CHECK(mods[0].kind == ModuleKind::ShiftRegister);
    CHECK(mods[0].serial_in == si);
    CHECK(gate_ids(nl, mods[0].gates) ==
          std::set<std::string>{"f0", "f1", "f2", "bl1", "bl2"});
}

TEST_CASE("a closed ring is no shift register") {
    Netlist nl;
    NetIndex clk = nl.add_net("clk");
    nl.add_port("clk", true, {clk});
    std::vector<NetIndex> q;
    for (int i = 0; i < 3; ++i) q.push_back(nl.add_net("q" + std::to_string(i)));
    nl.add_port("q", false, q);
    for (int i = 0; i < 3; ++i)
        nl.add_gate("f" + std::to_string(i), Prim::Fdre, i == 0 ? 1 : 0,
                    {clk, nl.const_net(true), q[size_t((i + 2) % 3)], nl.const_net(false),
                     q[size_t(i)]});
    nl.finalize();
    auto mods = identify_seq_modules(nl, nl.ff_gates(), SeqConfig{});
    REQUIRE(mods.size() == 1);
    CHECK(mods[0].kind == ModuleKind::Register);
    CHECK(mods[0].gates.size() == 3);
}

TEST_CASE("plain storage words fall out as registers") {
    GenOptions o;
    o.kind = "register";
    o.width = 8;
    GenDesign d = generate(o);
    auto mods = identify_seq_modules(d.netlist, d.netlist.ff_gates(), SeqConfig{});
    REQUIRE(mods.size() == 1);
    const InferredModule& m = mods[0];
    CHECK(m.kind == ModuleKind::Register);
    CHECK(m.output == named_word(d.netlist, "q", 8));
    REQUIRE(m.inputs.size() == 1);
    CHECK(m.inputs[0] == named_word(d.netlist, "d", 8));
    CHECK(m.ctl.ce == d.netlist.require_net("ce"));
}

TEST_CASE("input banks left over by the word stage merge into one register") {
    GenOptions o;
    o.kind = "alu";
    o.width = 4;
    GenDesign d = generate(o);
    CarryContext ctx = build_carry_context(d.netlist);
    ChainView v = make_chain_view(d.netlist, ctx.chains[0]);
    auto alu = identify_alu(d.netlist, v, ctx, AluConfig{});
    REQUIRE(alu);
    std::set<GateIndex> claimed(alu->gates.begin(), alu->gates.end());
    std::vector<GateIndex> free;
    for (GateIndex f : d.netlist.ff_gates())
        if (!claimed.count(f)) free.push_back(f);
    auto mods = identify_seq_modules(d.netlist, free, SeqConfig{});
    REQUIRE(mods.size() == 1);
    CHECK(mods[0].kind == ModuleKind::Register);
    std::vector<NetIndex> want = named_word(d.netlist, "ra_q", 4);
    for (NetIndex n : named_word(d.netlist, "rb_q", 4)) want.push_back(n);
    CHECK(mods[0].output == want);
}

TEST_CASE("oversized storage groups split at sixty-four bits") {
    Netlist nl;
    NetIndex clk = nl.add_net("clk");
    nl.add_port("clk", true, {clk});
    std::vector<NetIndex> dbits, qbits;
    for (int i = 0; i < 70; ++i) {
        dbits.push_back(nl.add_net("d" + std::to_string(i)));
        qbits.push_back(nl.add_net("q" + std::to_string(i)));
    }
    nl.add_port("d", true, dbits);
    nl.add_port("q", false, qbits);
    for (int i = 0; i < 70; ++i)
        nl.add_gate("f" + std::to_string(i), Prim::Fdre, 0,
                    {clk, nl.const_net(true), dbits[size_t(i)], nl.const_net(false),
                     qbits[size_t(i)]});
    nl.finalize();
    auto mods = identify_seq_modules(nl, nl.ff_gates(), SeqConfig{});
    REQUIRE(mods.size() == 2);
    CHECK(mods[0].output.size() == 64);
    CHECK(mods[1].output.size() == 6);
}
