#include "doctest.h"

#include <random>

#include "lutrev/netlist_json.hpp"
#include "lutrev/simulate.hpp"
#include "lutrev/truth_table.hpp"

using namespace lutrev;

namespace {

// Single CARRY4 with all pins exposed for direct semantic checks.
Netlist carry_probe() {
    Netlist nl;
    std::vector<NetIndex> pins;
    NetIndex ci = nl.add_net("ci"), cyinit = nl.add_net("cyinit");
    pins.push_back(ci);
    pins.push_back(cyinit);
    std::vector<NetIndex> di, s, o, co;
    for (int i = 0; i < 4; ++i) di.push_back(nl.add_net("di" + std::to_string(i)));
    for (int i = 0; i < 4; ++i) s.push_back(nl.add_net("s" + std::to_string(i)));
    for (int i = 0; i < 4; ++i) o.push_back(nl.add_net("o" + std::to_string(i)));
    for (int i = 0; i < 4; ++i) co.push_back(nl.add_net("co" + std::to_string(i)));
    for (auto& v : {di, s}) for (NetIndex n : v) pins.push_back(n);
    for (auto& v : {o, co}) for (NetIndex n : v) pins.push_back(n);
    nl.add_gate("c", Prim::Carry4, 0, pins);
    nl.add_port("ci", true, {ci});
    nl.add_port("cyinit", true, {cyinit});
    nl.add_port("di", true, di);
    nl.add_port("s", true, s);
    nl.add_port("o", false, o);
    nl.add_port("co", false, co);
    nl.finalize();
    return nl;
}

uint64_t ref_carry_o(unsigned s, unsigned di, unsigned c0) {
    unsigned c = c0, out = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned si = (s >> i) & 1, d = (di >> i) & 1;
        out |= (si ^ c) << i;
        c = si ? c : d;
    }
    return out;
}

uint64_t ref_carry_co(unsigned s, unsigned di, unsigned c0) {
    unsigned c = c0, out = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned si = (s >> i) & 1, d = (di >> i) & 1;
        c = si ? c : d;
        out |= c << i;
    }
    return out;
}

} // namespace

TEST_CASE("carry element semantics, exhaustive") {
    Netlist nl = carry_probe();
    Simulator sim(nl);
    // ports: ci, cyinit, di, s (input order as declared)
    for (unsigned ci = 0; ci < 2; ++ci)
        for (unsigned cy = 0; cy < 2; ++cy)
            for (unsigned di = 0; di < 16; ++di)
                for (unsigned s = 0; s < 16; ++s) {
                    std::vector<uint64_t> in = {ci, cy, di, s};
                    auto out = sim.settle(in);
                    unsigned c0 = ci | cy;
                    CHECK(out[0] == ref_carry_o(s, di, c0));
                    CHECK(out[1] == ref_carry_co(s, di, c0));
                }
}

TEST_CASE("carry all-propagate pushes the initial carry through") {
    Netlist nl = carry_probe();
    Simulator sim(nl);
    std::vector<uint64_t> in = {0, 1, 0x0, 0xf};  // S=1111, DI=0000, CYINIT=1
    auto out = sim.settle(in);
    CHECK(out[0] == 0x0);   // O = S xor carry = 1 xor 1
    CHECK(out[1] == 0xf);   // carries all 1
}

TEST_CASE("flip-flop variants and clock enable") {
    const char* text = R"({
      "name": "ffs",
      "ports": [{"name": "clk", "dir": "input", "bits": ["clk"]},
                {"name": "d", "dir": "input", "bits": ["d"]},
                {"name": "ce", "dir": "input", "bits": ["ce"]},
                {"name": "r", "dir": "input", "bits": ["r"]},
                {"name": "q", "dir": "output",
                 "bits": ["q_re", "q_se", "q_ce", "q_pe"]}],
      "gates": [
        {"id": "f_re", "type": "FDRE", "init": "0",
         "conns": {"C": "clk", "CE": "ce", "D": "d", "R": "r", "Q": "q_re"}},
        {"id": "f_se", "type": "FDSE", "init": "0",
         "conns": {"C": "clk", "CE": "ce", "D": "d", "S": "r", "Q": "q_se"}},
        {"id": "f_ce", "type": "FDCE", "init": "1",
         "conns": {"C": "clk", "CE": "ce", "D": "d", "CLR": "r", "Q": "q_ce"}},
        {"id": "f_pe", "type": "FDPE", "init": "0",
         "conns": {"C": "clk", "CE": "ce", "D": "d", "PRE": "r", "Q": "q_pe"}}
      ]})";
    Netlist nl = read_netlist_json(text);
    Simulator sim(nl);
    // INIT values visible before any clock
    auto out = sim.settle({0, 0, 0, 0});
    CHECK(out[0] == 0b0100);  // only f_ce INITs to 1

    // load 1 with CE=1
    out = sim.step({0, 1, 1, 0});
    out = sim.settle({0, 0, 0, 0});
    CHECK(out[0] == 0b1111);

    // CE=0 holds despite D=0
    out = sim.step({0, 0, 0, 0});
    out = sim.settle({0, 0, 0, 0});
    CHECK(out[0] == 0b1111);

    // reset/set overrides CE
    out = sim.step({0, 0, 0, 1});
    out = sim.settle({0, 0, 0, 0});
    // FDRE->0, FDSE->1, FDCE->0, FDPE->1
    CHECK(out[0] == 0b1010);
}

TEST_CASE("random LUT cones simulate to their INIT bits") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        int k = 1 + int(rng() % 6);
        uint64_t init = rng() & tt_mask(unsigned(k));
        Netlist nl;
        std::vector<NetIndex> ins;
        for (int i = 0; i < k; ++i) ins.push_back(nl.add_net("i" + std::to_string(i)));
        NetIndex y = nl.add_net("y");
        std::vector<NetIndex> pins = ins;
        pins.push_back(y);
        nl.add_gate("g", lut_prim(k), init, pins);
        nl.add_port("in", true, ins);
        nl.add_port("y", false, {y});
        nl.finalize();
        Simulator sim(nl);
        for (uint64_t m = 0; m < (uint64_t(1) << k); ++m) {
            auto out = sim.settle({m});
            CHECK(out[0] == ((init >> m) & 1));
        }
    }
}

TEST_CASE("region evaluator matches the simulator on a lut pair") {
    const char* text = R"({
      "name": "r",
      "ports": [{"name": "a", "dir": "input", "bits": ["a0", "a1", "a2"]},
                {"name": "y", "dir": "output", "bits": ["y"]}],
      "gates": [
        {"id": "g1", "type": "LUT2", "init": "6", "conns": {"I0": "a0", "I1": "a1", "O": "t"}},
        {"id": "g2", "type": "LUT2", "init": "8", "conns": {"I0": "t", "I1": "a2", "O": "y"}}
      ]})";
    Netlist nl = read_netlist_json(text);
    Simulator sim(nl);
    CombRegion region(nl, {nl.gate_by_id("g1"), nl.gate_by_id("g2")},
                      {{nl.require_net("a0"), nl.require_net("a1"), nl.require_net("a2")}},
                      {nl.require_net("y")});
    for (uint64_t m = 0; m < 8; ++m)
        CHECK(region.eval({m}) == sim.settle({m})[0]);
}
