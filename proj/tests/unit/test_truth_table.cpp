#include "doctest.h"

#include <random>

#include "lutrev/netlist_json.hpp"
#include "lutrev/truth_table.hpp"

using namespace lutrev;

namespace {

// Bit-by-bit reference for the packed table operators.
uint64_t naive_flip(uint64_t t, unsigned n, unsigned v) {
    uint64_t out = 0;
    for (uint64_t m = 0; m < (uint64_t(1) << n); ++m)
        out |= ((t >> (m ^ (uint64_t(1) << v))) & 1) << m;
    return out;
}

uint64_t naive_swap(uint64_t t, unsigned n, unsigned v) {
    uint64_t out = 0;
    for (uint64_t m = 0; m < (uint64_t(1) << n); ++m) {
        uint64_t a = (m >> v) & 1, b = (m >> (v + 1)) & 1;
        uint64_t sw = (m & ~((uint64_t(3)) << v)) | (b << v) | (a << (v + 1));
        out |= ((t >> sw) & 1) << m;
    }
    return out;
}

} // namespace

TEST_CASE("packed table ops match the per-bit reference") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        unsigned n = 1 + unsigned(rng() % 6);
        uint64_t bits = rng() & tt_mask(n);
        TtBits t{bits, n};
        for (unsigned v = 0; v < n; ++v)
            CHECK(tt_flip_var(t, v).bits == naive_flip(bits, n, v));
        for (unsigned v = 0; v + 1 < n; ++v)
            CHECK(tt_swap_adjacent(t, v).bits == naive_swap(bits, n, v));
    }
}

TEST_CASE("cofactor fixes a variable") {
    // f = (a & b) | c  as a 3-var table
    uint64_t f = 0;
    for (uint64_t m = 0; m < 8; ++m) {
        uint64_t a = m & 1, b = (m >> 1) & 1, c = (m >> 2) & 1;
        f |= ((a & b) | c) << m;
    }
    TtBits t{f, 3};
    TtBits c1 = tt_cofactor(t, 2, true);   // -> constant 1
    CHECK(c1.nvars == 2);
    CHECK(c1.bits == 0xf);
    TtBits c0 = tt_cofactor(t, 2, false);  // -> a & b
    CHECK(c0.bits == 0x8);
    TtBits a1 = tt_cofactor(t, 0, true);   // -> b | c
    CHECK(a1.bits == 0xe);
}

TEST_CASE("support minimization drops dummy variables") {
    // table over 3 vars that ignores variable 1
    uint64_t f = 0;
    for (uint64_t m = 0; m < 8; ++m) {
        uint64_t a = m & 1, c = (m >> 2) & 1;
        f |= (a ^ c) << m;
    }
    TruthTable t = make_truth_table(TtBits{f, 3}, {10, 11, 12});
    CHECK(t.support == std::vector<NetIndex>{10, 12});
    CHECK(t.fn.nvars == 2);
    CHECK(t.fn.bits == 0x6);
}

TEST_CASE("cone extraction and evaluation reproduce composed logic") {
    const char* text = R"({
      "name": "c",
      "ports": [{"name": "a", "dir": "input", "bits": ["a0","a1","a2","a3"]},
                {"name": "y", "dir": "output", "bits": ["y"]}],
      "gates": [
        {"id": "g1", "type": "LUT2", "init": "6", "conns": {"I0": "a0", "I1": "a1", "O": "t1"}},
        {"id": "g2", "type": "LUT2", "init": "e", "conns": {"I0": "a2", "I1": "a3", "O": "t2"}},
        {"id": "g3", "type": "LUT2", "init": "8", "conns": {"I0": "t1", "I1": "t2", "O": "y"}},
        {"id": "sink", "type": "LUT1", "init": "2", "conns": {"I0": "y", "O": "z"}}
      ]})";
    Netlist nl = read_netlist_json(text);
    GateIndex sink = nl.gate_by_id("sink");
    Cone cone = input_cone(nl, sink, 0);
    CHECK(cone.gates.size() == 3);
    CHECK(cone.frontier.size() == 4);
    TruthTable t = cone_to_function(nl, cone);
    REQUIRE(t.support.size() == 4);
    // independently: y = (a0^a1) & (a2|a3) with support order from the cone
    for (uint64_t m = 0; m < 16; ++m) {
        uint64_t vals[4];
        for (int i = 0; i < 4; ++i) vals[i] = (m >> i) & 1;
        auto bit_of = [&](NetIndex n) -> uint64_t {
            return vals[nl.net(n).id[1] - '0'];
        };
        uint64_t a0 = bit_of(nl.require_net("a0"));
        uint64_t a1 = bit_of(nl.require_net("a1"));
        uint64_t a2 = bit_of(nl.require_net("a2"));
        uint64_t a3 = bit_of(nl.require_net("a3"));
        uint64_t expect = (a0 ^ a1) & (a2 | a3);
        uint64_t idx = 0;
        for (size_t i = 0; i < t.support.size(); ++i)
            idx |= bit_of(t.support[i]) << i;
        CHECK(((t.fn.bits >> idx) & 1) == expect);
    }
}

TEST_CASE("cone stops at sequential and carry boundaries") {
    const char* text = R"({
      "name": "b",
      "ports": [{"name": "clk", "dir": "input", "bits": ["clk"]},
                {"name": "d", "dir": "input", "bits": ["d"]},
                {"name": "y", "dir": "output", "bits": ["y"]}],
      "gates": [
        {"id": "ff", "type": "FDRE", "init": "0",
         "conns": {"C": "clk", "CE": "$1", "D": "d", "R": "$0", "Q": "q"}},
        {"id": "g", "type": "LUT1", "init": "2", "conns": {"I0": "q", "O": "y"}},
        {"id": "sink", "type": "LUT1", "init": "2", "conns": {"I0": "y", "O": "z"}}
      ]})";
    Netlist nl = read_netlist_json(text);
    Cone cone = input_cone(nl, nl.gate_by_id("sink"), 0);
    CHECK(cone.gates.size() == 1);
    REQUIRE(cone.frontier.size() == 1);
    CHECK(nl.net(cone.frontier[0]).id == "q");

    // reverse cone of a pin directly driven by the FF: zero gates
    Cone direct = input_cone(nl, nl.gate_by_id("g"), 0);
    CHECK(direct.gates.empty());
    REQUIRE(direct.frontier.size() == 1);
    CHECK(nl.net(direct.frontier[0]).id == "q");
}

TEST_CASE("forward cone reaches flip-flop boundaries") {
    const char* text = R"({
      "name": "f",
      "ports": [{"name": "clk", "dir": "input", "bits": ["clk"]},
                {"name": "a", "dir": "input", "bits": ["a"]},
                {"name": "q", "dir": "output", "bits": ["q"]}],
      "gates": [
        {"id": "g1", "type": "LUT1", "init": "1", "conns": {"I0": "a", "O": "t"}},
        {"id": "g2", "type": "LUT1", "init": "2", "conns": {"I0": "t", "O": "u"}},
        {"id": "ff", "type": "FDRE", "init": "0",
         "conns": {"C": "clk", "CE": "$1", "D": "u", "R": "$0", "Q": "q"}}
      ]})";
    Netlist nl = read_netlist_json(text);
    GateIndex g1 = nl.gate_by_id("g1");
    Cone fwd = extract_cone(nl, PinRef{g1, 1}, ConeDir::Forward);
    CHECK(fwd.gates.size() == 1);  // g2
    REQUIRE(fwd.frontier.size() == 1);
    CHECK(nl.net(fwd.frontier[0]).id == "u");
}
